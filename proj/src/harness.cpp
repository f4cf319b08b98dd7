#include "ierl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <random>
#include <tuple>

#include "ierl/error.hpp"

namespace ierl {

const char* to_string(TaskKind kind) {
  return kind == TaskKind::Similarity ? "similarity" : "entailment";
}

TaskKind parse_task_kind(const std::string& text) {
  if (text == "similarity") return TaskKind::Similarity;
  if (text == "entailment") return TaskKind::Entailment;
  throw ConfigError("unknown task kind '" + text + "' (expected similarity or entailment)");
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \r\n");
  return s.substr(begin, end - begin + 1);
}

// 0 means "drop the row" (neutral).
int remap_label(const std::string& label, TaskKind kind, std::size_t line) {
  if (kind == TaskKind::Similarity) {
    if (label == "1") return +1;
    if (label == "0") return -1;
  } else {
    if (label == "entailment") return +1;
    if (label == "contradiction") return -1;
    if (label == "neutral") return 0;
  }
  throw ParseError(line, "unrecognized " + std::string(to_string(kind)) + " label '" + label + "'");
}

}  // namespace

TaskDataset parse_task_tsv(std::istream& in, TaskKind kind, std::string name) {
  TaskDataset dataset;
  dataset.name = std::move(name);
  dataset.kind = kind;

  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header row");
  auto header = split_tabs(line);
  for (auto& h : header) h = trim(h);
  auto column = [&](const char* wanted) {
    auto it = std::find(header.begin(), header.end(), wanted);
    if (it == header.end()) throw ParseError(1, std::string("missing column '") + wanted + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t s1 = column("sentence1");
  const std::size_t s2 = column("sentence2");
  const std::size_t lab = column("label");

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++dataset.rows_read;
    const auto fields = split_tabs(line);
    if (fields.size() != header.size() || fields[s1].empty() || fields[s2].empty()) {
      ++dataset.malformed;
      dataset.warnings.push_back("line " + std::to_string(line_no) + ": malformed row skipped");
      continue;
    }
    const int label = remap_label(trim(fields[lab]), kind, line_no);
    if (label == 0) {
      ++dataset.neutral_dropped;
      continue;
    }
    dataset.instances.push_back({fields[s1], fields[s2], label});
  }
  if (dataset.neutral_dropped > 0) {
    dataset.warnings.push_back(std::to_string(dataset.neutral_dropped) + " neutral rows dropped");
  }
  return dataset;
}

TaskDataset load_task_tsv(const std::string& path, TaskKind kind) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return parse_task_tsv(in, kind, path);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path);
  }
}

EvalReport evaluate(const ModelStore& models, const TaskDataset& test, Sources sources) {
  if (test.instances.empty()) throw DataError("empty evaluation set");
  const RetrievalIndex index(models, sources);
  EvalReport report;
  report.task = test.name;
  for (const auto& inst : test.instances) {
    ++report.total;
    int decision = 0;
    try {
      decision = infer_pair(inst.sentence1, inst.sentence2, index).decision;
    } catch (const DataError&) {
      ++report.unresolved;
      continue;
    }
    if (inst.label == +1) {
      (decision == +1 ? report.tp : report.fn) += 1;
    } else {
      (decision == -1 ? report.tn : report.fp) += 1;
    }
  }
  report.accuracy = static_cast<double>(report.tp + report.tn) / static_cast<double>(report.total);
  return report;
}

std::vector<std::size_t> sample_batch(std::size_t n, double fraction, std::uint64_t seed,
                                      std::size_t batch) {
  if (!(fraction > 0.0) || fraction > 1.0) throw ConfigError("batch fraction must be in (0, 1]");
  const auto size = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(batch)};
  std::mt19937_64 engine(seq);
  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  std::shuffle(indices.begin(), indices.end(), engine);
  indices.resize(size);
  std::sort(indices.begin(), indices.end());
  return indices;
}

BatchVarianceReport batch_variance_experiment(const TaskDataset& dataset, Sources sources,
                                              const TrainConfig& config, long num_batches,
                                              std::uint64_t rng_seed, double batch_fraction) {
  if (num_batches <= 0) throw ConfigError("num_batches must be positive");
  const std::size_t n = dataset.instances.size();
  if (std::floor(batch_fraction * static_cast<double>(n) + 1e-9) < 2) {
    throw DataError("dataset too small: a " + std::to_string(batch_fraction) + " batch of " +
                    std::to_string(n) + " instances has fewer than 2 instances");
  }
  BatchVarianceReport report;
  report.num_batches = num_batches;
  report.batch_fraction = batch_fraction;
  for (long b = 0; b < num_batches; ++b) {
    std::vector<Instance> batch;
    for (std::size_t idx : sample_batch(n, batch_fraction, rng_seed, static_cast<std::size_t>(b)))
      batch.push_back(dataset.instances[idx]);
    try {
      report.per_batch_steps.push_back(train(batch, sources, config).run_steps);
    } catch (const Error& e) {
      throw DataError("batch " + std::to_string(b) + ": " + e.what());
    }
  }
  const auto [lo, hi] = std::minmax_element(report.per_batch_steps.begin(), report.per_batch_steps.end());
  report.min_steps = *lo;
  report.max_steps = *hi;
  return report;
}

GridSpec parse_grid_spec(const nlohmann::json& j) {
  GridSpec grid;
  try {
    grid.learning_rates = j.at("learning_rates").get<std::vector<double>>();
    grid.l1_weights = j.at("l1_weights").get<std::vector<double>>();
    if (j.contains("max_powers")) grid.max_powers = j.at("max_powers").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid grid spec: ") + e.what());
  }
  return grid;
}

std::size_t select_best_cell(const std::vector<GridCell>& cells) {
  auto rank = [](const GridCell& c) {
    return std::make_tuple(-c.report.accuracy, c.run_steps, c.config.l1_weight, c.config.learning_rate);
  };
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (!cells[k].ok) continue;
    if (!best || rank(cells[k]) < rank(cells[*best])) best = k;
  }
  if (!best) {
    throw DataError("every grid cell failed" +
                    (cells.empty() ? std::string() : "; first error: " + cells.front().error));
  }
  return *best;
}

GridSearchResult grid_search(const TaskDataset& train_set, const TaskDataset& dev, Sources sources,
                             const GridSpec& grid, const TrainConfig& base) {
  const bool moments = base.agg_mode == AggMode::Moments;
  if (grid.learning_rates.empty() || grid.l1_weights.empty() || (moments && grid.max_powers.empty()))
    throw ConfigError("grid lists must be non-empty");
  const std::vector<int> powers = moments ? grid.max_powers : std::vector<int>{base.max_power};

  GridSearchResult result;
  for (double lr : grid.learning_rates) {
    for (double l1 : grid.l1_weights) {
      for (int p : powers) {
        GridCell cell;
        cell.config = base;
        cell.config.learning_rate = lr;
        cell.config.l1_weight = l1;
        cell.config.max_power = p;
        try {
          const auto trained = train(train_set.instances, sources, cell.config);
          cell.run_steps = trained.run_steps;
          cell.report = evaluate(trained.models, dev, sources);
          cell.ok = true;
        } catch (const Error& e) {
          cell.error = e.what();
        }
        result.cells.push_back(std::move(cell));
      }
    }
  }

  result.best_index = select_best_cell(result.cells);
  result.best = result.cells[result.best_index].config;
  return result;
}

nlohmann::json to_json(const TrainConfig& c) {
  nlohmann::json j;
  j["learning_rate"] = c.learning_rate;
  j["l1_weight"] = c.l1_weight;
  j["tol"] = c.tol;
  j["max_iters"] = c.max_iters;
  j["seed"] = c.seed;
  j["agg_mode"] = to_string(c.agg_mode);
  if (c.agg_mode == AggMode::Moments) j["max_power"] = c.max_power;
  return j;
}

nlohmann::json to_json(const EvalReport& r) {
  return {{"task", r.task},     {"accuracy", r.accuracy}, {"tp", r.tp},
          {"tn", r.tn},         {"fp", r.fp},             {"fn", r.fn},
          {"unresolved", r.unresolved}, {"total", r.total}, {"config", r.config}};
}

nlohmann::json to_json(const BatchVarianceReport& r) {
  return {{"num_batches", r.num_batches}, {"batch_fraction", r.batch_fraction},
          {"per_batch_steps", r.per_batch_steps}, {"min_steps", r.min_steps},
          {"max_steps", r.max_steps}};
}

BatchVarianceReport batch_variance_from_json(const nlohmann::json& j) {
  BatchVarianceReport r;
  r.num_batches = j.at("num_batches").get<long>();
  r.batch_fraction = j.at("batch_fraction").get<double>();
  r.per_batch_steps = j.at("per_batch_steps").get<std::vector<long>>();
  r.min_steps = j.at("min_steps").get<long>();
  r.max_steps = j.at("max_steps").get<long>();
  return r;
}

nlohmann::json to_json(const GridSearchResult& result) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : result.cells) {
    nlohmann::json cell{{"config", to_json(c.config)}, {"ok", c.ok}};
    if (c.ok) {
      cell["run_steps"] = c.run_steps;
      cell["report"] = to_json(c.report);
    } else {
      cell["error"] = c.error;
    }
    cells.push_back(std::move(cell));
  }
  return {{"best", to_json(result.best)}, {"best_index", result.best_index}, {"cells", cells}};
}

namespace {
nlohmann::json vec4_json(const Vec4& v) { return nlohmann::json::array({v[0], v[1], v[2], v[3]}); }
}  // namespace

nlohmann::json to_json(const InferenceResult& r) {
  return {{"z", r.z},
          {"z2", r.z2},
          {"x1", r.x1},
          {"x2", r.x2},
          {"s1", r.s1},
          {"s2", r.s2},
          {"displayed_similarity", r.displayed_similarity},
          {"decision", r.decision},
          {"color", r.decision == +1 ? "green" : "pink"},
          {"dominant_context", to_string(r.dominant_context)},
          {"shape", r.dominant_context == Stream::LLM ? "rectangle" : "oval"},
          {"threshold", r.threshold},
          {"alpha_x1", vec4_json(r.alpha_x1)},
          {"alpha_x2", vec4_json(r.alpha_x2)}};
}

nlohmann::json to_json(const InterpretabilityReport& report) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& r : report.pairs) pairs.push_back(to_json(r));
  return {{"pairs", pairs},
          {"llm_dominant", report.llm_dominant},
          {"kg_dominant", report.kg_dominant},
          {"green", report.green},
          {"pink", report.pink}};
}

nlohmann::json round_numbers(const nlohmann::json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return j;
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.6g", v);
    return std::strtod(buffer, nullptr);
  }
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : j) out.push_back(round_numbers(e));
    return out;
  }
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : j.items()) out[k] = round_numbers(v);
    return out;
  }
  return j;
}

void emit_report(const nlohmann::json& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report to '" + path + "'");
  out << round_numbers(report).dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace ierl
