#include "ierl/trainer.hpp"

#include <algorithm>
#include <array>
#include <random>

#include "ierl/aggregate.hpp"
#include "ierl/error.hpp"
#include "ierl/parallel.hpp"

namespace ierl {

const char* to_string(AggMode mode) { return mode == AggMode::Mean ? "mean" : "moments"; }

void TrainConfig::validate() const {
  ierl::validate(solver_options());
  if (agg_mode == AggMode::Moments && max_power < 0)
    throw ConfigError("max_power must be non-negative");
}

SolverOptions<double> TrainConfig::solver_options() const {
  SolverOptions<double> options;
  options.learning_rate = learning_rate;
  options.l1_weight = l1_weight;
  options.tol = tol;
  options.max_iters = max_iters;
  options.param_tol = param_tol;
  return options;
}

ContextSets build_context_sets(std::span<const Instance> dataset, std::span<const PairReps> reps,
                               std::size_t i, int slot, Stream stream,
                               bool literal_negative_slots) {
  if (dataset.empty()) throw DataError("empty dataset");
  if (reps.size() != dataset.size()) throw DataError("representation count does not match dataset");
  if (i >= dataset.size()) throw DataError("instance index out of range");
  if (slot != 1 && slot != 2) throw DataError("sentence slot must be 1 or 2");

  ContextSets sets;
  const PairReps& own = reps[i];
  if (dataset[i].label == +1) {
    sets.sim = {own.get(stream, 1), own.get(stream, 2)};
  } else {
    const int sim_slot = literal_negative_slots ? 1 : slot;
    sets.sim = {own.get(stream, sim_slot)};
    sets.dis.push_back(own.get(stream, 3 - sim_slot));
  }
  for (std::size_t m = 0; m < reps.size(); ++m) {
    if (m == i) continue;
    sets.dis.push_back(reps[m].get(stream, 1));
    sets.dis.push_back(reps[m].get(stream, 2));
  }
  if (sets.dis.empty()) throw DataError("no dissimilar context for instance " + std::to_string(i));
  return sets;
}

Vec aggregate(std::span<const Vec> vectors, const TrainConfig& config) {
  if (config.agg_mode == AggMode::Mean) return agg_mean(vectors);
  return agg_moments(vectors, config.max_power);
}

Vec4 build_d_vector(const Vec& t, const Vec& c, const Vec& t_sim, const Vec& t_dis,
                    const Vec& c_sim, const Vec& c_dis, const TrainConfig& config) {
  const bool lift = config.agg_mode == AggMode::Moments;
  const Vec tq = unit_normalize(lift ? moment_lift(t, config.max_power) : t);
  const Vec cq = unit_normalize(lift ? moment_lift(c, config.max_power) : c);
  return Vec4(unit_dot(tq, unit_normalize(t_sim)), unit_dot(tq, unit_normalize(t_dis)),
              unit_dot(cq, unit_normalize(c_sim)), unit_dot(cq, unit_normalize(c_dis)));
}

Vec4 init_alpha(std::uint64_t seed, std::size_t instance, int slot) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(instance),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(instance) >> 32),
                    static_cast<std::uint32_t>(slot)};
  std::mt19937_64 engine(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec4 alpha;
  for (int k = 0; k < 4; ++k) alpha[k] = normal(engine);
  return alpha;
}

SentenceModel fit_sentence_model(const Vec4& d, const Vec4& alpha0, const TrainConfig& config) {
  const auto solved = solve_alpha(d, target_vector<double>(), alpha0, config.solver_options());
  SentenceModel model;
  model.g = solved.objective;
  model.alpha = solved.alpha;
  model.steps = solved.steps;
  model.d = d;
  return model;
}

namespace {

// Per-stream aggregation that reuses one running sum over every sentence of
// the dataset: the dissimilar set of instance i is "everything except i" (plus
// the other slot for negative labels), so its aggregate is (total - own) / count.
class StreamAggregator {
 public:
  StreamAggregator(std::span<const Instance> dataset, std::span<const PairReps> unit_reps,
                   Stream stream, const TrainConfig& config)
      : dataset_(dataset), config_(config) {
    lifted_.reserve(unit_reps.size());
    for (const auto& r : unit_reps) {
      lifted_.push_back({lift(r.get(stream, 1)), lift(r.get(stream, 2))});
      if (lifted_.size() == 1) total_ = Vec::Zero(lifted_.front()[0].size());
      total_ += lifted_.back()[0];
      total_ += lifted_.back()[1];
    }
  }

  std::pair<Vec, Vec> sim_dis(std::size_t i, int slot) const {
    const auto& own = lifted_[i];
    const double others = 2.0 * static_cast<double>(dataset_.size() - 1);
    if (dataset_[i].label == +1) {
      if (others == 0) throw DataError("no dissimilar context for instance " + std::to_string(i));
      Vec sim = (own[0] + own[1]) / 2.0;
      Vec dis = (total_ - own[0] - own[1]) / others;
      return {std::move(sim), std::move(dis)};
    }
    const int sim_slot = config_.literal_negative_slots ? 1 : slot;
    Vec sim = own[sim_slot - 1];
    Vec dis = (total_ - own[sim_slot - 1]) / (others + 1.0);
    return {std::move(sim), std::move(dis)};
  }

 private:
  Vec lift(const Vec& v) const {
    return config_.agg_mode == AggMode::Moments ? moment_lift(v, config_.max_power) : v;
  }

  std::span<const Instance> dataset_;
  const TrainConfig& config_;
  std::vector<std::array<Vec, 2>> lifted_;
  Vec total_;
};

}  // namespace

TrainResult train(std::span<const Instance> dataset, Sources sources, const TrainConfig& config) {
  config.validate();
  if (dataset.empty()) throw DataError("empty dataset");

  std::vector<PairReps> unit_reps(dataset.size());
  parallel_for(
      dataset.size(),
      [&](std::size_t i) {
        const Instance& inst = dataset[i];
        if (inst.label != 1 && inst.label != -1)
          throw DataError("instance " + std::to_string(i) + " has label outside {+1, -1}");
        PairReps raw = pair_representations(sources.llm, sources.kg, inst);
        unit_reps[i] = {unit_normalize(raw.t1), unit_normalize(raw.t2), unit_normalize(raw.c1),
                        unit_normalize(raw.c2)};
      },
      config.threads);

  const StreamAggregator llm(dataset, unit_reps, Stream::LLM, config);
  const StreamAggregator kg(dataset, unit_reps, Stream::KG, config);

  std::vector<SentenceModel> models(2 * dataset.size());
  parallel_for(
      models.size(),
      [&](std::size_t task) {
        const std::size_t i = task / 2;
        const int slot = static_cast<int>(task % 2) + 1;
        const auto [t_sim, t_dis] = llm.sim_dis(i, slot);
        const auto [c_sim, c_dis] = kg.sim_dis(i, slot);
        const Vec4 d = build_d_vector(unit_reps[i].get(Stream::LLM, slot),
                                      unit_reps[i].get(Stream::KG, slot), t_sim, t_dis, c_sim,
                                      c_dis, config);
        models[task] = fit_sentence_model(d, init_alpha(config.seed, i, slot), config);
      },
      config.threads);

  TrainResult result;
  result.steps.reserve(models.size());
  for (std::size_t task = 0; task < models.size(); ++task) {
    const std::size_t i = task / 2;
    const int slot = static_cast<int>(task % 2) + 1;
    result.models.add(dataset[i].sentence(slot), i, slot, models[task]);
    result.steps.push_back(models[task].steps);
    result.run_steps = std::max(result.run_steps, models[task].steps);
  }
  return result;
}

}  // namespace ierl
