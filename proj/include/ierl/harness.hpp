#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ierl/embed_store.hpp"
#include "ierl/inference.hpp"
#include "ierl/model_store.hpp"
#include "ierl/trainer.hpp"

namespace ierl {

enum class TaskKind { Similarity, Entailment };

const char* to_string(TaskKind kind);
TaskKind parse_task_kind(const std::string& text);

struct TaskDataset {
  std::string name;
  TaskKind kind = TaskKind::Similarity;
  std::vector<Instance> instances;
  long rows_read = 0;
  long neutral_dropped = 0;
  long malformed = 0;  // wrong field count or empty sentence; skipped
  std::vector<std::string> warnings;
};

/// Reads a TSV whose header names sentence1, sentence2 and label columns.
/// Similarity labels "1"/"0" become +1/-1; entailment labels
/// "entailment"/"contradiction" become +1/-1 and "neutral" rows are dropped.
TaskDataset parse_task_tsv(std::istream& in, TaskKind kind, std::string name = "task");
TaskDataset load_task_tsv(const std::string& path, TaskKind kind);

struct EvalReport {
  std::string task;
  double accuracy = 0;
  long tp = 0, tn = 0, fp = 0, fn = 0;
  long unresolved = 0;  // scored as incorrect
  long total = 0;
  nlohmann::json config = nlohmann::json::object();
};

EvalReport evaluate(const ModelStore& models, const TaskDataset& test, Sources sources);

struct BatchVarianceReport {
  long num_batches = 0;
  double batch_fraction = 0.8;
  std::vector<long> per_batch_steps;
  long min_steps = 0;
  long max_steps = 0;
};

// Indices of a floor(fraction * n)-sized sample without replacement, sorted.
std::vector<std::size_t> sample_batch(std::size_t n, double fraction, std::uint64_t seed,
                                      std::size_t batch);

BatchVarianceReport batch_variance_experiment(const TaskDataset& dataset, Sources sources,
                                              const TrainConfig& config, long num_batches,
                                              std::uint64_t rng_seed, double batch_fraction = 0.8);

struct GridSpec {
  std::vector<double> learning_rates;
  std::vector<double> l1_weights;
  std::vector<int> max_powers;
};

GridSpec parse_grid_spec(const nlohmann::json& j);

struct GridCell {
  TrainConfig config;
  bool ok = false;
  std::string error;
  long run_steps = 0;
  EvalReport report;
};

struct GridSearchResult {
  TrainConfig best;
  std::size_t best_index = 0;
  std::vector<GridCell> cells;
};

// Index of the best successful cell; throws DataError when none succeeded.
std::size_t select_best_cell(const std::vector<GridCell>& cells);

/// Trains on `train`, evaluates on `dev` for every cell. Best = highest dev
/// accuracy, then fewer run steps, then smaller l1 weight, then smaller
/// learning rate. max_powers is ignored in mean mode.
GridSearchResult grid_search(const TaskDataset& train, const TaskDataset& dev, Sources sources,
                             const GridSpec& grid, const TrainConfig& base);

// JSON views of the reports.
nlohmann::json to_json(const TrainConfig& config);
nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const BatchVarianceReport& report);
nlohmann::json to_json(const GridSearchResult& result);
nlohmann::json to_json(const InferenceResult& result);
nlohmann::json to_json(const InterpretabilityReport& report);

BatchVarianceReport batch_variance_from_json(const nlohmann::json& j);

// Rounds every floating-point number to 6 significant digits.
nlohmann::json round_numbers(const nlohmann::json& j);

/// Writes round_numbers(report) with sorted keys, 2-space indent, LF endings.
void emit_report(const nlohmann::json& report, const std::string& path);

}  // namespace ierl
