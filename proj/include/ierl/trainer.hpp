#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ierl/embed_store.hpp"
#include "ierl/model_store.hpp"
#include "ierl/solver.hpp"

namespace ierl {

enum class AggMode { Mean, Moments };

const char* to_string(AggMode mode);

struct TrainConfig {
  double learning_rate = 0.25;
  double l1_weight = 1.0;
  double tol = 1e-8;
  long max_iters = 10000;
  std::uint64_t seed = 0;
  AggMode agg_mode = AggMode::Moments;
  int max_power = 3;
  // Extra stopping condition on the per-iteration parameter change; unset by default.
  std::optional<double> param_tol;
  // Negative-label context sets use slot 1 as "similar" for both slots, as the
  // algorithm listing is written, instead of the slot-symmetric reading.
  bool literal_negative_slots = false;
  std::size_t threads = 0;  // 0 = IERL_THREADS or hardware concurrency

  void validate() const;
  SolverOptions<double> solver_options() const;
};

struct ContextSets {
  std::vector<Vec> sim;
  std::vector<Vec> dis;
};

/// Similar/dissimilar context lists for sentence `slot` of instance `i`.
///
/// Label +1: sim = both sentences of i, dis = every sentence of every other
/// instance. Label -1: sim = sentence `slot` of i, dis = the other sentence of i
/// followed by every sentence of every other instance. `reps` must already be
/// in the form that should be aggregated (the trainer passes unit vectors).
ContextSets build_context_sets(std::span<const Instance> dataset, std::span<const PairReps> reps,
                               std::size_t i, int slot, Stream stream,
                               bool literal_negative_slots = false);

// agg_mean or agg_moments according to config.
Vec aggregate(std::span<const Vec> vectors, const TrainConfig& config);

/// [t.t_sim, t.t_dis, c.c_sim, c.c_dis] after moment-lifting the queries (in
/// moments mode) and unit-normalizing every operand.
Vec4 build_d_vector(const Vec& t, const Vec& c, const Vec& t_sim, const Vec& t_dis,
                    const Vec& c_sim, const Vec& c_dis, const TrainConfig& config);

// Four standard-normal draws from a generator seeded by (seed, instance, slot).
Vec4 init_alpha(std::uint64_t seed, std::size_t instance, int slot);

SentenceModel fit_sentence_model(const Vec4& d, const Vec4& alpha0, const TrainConfig& config);

struct TrainResult {
  ModelStore models;
  std::vector<long> steps;  // per model, in store order
  long run_steps = 0;       // max over models
};

TrainResult train(std::span<const Instance> dataset, Sources sources, const TrainConfig& config);

}  // namespace ierl
