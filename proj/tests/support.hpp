#pragma once

// Test-only oracles and fixtures. Nothing here is used by the library.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "ierl/embed_store.hpp"
#include "ierl/linalg.hpp"

namespace ierl::testing {

// Per-coordinate minimizer of (I_k - a D_k)^2 + lambda |a|.
inline double closed_form_coordinate(double d, double target, double lambda) {
  if (d == 0.0) return 0.0;
  const double a = target * d;
  const double shrunk = std::max(std::abs(a) - lambda / 2.0, 0.0);
  return std::copysign(shrunk, a) / (d * d);
}

inline Vec4 closed_form_alpha(const Vec4& d, const Vec4& target, double lambda) {
  Vec4 alpha;
  for (int k = 0; k < 4; ++k) alpha[k] = closed_form_coordinate(d[k], target[k], lambda);
  return alpha;
}

// Dense 1-d scan of (I - a D)^2 + lambda |a| over [lo, hi].
inline double grid_search_coordinate(double d, double target, double lambda, double lo, double hi,
                                     double step) {
  double best_a = lo;
  double best = INFINITY;
  const long n = static_cast<long>(std::llround((hi - lo) / step));
  for (long k = 0; k <= n; ++k) {
    const double a = lo + step * static_cast<double>(k);
    const double r = target - a * d;
    const double f = r * r + lambda * std::abs(a);
    if (f < best) {
      best = f;
      best_a = a;
    }
  }
  return best_a;
}

// Mean of element-wise power lifts, written as plain nested loops.
inline std::vector<double> brute_force_moments(const std::vector<std::vector<double>>& vectors,
                                               int max_power) {
  const std::size_t d = vectors.front().size();
  std::vector<double> out((max_power + 1) * d, 0.0);
  for (const auto& v : vectors) {
    for (int p = 0; p <= max_power; ++p) {
      for (std::size_t e = 0; e < d; ++e) {
        double power = 1.0;
        for (int q = 0; q < p; ++q) power *= v[e];
        out[p * d + e] += power;
      }
    }
  }
  for (auto& x : out) x /= static_cast<double>(vectors.size());
  return out;
}

inline Vec to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Sentence-pair task built from Gaussian clusters. Sentence k is the single
// token "s<k>", so its KG vector is exactly the table entry.
struct SyntheticTask {
  std::vector<Instance> instances;
  SentenceEmbeddingStore llm{1};
  EmbeddingTable kg{1};
};

struct StreamSpec {
  int dim = 8;
  bool informative = true;  // false: isotropic N(0, I) noise
  double separation = 4.0;  // distance of each cluster centre from the origin
  double offset = 0.0;      // shared component along the first axis
  double sigma = 0.5;
};

struct SyntheticOptions {
  std::size_t instances = 40;
  std::size_t first_sentence = 0;  // numbering offset, for disjoint test sets
  StreamSpec llm;
  StreamSpec kg;
  std::uint64_t seed = 1;
};

// Cluster c is centred at separation * (unit vector on axis c), shifted by
// offset along the last axis.
inline Vec cluster_point(const StreamSpec& spec, int cluster, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(spec.dim);
  for (int k = 0; k < spec.dim; ++k) v[k] = normal(rng);
  if (!spec.informative) return v;
  v *= spec.sigma;
  v[cluster % spec.dim] += spec.separation;
  v[spec.dim - 1] += spec.offset;
  return v;
}

inline void add_synthetic(SyntheticTask& task, const SyntheticOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::bernoulli_distribution coin(0.5);
  std::size_t next = opt.first_sentence;
  for (std::size_t i = 0; i < opt.instances; ++i) {
    const int cluster1 = coin(rng) ? 1 : 0;
    const int label = coin(rng) ? +1 : -1;
    const int cluster2 = label == +1 ? cluster1 : 1 - cluster1;
    std::string names[2] = {"s" + std::to_string(next), "s" + std::to_string(next + 1)};
    next += 2;
    const int clusters[2] = {cluster1, cluster2};
    for (int s = 0; s < 2; ++s) {
      task.llm.insert(names[s], cluster_point(opt.llm, clusters[s], rng));
      task.kg.insert(names[s], cluster_point(opt.kg, clusters[s], rng));
    }
    task.instances.push_back({names[0], names[1], label});
  }
}

inline SyntheticTask make_synthetic(const SyntheticOptions& opt) {
  SyntheticTask task{{}, SentenceEmbeddingStore(opt.llm.dim), EmbeddingTable(opt.kg.dim)};
  add_synthetic(task, opt);
  return task;
}

// Fresh per-test scratch directory under the system temp dir.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("ierl_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    const std::string p = file(name);
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace ierl::testing
