#pragma once

#include <span>
#include <string>

#include "ierl/error.hpp"
#include "ierl/linalg.hpp"

namespace ierl {

struct MomentConfig {
  int max_power = 3;
};

// concat(v^0, v^1, ..., v^P) with element-wise powers and 0^0 = 1.
template <typename Derived>
VectorX<typename Derived::Scalar> moment_lift(const Eigen::MatrixBase<Derived>& v, int max_power) {
  using Scalar = typename Derived::Scalar;
  if (max_power < 0) throw ConfigError("moment_lift: max_power must be non-negative");
  if (!v.allFinite()) throw DataError("moment_lift: non-finite input element");
  const Eigen::Index d = v.size();
  VectorX<Scalar> lifted(d * (max_power + 1));
  VectorX<Scalar> power = VectorX<Scalar>::Ones(d);
  for (int k = 0; k <= max_power; ++k) {
    lifted.segment(k * d, d) = power;
    power = power.cwiseProduct(v);
  }
  if (!lifted.allFinite()) throw DataError("moment_lift: power block overflowed to non-finite");
  return lifted;
}

namespace detail {
template <typename Scalar>
Eigen::Index common_dimension(std::span<const VectorX<Scalar>> vectors, const char* what) {
  if (vectors.empty()) throw DataError(std::string(what) + ": empty aggregation set");
  const Eigen::Index d = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != d) {
      throw DataError(std::string(what) + ": mixed dimensions " + std::to_string(d) + " and " +
                      std::to_string(v.size()));
    }
  }
  return d;
}
}  // namespace detail

// Element-wise mean of the moment lifts of every input vector.
template <typename Scalar>
VectorX<Scalar> agg_moments(std::span<const VectorX<Scalar>> vectors, int max_power) {
  const Eigen::Index d = detail::common_dimension(vectors, "agg_moments");
  VectorX<Scalar> sum = VectorX<Scalar>::Zero(d * (max_power + 1));
  for (const auto& v : vectors) sum += moment_lift(v, max_power);
  return sum / static_cast<Scalar>(vectors.size());
}

// Baseline aggregation: plain element-wise mean.
template <typename Scalar>
VectorX<Scalar> agg_mean(std::span<const VectorX<Scalar>> vectors) {
  const Eigen::Index d = detail::common_dimension(vectors, "agg_mean");
  VectorX<Scalar> sum = VectorX<Scalar>::Zero(d);
  for (const auto& v : vectors) sum += v;
  return sum / static_cast<Scalar>(vectors.size());
}

}  // namespace ierl
