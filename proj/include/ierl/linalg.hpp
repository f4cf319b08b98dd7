#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <cstdint>

#include "ierl/error.hpp"

namespace ierl {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;

using Vec = VectorX<double>;
using Vec4 = Vector4<double>;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

// v / ||v||_2, or the zero vector unchanged when ||v||_2 == 0.
template <typename Derived>
VectorX<typename Derived::Scalar> unit_normalize(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (!v.allFinite()) throw DataError("unit_normalize: non-finite input element");
  const Scalar norm = v.norm();
  if (norm == Scalar(0)) return VectorX<Scalar>::Zero(v.size());
  return v / norm;
}

// Observes the norms of every vector that reaches unit_dot. Installed only by
// instrumented runs; null in normal operation.
class NormProbe {
 public:
  explicit NormProbe(double tolerance = 1e-9) : tolerance_(tolerance) {}

  void observe(double norm) {
    observed_.fetch_add(1, std::memory_order_relaxed);
    const bool ok = std::abs(norm) <= tolerance_ || std::abs(norm - 1.0) <= tolerance_;
    if (!ok) violations_.fetch_add(1, std::memory_order_relaxed);
  }

  std::uint64_t observed() const { return observed_.load(); }
  std::uint64_t violations() const { return violations_.load(); }

 private:
  double tolerance_;
  std::atomic<std::uint64_t> observed_{0};
  std::atomic<std::uint64_t> violations_{0};
};

namespace detail {
inline std::atomic<NormProbe*>& norm_probe_slot() {
  static std::atomic<NormProbe*> slot{nullptr};
  return slot;
}
}  // namespace detail

// RAII installation of a NormProbe for the lifetime of the guard.
class ScopedNormProbe {
 public:
  explicit ScopedNormProbe(NormProbe& probe)
      : previous_(detail::norm_probe_slot().exchange(&probe)) {}
  ~ScopedNormProbe() { detail::norm_probe_slot().store(previous_); }
  ScopedNormProbe(const ScopedNormProbe&) = delete;
  ScopedNormProbe& operator=(const ScopedNormProbe&) = delete;

 private:
  NormProbe* previous_;
};

// Dot product of two vectors that are expected to be unit (or zero) vectors.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar unit_dot(const Eigen::MatrixBase<DerivedA>& a,
                                   const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) {
    throw DataError("dot product dimension mismatch: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
  if (NormProbe* probe = detail::norm_probe_slot().load(std::memory_order_relaxed)) {
    probe->observe(static_cast<double>(a.norm()));
    probe->observe(static_cast<double>(b.norm()));
  }
  return a.dot(b);
}

// Cosine similarity; zero vectors give 0.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA>& a,
                                 const Eigen::MatrixBase<DerivedB>& b) {
  return unit_dot(unit_normalize(a), unit_normalize(b));
}

}  // namespace ierl
