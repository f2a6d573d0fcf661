#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace srw {

/// Portable generator: mt19937_64's output sequence is fixed by the
/// standard, and the conversions below avoid the implementation-defined
/// std:: distributions, so draws are identical across platforms.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Inverse-CDF draw of an index with probability weights[i] / total.
  /// Zero-weight indices are never returned.
  template <typename T>
  std::size_t categorical(std::span<const T> weights, double total) {
    const double u = uniform() * total;
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0) continue;
      cumulative += static_cast<double>(weights[i]);
      last_positive = i;
      if (u < cumulative) return i;
    }
    return last_positive;  // u landed in the round-off gap at the top
  }

  /// Uniform point on the probability simplex (flat Dirichlet).
  std::vector<double> simplex_point(std::size_t n) {
    std::vector<double> x(n);
    double sum = 0.0;
    for (auto& v : x) {
      v = -std::log1p(-uniform());
      sum += v;
    }
    for (auto& v : x) v /= sum;
    return x;
  }

  std::mt19937_64& engine() noexcept { return engine_; }

private:
  std::mt19937_64 engine_;
};

}  // namespace srw
