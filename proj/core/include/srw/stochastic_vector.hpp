#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace srw {

/// Tolerance on |sum - 1| for probability vectors and hypermatrix columns.
inline constexpr double kStochasticTol = 1e-12;

/// A length-N probability vector: nonnegative entries summing to one.
///
/// Used for occupation vectors, stationary vectors and teleportation
/// vectors alike. Construction validates; the value is immutable afterwards.
class StochasticVector {
public:
  /// Throws Error(InvalidVector) unless every entry is >= 0 and the entries
  /// sum to 1 within kStochasticTol.
  explicit StochasticVector(std::vector<double> values);

  /// Clamps round-off negatives (>= -kStochasticTol) to zero and divides by
  /// the sum. Anything further from the simplex throws Error(InvalidVector).
  static StochasticVector renormalized(std::vector<double> values);
  static StochasticVector renormalized(const Eigen::VectorXd& values);

  static StochasticVector uniform(std::size_t n);
  /// Unit vector e_k (0-based k).
  static StochasticVector unit(std::size_t n, std::size_t k);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  Eigen::VectorXd to_eigen() const;

  friend bool operator==(const StochasticVector&, const StochasticVector&) = default;

private:
  struct Unchecked {};
  StochasticVector(Unchecked, std::vector<double> values) : values_(std::move(values)) {}

  std::vector<double> values_;
};

/// 1-norm distance between two equal-length vectors.
double l1_distance(std::span<const double> a, std::span<const double> b);

}  // namespace srw
