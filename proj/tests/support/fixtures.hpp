#pragma once

// Hypermatrices and frozen reference values shared by the test binaries.

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "srw/hypermatrix.hpp"

namespace srw::fixtures {

inline Eigen::MatrixXd rows(std::size_t n, std::size_t cols, std::initializer_list<double> values) {
  Eigen::MatrixXd r(n, cols);
  auto it = values.begin();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < cols; ++c) r(i, c) = *it++;
  return r;
}

// Two-state walk whose power iteration oscillates.
inline TransitionHypermatrix nonconvergent() {
  return TransitionHypermatrix::create(3, 2, rows(2, 4, {0, 1, 1, 1, 1, 0, 0, 0}));
}
inline const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

// Polya urn: the walk copies the remembered state.
inline TransitionHypermatrix polya() {
  return TransitionHypermatrix::create(3, 2, rows(2, 4, {1, 1, 0, 0, 0, 0, 1, 1}));
}

// Order-4 two-state walk with three equilibria.
inline TransitionHypermatrix three_equilibria() {
  return TransitionHypermatrix::create(
      4, 2,
      rows(2, 8, {0.925, 0.925, 0.925, 0.075, 0.925, 0.075, 0.075, 0.075,  //
                  0.075, 0.075, 0.075, 0.925, 0.075, 0.925, 0.925, 0.925}));
}
// Bisection oracle at 40 digits.
inline constexpr double kThreeEquilibria[3] = {0.097800166730078142395, 0.5,
                                              0.90219983326992185761};

// Second-order chain on three states; column (k, j) -> k * 3 + j holds
// P(next | last j, second-last k).
inline TransitionHypermatrix second_order_example() {
  return TransitionHypermatrix::create(
      3, 3,
      rows(3, 9, {0, 0, 0, 1.0 / 4, 0, 0, 1.0 / 4, 0, 3.0 / 4,  //
                  3.0 / 5, 2.0 / 3, 0, 1.0 / 2, 0, 1.0 / 2, 0, 1.0 / 2, 0,  //
                  2.0 / 5, 1.0 / 3, 1, 1.0 / 4, 1, 1.0 / 2, 3.0 / 4, 1.0 / 2, 1.0 / 4}));
}
// Exact stationary pair distribution, (last, second-last).
inline Eigen::Matrix3d second_order_pairs() {
  Eigen::Matrix3d x;
  x << 6.0 / 101, 0.0, 24.0 / 101,  //
      18.0 / 505, 21.0 / 505, 18.0 / 505,  //
      102.0 / 505, 36.0 / 505, 32.0 / 101;
  return x;
}

// First-order chain on the same states, and its exact stationary vector.
inline Eigen::Matrix3d first_order_example() {
  Eigen::Matrix3d p;
  p << 1.0 / 2, 0, 3.0 / 5,  //
      1.0 / 4, 2.0 / 3, 1.0 / 5,  //
      1.0 / 4, 1.0 / 3, 1.0 / 5;
  return p;
}
inline const std::vector<double> kFirstOrderStationary = {12.0 / 37, 15.0 / 37, 10.0 / 37};

inline TransitionHypermatrix r1() {
  return TransitionHypermatrix::create(
      3, 4,
      rows(4, 16, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0,   0, 0, 0.5, 0, 0, 1,  //
                   0, 0, 0, 0, 0, 1, 0, 1, 0, 0.5, 0, 0, 0,   1, 0, 0,  //
                   0, 0, 0, 0, 0, 0, 1, 0, 0, 0.5, 1, 0, 0,   0, 0, 0,  //
                   1, 1, 1, 1, 1, 0, 0, 0, 1, 0,   0, 1, 0.5, 0, 1, 0}));
}
inline TransitionHypermatrix r2() {
  return TransitionHypermatrix::create(
      3, 4,
      rows(4, 16, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0,   0, 1, 1, 0, 1, 0,  //
                   0, 0, 0, 0, 0, 1, 0, 1, 0, 0.5, 0, 0, 0, 1, 0, 0,  //
                   0, 0, 0, 0, 0, 0, 1, 0, 0, 0.5, 1, 0, 0, 0, 0, 0,  //
                   1, 1, 1, 1, 1, 0, 0, 0, 1, 0,   0, 0, 0, 0, 0, 1}));
}
// Interior fixed points from an independent nonlinear solve (6 digits).
inline const std::vector<double> kR1Interior = {0.040715, 0.465144, 0.302284, 0.191857};
inline const std::vector<double> kR2Interior = {0.08628, 0.538048, 0.192928, 0.182744};

}  // namespace srw::fixtures
