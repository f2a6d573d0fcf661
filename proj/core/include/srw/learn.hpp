#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "srw/hypermatrix.hpp"
#include "srw/simulate.hpp"
#include "srw/stochastic_vector.hpp"

namespace srw {

struct FitConfig {
  std::size_t max_iters = 10000;
  double step0 = 1.0;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  /// Stop when ||P - proj(P - grad)||_1 falls to this value.
  double tol = 1e-6;
  /// Only used when uniform_init is false.
  std::uint64_t seed = 0;
  bool uniform_init = true;

  /// Throws OutOfRange for non-positive values or c, shrink outside (0, 1).
  void check() const;
};

struct FitResult {
  TransitionHypermatrix hypermatrix;
  /// NLL of the initial point, then after every accepted step.
  std::vector<double> nll_trace;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Negative log-likelihood; `finite` is false when some scored transition
/// has zero probability (value is then +inf).
struct NllValue {
  double value = 0.0;
  bool finite = true;
};

/// w(n) with one pseudocount per state, counting X(1..n) but not X(0).
/// Throws IndexOutOfRange unless n < number of states.
StochasticVector occupation_at(const Trajectory& traj, std::size_t n);

/// -sum over trajectories and q = 2..Q of log(sum_k w_k(q-1) P[X(q), X(q-1), k]).
/// The transition X(0) -> X(1) is not scored. Order-3 hypermatrices only.
NllValue nll(const TransitionHypermatrix& h, std::span<const Trajectory> data);

/// d nll / d R, same shape as the flattening. Throws InfiniteNLL when the
/// objective is infinite at h.
Eigen::MatrixXd nll_gradient(const TransitionHypermatrix& h, std::span<const Trajectory> data);

/// Euclidean projection onto the probability simplex (sort and threshold).
StochasticVector project_simplex(std::span<const double> v);

/// Maximum-likelihood order-3 hypermatrix by projected gradient descent
/// with Armijo backtracking; every column P(., j, k) is projected onto the
/// simplex after each gradient step.
FitResult fit_srw(std::span<const Trajectory> data, std::size_t dim, const FitConfig& config = {});

}  // namespace srw
