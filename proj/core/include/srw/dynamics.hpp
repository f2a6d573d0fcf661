#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "srw/hypermatrix.hpp"
#include "srw/stochastic_vector.hpp"

namespace srw {

inline constexpr double kDefaultSolveTol = 1e-10;
inline constexpr std::size_t kDefaultMaxIters = 100'000;
inline constexpr double kDefaultEulerStep = 0.5;
/// Two fixed points closer than this in the 1-norm are the same point.
inline constexpr double kFixedPointDedupRadius = 1e-6;

enum class SolveMethod { power, euler, perron };

struct SolveReport {
  StochasticVector result;
  std::size_t iterations = 0;
  /// One 1-norm residual per iteration.
  std::vector<double> residual_history;
  bool converged = false;
  SolveMethod method = SolveMethod::power;
};

/// Called with (iteration, iterate) for the start point (iteration 0) and
/// after every update.
using IterateObserver = std::function<void(std::size_t, const StochasticVector&)>;

/// Stationary distribution of a column-stochastic matrix with one recurrent
/// class, by a direct solve of (I - M) x = 0 with the last row replaced by
/// the normalization 1^T x = 1. Periodic chains are fine.
///
/// Throws NotStochastic if a column is off the simplex by more than 1e-10,
/// MultipleRecurrentClasses if the nonzero pattern has more than one closed
/// class, and SolveFailed if ||Mx - x||_1 > tol after refinement.
StochasticVector perron_vector(const Eigen::MatrixXd& m, double tol = kDefaultSolveTol);

/// pi(M(x)) - x, the right-hand side of the occupation dynamics.
Eigen::VectorXd forcing(const TransitionHypermatrix& h, const StochasticVector& x);

/// Forward Euler on dx/dt = forcing(x) with step 0 < h <= 1. Converged when
/// ||forcing||_1 <= tol. h <= 1 keeps every iterate on the simplex.
SolveReport euler_integrate(const TransitionHypermatrix& h, const StochasticVector& x0,
                            double step, std::size_t max_steps = kDefaultMaxIters,
                            double tol = kDefaultSolveTol, const IterateObserver& observer = {});

/// x(n+1) = apply(h, x(n)); residual ||x(n+1) - x(n)||_1. Failing to
/// converge is reported, never thrown.
SolveReport tensor_power_method(const TransitionHypermatrix& h, const StochasticVector& x0,
                                double tol = kDefaultSolveTol,
                                std::size_t max_iters = kDefaultMaxIters,
                                const IterateObserver& observer = {});

/// 2 (alpha (m - 1))^n, the power-method error bound for surfers started at v.
double surfer_residual_bound(double alpha, std::size_t order, std::size_t n);

/// min(1, (1 - alpha) / (1 - (m - 1) alpha)) for a surfer with
/// alpha < 1/(m-1); kDefaultEulerStep for general walks.
double default_euler_step(std::size_t order, std::optional<double> surfer_alpha = std::nullopt);

/// Multi-start search: Euler and the power method from every unit vector and
/// from n_starts uniform simplex points drawn with `seed`. Returns the
/// distinct points with ||apply(x) - x||_1 <= tol in lexicographic order.
std::vector<StochasticVector> find_fixed_points(const TransitionHypermatrix& h,
                                                std::size_t n_starts, double tol,
                                                std::uint64_t seed = 0);

}  // namespace srw
