#include "srw/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "srw/error.hpp"
#include "srw/graph.hpp"
#include "srw/random.hpp"

namespace srw {

namespace {

constexpr double kStochasticInputTol = 1e-10;

void check_column_stochastic(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "matrix must be square and nonempty");
  }
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if ((m.col(j).array() < -kStochasticInputTol).any() || !m.col(j).allFinite()) {
      throw Error(ErrorCode::NotStochastic, "negative or non-finite entry");
    }
    if (std::abs(m.col(j).sum() - 1.0) > kStochasticInputTol) {
      std::ostringstream os;
      os << "column " << j << " sums to " << m.col(j).sum();
      throw Error(ErrorCode::NotStochastic, os.str());
    }
  }
}

}  // namespace

StochasticVector perron_vector(const Eigen::MatrixXd& m, double tol) {
  check_column_stochastic(m);
  const Eigen::Index n = m.rows();
  const std::size_t classes = graph::recurrent_class_count(m);
  if (classes != 1) {
    std::ostringstream os;
    os << classes << " recurrent classes";
    throw Error(ErrorCode::MultipleRecurrentClasses, os.str());
  }

  // Rows of I - M sum to zero, so dropping one loses nothing; 1^T is not in
  // the row space because 1^T x = 1 for the null vector x.
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - m;
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b[n - 1] = 1.0;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd x = lu.solve(b);
  for (int refine = 0; refine < 2; ++refine) {
    x += lu.solve(b - a * x);
  }

  auto result = StochasticVector::renormalized(x);
  const Eigen::VectorXd xr = result.to_eigen();
  const double residual = (m * xr - xr).lpNorm<1>();
  if (!(residual <= tol)) {
    std::ostringstream os;
    os << "stationary residual " << residual << " exceeds " << tol;
    throw Error(ErrorCode::SolveFailed, os.str());
  }
  return result;
}

Eigen::VectorXd forcing(const TransitionHypermatrix& h, const StochasticVector& x) {
  const auto pi = perron_vector(build_mw(h, x));
  return pi.to_eigen() - x.to_eigen();
}

SolveReport euler_integrate(const TransitionHypermatrix& h, const StochasticVector& x0,
                            double step, std::size_t max_steps, double tol,
                            const IterateObserver& observer) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw Error(ErrorCode::StepOutOfRange, "Euler step must satisfy 0 < h <= 1");
  }
  if (x0.size() != h.dim()) throw Error(ErrorCode::DimensionMismatch, "start vector length");

  SolveReport report{x0, 0, {}, false, SolveMethod::euler};
  if (observer) observer(0, x0);
  Eigen::VectorXd f = forcing(h, x0);
  if (f.lpNorm<1>() <= tol) {
    report.converged = true;
    return report;
  }
  Eigen::VectorXd x = x0.to_eigen();
  while (report.iterations < max_steps) {
    // (1 - h) x + h pi(M(x)) is a convex combination for h <= 1.
    x += step * f;
    report.result = StochasticVector::renormalized(x);
    x = report.result.to_eigen();
    ++report.iterations;
    if (observer) observer(report.iterations, report.result);
    f = forcing(h, report.result);
    const double residual = f.lpNorm<1>();
    report.residual_history.push_back(residual);
    if (residual <= tol) {
      report.converged = true;
      break;
    }
  }
  return report;
}

SolveReport tensor_power_method(const TransitionHypermatrix& h, const StochasticVector& x0,
                                double tol, std::size_t max_iters,
                                const IterateObserver& observer) {
  if (x0.size() != h.dim()) throw Error(ErrorCode::DimensionMismatch, "start vector length");
  SolveReport report{x0, 0, {}, false, SolveMethod::power};
  if (observer) observer(0, x0);
  while (report.iterations < max_iters) {
    // Renormalizing keeps round-off in the sum from compounding over many
    // iterations.
    auto next = StochasticVector::renormalized(apply(h, report.result).to_eigen());
    const double residual = l1_distance(next.values(), report.result.values());
    report.result = std::move(next);
    ++report.iterations;
    report.residual_history.push_back(residual);
    if (observer) observer(report.iterations, report.result);
    if (residual <= tol) {
      report.converged = true;
      break;
    }
  }
  return report;
}

double surfer_residual_bound(double alpha, std::size_t order, std::size_t n) {
  if (order < 2) throw Error(ErrorCode::ShapeMismatch, "order must be >= 2");
  const double rate = alpha * static_cast<double>(order - 1);
  if (!(alpha >= 0.0) || !(rate < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, "bound requires 0 <= alpha < 1/(m-1)");
  }
  return 2.0 * std::pow(rate, static_cast<double>(n));
}

double default_euler_step(std::size_t order, std::optional<double> surfer_alpha) {
  if (!surfer_alpha) return kDefaultEulerStep;
  const double alpha = *surfer_alpha;
  const double denom = 1.0 - static_cast<double>(order - 1) * alpha;
  if (!(denom > 0.0)) return kDefaultEulerStep;
  return std::min(1.0, (1.0 - alpha) / denom);
}

std::vector<StochasticVector> find_fixed_points(const TransitionHypermatrix& h,
                                                std::size_t n_starts, double tol,
                                                std::uint64_t seed) {
  const std::size_t n = h.dim();
  std::vector<StochasticVector> starts;
  for (std::size_t k = 0; k < n; ++k) starts.push_back(StochasticVector::unit(n, k));
  Rng rng(seed);
  for (std::size_t s = 0; s < n_starts; ++s) {
    starts.push_back(StochasticVector::renormalized(rng.simplex_point(n)));
  }

  std::vector<StochasticVector> found;
  auto consider = [&](const SolveReport& report) {
    if (!report.converged) return;
    const auto& x = report.result;
    if (l1_distance(apply(h, x).values(), x.values()) > tol) return;
    for (const auto& y : found) {
      if (l1_distance(x.values(), y.values()) <= kFixedPointDedupRadius) return;
    }
    found.push_back(x);
  };

  // ||apply(x) - x||_1 <= 2 ||forcing(x)||_1, hence the tighter Euler target.
  const double inner_tol = tol / 4.0;
  for (const auto& x0 : starts) {
    try {
      consider(euler_integrate(h, x0, kDefaultEulerStep, kDefaultMaxIters, inner_tol));
    } catch (const Error&) {
      // M(x) reducible somewhere along the path; the power method may still work.
    }
    consider(tensor_power_method(h, x0, inner_tol, kDefaultMaxIters));
  }

  std::sort(found.begin(), found.end(), [](const StochasticVector& a, const StochasticVector& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return found;
}

}  // namespace srw
