#include "srw/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "srw/error.hpp"
#include "srw/random.hpp"

namespace srw {

namespace {

// One scored transition j -> i together with the occupation vector that
// weighs the history slot.
struct Scored {
  std::size_t next;
  std::size_t last;
  std::size_t offset;  // into the flat occupation buffer
};

struct ScoredData {
  std::size_t dim = 0;
  std::vector<Scored> transitions;
  std::vector<double> occupations;

  std::span<const double> w(const Scored& s) const {
    return {occupations.data() + s.offset, dim};
  }
};

ScoredData collect(std::span<const Trajectory> data, std::size_t dim) {
  ScoredData out;
  out.dim = dim;
  for (const auto& traj : data) {
    traj.check();
    if (traj.dim != dim) {
      std::ostringstream os;
      os << "trajectory over " << traj.dim << " states, model has " << dim;
      throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    std::vector<std::uint64_t> counts(dim, 1);
    const auto& x = traj.states;
    for (std::size_t q = 1; q < x.size(); ++q) {
      // counts now cover X(1..q-1).
      if (q >= 2) {
        const double total = static_cast<double>(dim + q - 1);
        out.transitions.push_back({x[q], x[q - 1], out.occupations.size()});
        for (std::size_t k = 0; k < dim; ++k) {
          out.occupations.push_back(static_cast<double>(counts[k]) / total);
        }
      }
      ++counts[x[q]];
    }
  }
  return out;
}

void require_order3(const TransitionHypermatrix& h) {
  if (h.order() != 3) throw Error(ErrorCode::Unsupported, "likelihood is defined for order-3 models");
}

double transition_mass(const Eigen::MatrixXd& r, const ScoredData& d, const Scored& s) {
  const auto w = d.w(s);
  const auto n = static_cast<Eigen::Index>(d.dim);
  double mass = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    mass += w[static_cast<std::size_t>(k)] *
            r(static_cast<Eigen::Index>(s.next), k * n + static_cast<Eigen::Index>(s.last));
  }
  return mass;
}

// Neumaier summation: the fit compares NLL values that agree to many digits.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0, comp_ = 0.0;
};

NllValue evaluate(const Eigen::MatrixXd& r, const ScoredData& d) {
  CompensatedSum total;
  for (const auto& s : d.transitions) {
    const double mass = transition_mass(r, d, s);
    if (!(mass > 0.0)) return {std::numeric_limits<double>::infinity(), false};
    total.add(-std::log(mass));
  }
  return {total.value(), true};
}

// nll(r + step) - nll(r) summed as -log1p(change / mass) per transition, so
// the difference keeps its relative accuracy however small it is.
double nll_change(const Eigen::MatrixXd& r, const Eigen::MatrixXd& step, const ScoredData& d) {
  CompensatedSum total;
  for (const auto& s : d.transitions) {
    const double mass = transition_mass(r, d, s);
    const double change = transition_mass(step, d, s);
    if (!(mass + change > 0.0)) return std::numeric_limits<double>::infinity();
    total.add(-std::log1p(change / mass));
  }
  return total.value();
}

Eigen::MatrixXd gradient(const Eigen::MatrixXd& r, const ScoredData& d) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(r.rows(), r.cols());
  const auto n = static_cast<Eigen::Index>(d.dim);
  for (const auto& s : d.transitions) {
    const double mass = transition_mass(r, d, s);
    if (!(mass > 0.0)) throw Error(ErrorCode::InfiniteNLL, "gradient at a zero-probability transition");
    const auto w = d.w(s);
    for (Eigen::Index k = 0; k < n; ++k) {
      g(static_cast<Eigen::Index>(s.next), k * n + static_cast<Eigen::Index>(s.last)) -=
          w[static_cast<std::size_t>(k)] / mass;
    }
  }
  return g;
}

Eigen::MatrixXd project_columns(const Eigen::MatrixXd& r) {
  Eigen::MatrixXd out(r.rows(), r.cols());
  for (Eigen::Index c = 0; c < r.cols(); ++c) {
    const Eigen::VectorXd col = r.col(c);
    const auto p = project_simplex(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())));
    for (Eigen::Index i = 0; i < r.rows(); ++i) out(i, c) = p[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace

void FitConfig::check() const {
  if (max_iters == 0 || !(step0 > 0.0) || !(tol > 0.0)) {
    throw Error(ErrorCode::OutOfRange, "fit config values must be positive");
  }
  if (!(armijo_c > 0.0 && armijo_c < 1.0) || !(armijo_shrink > 0.0 && armijo_shrink < 1.0)) {
    throw Error(ErrorCode::OutOfRange, "armijo_c and armijo_shrink must lie in (0, 1)");
  }
}

StochasticVector occupation_at(const Trajectory& traj, std::size_t n) {
  traj.check();
  if (n >= traj.states.size()) {
    std::ostringstream os;
    os << "step " << n << " outside trajectory of length " << traj.states.size();
    throw Error(ErrorCode::IndexOutOfRange, os.str());
  }
  std::vector<double> w(traj.dim, 1.0);
  for (std::size_t s = 1; s <= n; ++s) w[traj.states[s]] += 1.0;
  const double total = static_cast<double>(traj.dim + n);
  for (double& v : w) v /= total;
  return StochasticVector::renormalized(std::move(w));
}

NllValue nll(const TransitionHypermatrix& h, std::span<const Trajectory> data) {
  require_order3(h);
  return evaluate(h.flattening(), collect(data, h.dim()));
}

Eigen::MatrixXd nll_gradient(const TransitionHypermatrix& h, std::span<const Trajectory> data) {
  require_order3(h);
  return gradient(h.flattening(), collect(data, h.dim()));
}

StochasticVector project_simplex(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::InvalidVector, "cannot project an empty vector");
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  // A point already on the simplex, up to summation round-off, is its own
  // projection; returning it untouched makes the projection idempotent.
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  if (std::all_of(v.begin(), v.end(), [](double e) { return e >= 0.0; }) &&
      std::abs(sum - 1.0) <= std::numeric_limits<double>::epsilon() * static_cast<double>(v.size())) {
    return StochasticVector(std::vector<double>(v.begin(), v.end()));
  }
  std::vector<double> x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) x[i] = std::max(v[i] - theta, 0.0);
  return StochasticVector::renormalized(std::move(x));
}

FitResult fit_srw(std::span<const Trajectory> data, std::size_t dim, const FitConfig& config) {
  config.check();
  if (data.empty()) throw Error(ErrorCode::InvalidVector, "no training trajectories");
  const ScoredData scored = collect(data, dim);
  const auto n = static_cast<Eigen::Index>(dim);

  Eigen::MatrixXd p(n, n * n);
  if (config.uniform_init) {
    p.setConstant(1.0 / static_cast<double>(dim));
  } else {
    Rng rng(config.seed);
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      const auto col = rng.simplex_point(dim);
      for (Eigen::Index i = 0; i < n; ++i) p(i, c) = col[static_cast<std::size_t>(i)];
    }
  }

  NllValue f = evaluate(p, scored);
  if (!f.finite) throw Error(ErrorCode::AllTransitionsUnobservable, "initial point has infinite NLL");
  FitResult result{TransitionHypermatrix::create(3, dim, p), {f.value}, false, 0};

  constexpr double kMinStep = 1e-20;
  // Trial steps after the first are Barzilai-Borwein steps <s, s> / <s, y>
  // from the last move s and gradient change y, capped at step0. Backtracking
  // keeps the descent monotone; the spectral guess mainly saves iterations on
  // badly scaled data.
  double eta = config.step0;
  Eigen::MatrixXd last_p, last_g;
  while (result.iterations < config.max_iters) {
    // Shifting a column of the gradient by a constant changes neither the
    // projected step nor the first-order change along a feasible step. Taking
    // out the multiplier estimate p'g per column leaves entries of order one,
    // so column-sum round-off in P no longer drowns small decreases.
    const Eigen::MatrixXd raw = gradient(p, scored);
    const Eigen::RowVectorXd multiplier = p.cwiseProduct(raw).colwise().sum();
    const Eigen::MatrixXd g = raw.rowwise() - multiplier;
    if ((p - project_columns(p - g)).lpNorm<1>() <= config.tol) {
      result.converged = true;
      break;
    }
    if (last_p.size() != 0) {
      const Eigen::MatrixXd moved = p - last_p;
      const double curvature = moved.cwiseProduct(g - last_g).sum();
      eta = curvature > 0.0 ? std::clamp(moved.squaredNorm() / curvature, kMinStep, config.step0) : config.step0;
    }
    last_p = p;
    last_g = g;
    bool accepted = false;
    Eigen::MatrixXd candidate;
    while (eta >= kMinStep) {
      candidate = project_columns(p - eta * g);
      const Eigen::MatrixXd step = candidate - p;
      // Armijo on the projected step, on the Lagrangian so the column-sum
      // drift of the step is not charged to the objective.
      const double decrease = config.armijo_c * g.cwiseProduct(step).sum();
      const double change = nll_change(p, step, scored) - multiplier.dot(step.colwise().sum());
      if (decrease < 0.0 && change <= decrease) {
        accepted = true;
        break;
      }
      eta *= config.armijo_shrink;
    }
    if (!accepted) break;
    ++result.iterations;
    p = std::move(candidate);
    // The accepted step lowers the NLL; a recomputed total can still round
    // a hair above the previous one when the change is below one ulp.
    f.value = std::min(f.value, evaluate(p, scored).value);
    result.nll_trace.push_back(f.value);
  }
  result.hypermatrix = TransitionHypermatrix::create(3, dim, std::move(p));
  return result;
}

}  // namespace srw
