#include "srw/baselines.hpp"

#include <cmath>
#include <sstream>

#include "srw/dynamics.hpp"
#include "srw/error.hpp"

namespace srw {

namespace {

void check_data(std::span<const Trajectory> data, std::size_t dim) {
  if (data.empty()) throw Error(ErrorCode::InvalidVector, "no trajectories");
  for (const auto& t : data) {
    t.check();
    if (t.dim != dim) throw Error(ErrorCode::DimensionMismatch, "trajectory dimension");
  }
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::zeroth: return "zeroth";
    case ModelKind::first: return "first";
    case ModelKind::second: return "second";
    case ModelKind::srw: return "srw";
    case ModelKind::true_srw: return "true_srw";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (auto k : {ModelKind::zeroth, ModelKind::first, ModelKind::second, ModelKind::srw,
                 ModelKind::true_srw}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorCode::ParseError, "unknown model kind '" + std::string(name) + "'");
}

PredictiveModel PredictiveModel::zeroth(StochasticVector distribution) {
  return {ModelKind::zeroth, std::move(distribution)};
}

PredictiveModel PredictiveModel::first(Eigen::MatrixXd matrix) {
  const auto n = static_cast<std::size_t>(matrix.rows());
  if (matrix.rows() != matrix.cols() || validate(2, n, matrix)) {
    throw Error(ErrorCode::NotStochastic, "first-order model must be square column-stochastic");
  }
  return {ModelKind::first, std::move(matrix)};
}

PredictiveModel PredictiveModel::second(TransitionHypermatrix h) {
  if (h.order() != 3) throw Error(ErrorCode::Unsupported, "second-order model needs order 3");
  return {ModelKind::second, std::move(h)};
}

PredictiveModel PredictiveModel::spacey(TransitionHypermatrix h, ModelKind kind) {
  if (kind != ModelKind::srw && kind != ModelKind::true_srw) {
    throw Error(ErrorCode::Unsupported, "spacey model kind must be srw or true_srw");
  }
  return {kind, std::move(h)};
}

std::size_t PredictiveModel::dim() const {
  struct Visitor {
    std::size_t operator()(const StochasticVector& v) const { return v.size(); }
    std::size_t operator()(const Eigen::MatrixXd& m) const { return static_cast<std::size_t>(m.rows()); }
    std::size_t operator()(const TransitionHypermatrix& h) const { return h.dim(); }
  };
  return std::visit(Visitor{}, params_);
}

StochasticVector fit_zeroth(std::span<const Trajectory> data, std::size_t dim) {
  check_data(data, dim);
  std::vector<double> counts(dim, 1.0);
  for (const auto& t : data) {
    for (std::size_t q = 1; q < t.states.size(); ++q) counts[t.states[q]] += 1.0;
  }
  return StochasticVector::renormalized(std::move(counts));
}

Eigen::MatrixXd fit_first(std::span<const Trajectory> data, std::size_t dim) {
  const auto zeroth = fit_zeroth(data, dim);
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : data) {
    for (std::size_t q = 1; q < t.states.size(); ++q) {
      counts(static_cast<Eigen::Index>(t.states[q]), static_cast<Eigen::Index>(t.states[q - 1])) += 1.0;
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const double total = counts.col(j).sum();
    if (total > 0.0) {
      counts.col(j) /= total;
    } else {
      counts.col(j) = zeroth.to_eigen();
    }
  }
  return counts;
}

TransitionHypermatrix fit_second(std::span<const Trajectory> data, std::size_t dim) {
  const Eigen::MatrixXd first = fit_first(data, dim);
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n * n);
  for (const auto& t : data) {
    const auto& x = t.states;
    for (std::size_t q = 2; q < x.size(); ++q) {
      const auto col = static_cast<Eigen::Index>(x[q - 2]) * n + static_cast<Eigen::Index>(x[q - 1]);
      counts(static_cast<Eigen::Index>(x[q]), col) += 1.0;
    }
  }
  for (Eigen::Index c = 0; c < counts.cols(); ++c) {
    const double total = counts.col(c).sum();
    if (total > 0.0) {
      counts.col(c) /= total;
    } else {
      counts.col(c) = first.col(c % n);
    }
  }
  return TransitionHypermatrix::create(3, dim, std::move(counts));
}

PairStationary pair_stationary(const TransitionHypermatrix& h) {
  if (h.order() != 3) throw Error(ErrorCode::Unsupported, "pair chain needs an order-3 hypermatrix");
  const auto n = static_cast<Eigen::Index>(h.dim());
  // Pair (i, j) -> index i + N j; from (j, k) the chain moves to (i, j).
  Eigen::MatrixXd lifted = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        lifted(i + n * j, j + n * k) = h.flattening()(i, k * n + j);
      }
    }
  }
  const auto x = perron_vector(lifted, 1e-12);
  PairStationary out;
  out.pairs = Eigen::Map<const Eigen::MatrixXd>(x.values().data(), n, n);
  out.marginal = StochasticVector::renormalized(Eigen::VectorXd(out.pairs.rowwise().sum()));
  out.column_marginal = StochasticVector::renormalized(Eigen::VectorXd(out.pairs.colwise().sum().transpose()));
  return out;
}

double pair_stationary_residual(const TransitionHypermatrix& h, const Eigen::MatrixXd& pairs) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) s += h.flattening()(i, k * n + j) * pairs(j, k);
      worst = std::max(worst, std::abs(pairs(i, j) - s));
    }
  }
  return worst;
}

StochasticVector predict(const PredictiveModel& model, const PredictionContext& context) {
  const std::size_t n = model.dim();
  if (context.last >= n) throw Error(ErrorCode::IndexOutOfRange, "context state out of range");
  switch (model.kind()) {
    case ModelKind::zeroth:
      return std::get<StochasticVector>(model.parameters());
    case ModelKind::first: {
      const auto& m = std::get<Eigen::MatrixXd>(model.parameters());
      return StochasticVector::renormalized(Eigen::VectorXd(m.col(static_cast<Eigen::Index>(context.last))));
    }
    case ModelKind::second: {
      const auto& h = std::get<TransitionHypermatrix>(model.parameters());
      if (!context.second_last) throw Error(ErrorCode::IndexOutOfRange, "second-order model needs two states of context");
      const auto col = static_cast<Eigen::Index>(*context.second_last * n + context.last);
      return StochasticVector::renormalized(Eigen::VectorXd(h.flattening().col(col)));
    }
    case ModelKind::srw:
    case ModelKind::true_srw: {
      const auto& h = std::get<TransitionHypermatrix>(model.parameters());
      return StochasticVector::renormalized(transition_column(h, context.occupation, context.last));
    }
  }
  throw Error(ErrorCode::Unsupported, "unknown model kind");
}

double rmse(const PredictiveModel& model, std::span<const Trajectory> data) {
  const std::size_t n = model.dim();
  check_data(data, n);
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (const auto& t : data) {
    const auto& x = t.states;
    std::vector<double> counts(n, 1.0);
    if (x.size() > 1) counts[x[1]] += 1.0;
    for (std::size_t q = 2; q < x.size(); ++q) {
      // counts cover X(1..q-1): w(q-1).
      PredictionContext ctx;
      ctx.last = x[q - 1];
      ctx.second_last = x[q - 2];
      if (model.kind() == ModelKind::srw || model.kind() == ModelKind::true_srw) {
        std::vector<double> w(counts);
        for (double& v : w) v /= static_cast<double>(n + q - 1);
        ctx.occupation = StochasticVector::renormalized(std::move(w));
      }
      const double p = predict(model, ctx)[x[q]];
      sum_sq += (1.0 - p) * (1.0 - p);
      ++count;
      counts[x[q]] += 1.0;
    }
  }
  if (count == 0) throw Error(ErrorCode::InvalidVector, "no scored transitions in test data");
  return std::sqrt(sum_sq / static_cast<double>(count));
}

}  // namespace srw
