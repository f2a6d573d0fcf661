#include "srw/hypermatrix.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "srw/graph.hpp"

namespace srw {

namespace {

// N^e, or nullopt on overflow.
std::optional<std::size_t> checked_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t t = 0; t < exp; ++t) {
    if (base != 0 && r > std::numeric_limits<std::size_t>::max() / base) return std::nullopt;
    r *= base;
  }
  return r;
}

void require_dim(const TransitionHypermatrix& h, const StochasticVector& w) {
  if (w.size() != h.dim()) {
    std::ostringstream os;
    os << "vector of length " << w.size() << " for hypermatrix of dimension " << h.dim();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

}  // namespace

std::optional<ValidationError> validate(std::size_t order, std::size_t dim,
                                        const Eigen::MatrixXd& flattening,
                                        std::size_t max_entries) {
  if (order < 2 || dim < 1) {
    return ValidationError{ErrorCode::ShapeMismatch, 0, 0.0, "order must be >= 2 and dim >= 1"};
  }
  const auto width = checked_pow(dim, order - 1);
  if (!width || *width > max_entries / dim) {
    return ValidationError{ErrorCode::TooLarge, 0, 0.0,
                           "flattening exceeds the configured entry limit"};
  }
  if (static_cast<std::size_t>(flattening.rows()) != dim ||
      static_cast<std::size_t>(flattening.cols()) != *width) {
    std::ostringstream os;
    os << "flattening is " << flattening.rows() << "x" << flattening.cols() << ", expected "
       << dim << "x" << *width;
    return ValidationError{ErrorCode::ShapeMismatch, 0, 0.0, os.str()};
  }
  for (Eigen::Index c = 0; c < flattening.cols(); ++c) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < flattening.rows(); ++i) {
      const double v = flattening(i, c);
      if (!(v >= 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "entry (" << i << ", " << c << ") = " << v;
        return ValidationError{ErrorCode::NegativeEntry, static_cast<std::size_t>(c), v, os.str()};
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kStochasticTol) {
      std::ostringstream os;
      os.precision(17);
      os << "column " << c << " sums to " << sum;
      return ValidationError{ErrorCode::ColumnSumMismatch, static_cast<std::size_t>(c), sum,
                             os.str()};
    }
  }
  return std::nullopt;
}

std::optional<ValidationError> validate(const TransitionHypermatrix& h) {
  return validate(h.order(), h.dim(), h.flattening(), std::numeric_limits<std::size_t>::max());
}

TransitionHypermatrix::TransitionHypermatrix(std::size_t order, std::size_t dim,
                                             Eigen::MatrixXd flattening)
    : order_(order),
      dim_(dim),
      num_panels_(static_cast<std::size_t>(flattening.cols()) / dim),
      flattening_(std::move(flattening)) {}

TransitionHypermatrix TransitionHypermatrix::create(std::size_t order, std::size_t dim,
                                                    Eigen::MatrixXd flattening,
                                                    std::size_t max_entries) {
  if (auto err = validate(order, dim, flattening, max_entries)) {
    throw Error(err->kind, err->message);
  }
  return TransitionHypermatrix(order, dim, std::move(flattening));
}

Eigen::MatrixXd TransitionHypermatrix::panel(std::size_t kappa) const {
  if (kappa >= num_panels_) throw Error(ErrorCode::IndexOutOfRange, "panel index out of range");
  const auto n = static_cast<Eigen::Index>(dim_);
  return flattening_.middleCols(static_cast<Eigen::Index>(kappa) * n, n);
}

double TransitionHypermatrix::entry(std::size_t i, std::size_t j, std::size_t kappa) const {
  return flattening_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(kappa * dim_ + j));
}

std::size_t TransitionHypermatrix::history_index(std::span<const std::size_t> history) const {
  if (history.size() + 2 != order_) {
    throw Error(ErrorCode::DimensionMismatch, "history tuple length must be order - 2");
  }
  std::size_t kappa = 0, stride = 1;
  for (std::size_t k : history) {
    if (k >= dim_) throw Error(ErrorCode::IndexOutOfRange, "history state out of range");
    kappa += k * stride;
    stride *= dim_;
  }
  return kappa;
}

std::vector<std::size_t> TransitionHypermatrix::history_tuple(std::size_t kappa) const {
  std::vector<std::size_t> tuple(order_ - 2);
  for (auto& k : tuple) {
    k = kappa % dim_;
    kappa /= dim_;
  }
  return tuple;
}

Eigen::VectorXd history_weights(const TransitionHypermatrix& h, const StochasticVector& w) {
  require_dim(h, w);
  const std::size_t n = h.dim();
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(1);
  // Slot t multiplies in w[k_t] with stride N^(t-1); earlier slots vary fastest.
  for (std::size_t t = 0; t + 2 < h.order(); ++t) {
    const Eigen::Index old = weights.size();
    Eigen::VectorXd next(old * static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
      next.segment(static_cast<Eigen::Index>(k) * old, old) = weights * w[k];
    }
    weights = std::move(next);
  }
  return weights;
}

Eigen::MatrixXd build_mw(const TransitionHypermatrix& h, const StochasticVector& w) {
  const auto weights = history_weights(h, w);
  const auto n = static_cast<Eigen::Index>(h.dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index kappa = 0; kappa < weights.size(); ++kappa) {
    if (weights[kappa] == 0.0) continue;
    m += weights[kappa] * h.flattening().middleCols(kappa * n, n);
  }
  return m;
}

Eigen::VectorXd transition_column(const TransitionHypermatrix& h, const StochasticVector& w,
                                  std::size_t last) {
  if (last >= h.dim()) throw Error(ErrorCode::IndexOutOfRange, "state out of range");
  const auto weights = history_weights(h, w);
  const auto n = static_cast<Eigen::Index>(h.dim());
  const auto j = static_cast<Eigen::Index>(last);
  Eigen::VectorXd col = Eigen::VectorXd::Zero(n);
  for (Eigen::Index kappa = 0; kappa < weights.size(); ++kappa) {
    if (weights[kappa] == 0.0) continue;
    col += weights[kappa] * h.flattening().col(kappa * n + j);
  }
  return col;
}

StochasticVector apply(const TransitionHypermatrix& h, const StochasticVector& x) {
  const Eigen::VectorXd y = build_mw(h, x) * x.to_eigen();
  return StochasticVector(std::vector<double>(y.data(), y.data() + y.size()));
}

TransitionHypermatrix make_surfer(const TransitionHypermatrix& h, double alpha,
                                  const StochasticVector& v) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, "alpha must lie in [0, 1]");
  }
  require_dim(h, v);
  if (alpha == 1.0) return h;
  Eigen::MatrixXd r = alpha * h.flattening();
  r.colwise() += (1.0 - alpha) * v.to_eigen();
  // Columns of alpha R + (1 - alpha) v 1^T sum to one up to round-off.
  return TransitionHypermatrix::create(h.order(), h.dim(), std::move(r),
                                       std::numeric_limits<std::size_t>::max());
}

Eigen::MatrixXd union_pattern(const TransitionHypermatrix& h) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  Eigen::MatrixXd pattern = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index kappa = 0; kappa < static_cast<Eigen::Index>(h.num_panels()); ++kappa) {
    pattern = pattern.cwiseMax(
        (h.flattening().middleCols(kappa * n, n).array() > 0.0).cast<double>().matrix());
  }
  return pattern;
}

bool check_property_b(const TransitionHypermatrix& h) {
  return graph::recurrent_class_count(union_pattern(h)) == 1;
}

}  // namespace srw
