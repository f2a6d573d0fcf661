#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "srw/error.hpp"
#include "srw/stochastic_vector.hpp"

namespace srw {

/// Refuse flattenings with more entries than this unless overridden.
inline constexpr std::size_t kDefaultMaxEntries = 10'000'000;

/// First problem found while validating a raw flattening.
struct ValidationError {
  ErrorCode kind;
  std::size_t column = 0;
  double value = 0.0;  // offending entry, or the column sum
  std::string message;
};

/// Order-m, dimension-N column-stochastic transition hypermatrix, stored as
/// its N x N^(m-1) flattening R along the first index.
///
/// Column c of R encodes (history tuple kappa, last state j) with the last
/// state varying fastest: c = kappa * N + j. The history tuple
/// (k_1, ..., k_{m-2}) is encoded as kappa = sum_t k_t * N^(t-1), all indices
/// 0-based. For m = 3 panel k holds P(i | last j, second-last k) at (i, j).
class TransitionHypermatrix {
public:
  /// Validates and takes ownership of the flattening. Throws Error with the
  /// ValidationError kind on failure.
  static TransitionHypermatrix create(std::size_t order, std::size_t dim,
                                      Eigen::MatrixXd flattening,
                                      std::size_t max_entries = kDefaultMaxEntries);

  std::size_t order() const noexcept { return order_; }
  std::size_t dim() const noexcept { return dim_; }
  /// N^(m-2); 1 for an ordinary Markov chain (m = 2).
  std::size_t num_panels() const noexcept { return num_panels_; }

  const Eigen::MatrixXd& flattening() const noexcept { return flattening_; }
  /// Panel R_kappa, the N x N transition matrix for a fixed history tuple.
  Eigen::MatrixXd panel(std::size_t kappa) const;
  /// P(next = i | last = j, history = kappa).
  double entry(std::size_t i, std::size_t j, std::size_t kappa) const;

  /// kappa for a 0-based history tuple of length m-2.
  std::size_t history_index(std::span<const std::size_t> history) const;
  std::vector<std::size_t> history_tuple(std::size_t kappa) const;

  friend bool operator==(const TransitionHypermatrix& a, const TransitionHypermatrix& b) {
    return a.order_ == b.order_ && a.dim_ == b.dim_ && a.flattening_ == b.flattening_;
  }

private:
  TransitionHypermatrix(std::size_t order, std::size_t dim, Eigen::MatrixXd flattening);

  std::size_t order_;
  std::size_t dim_;
  std::size_t num_panels_;
  Eigen::MatrixXd flattening_;
};

/// Checks a raw flattening against every hypermatrix invariant; nullopt
/// means valid.
std::optional<ValidationError> validate(std::size_t order, std::size_t dim,
                                        const Eigen::MatrixXd& flattening,
                                        std::size_t max_entries = kDefaultMaxEntries);
std::optional<ValidationError> validate(const TransitionHypermatrix& h);

/// Product measure w^(m-2) over history tuples, indexed by kappa.
Eigen::VectorXd history_weights(const TransitionHypermatrix& h, const StochasticVector& w);

/// M(w) = R (w^(m-2) kron I): the panels averaged under the product measure.
Eigen::MatrixXd build_mw(const TransitionHypermatrix& h, const StochasticVector& w);

/// Column `last` of build_mw(h, w), computed in the same summation order.
Eigen::VectorXd transition_column(const TransitionHypermatrix& h, const StochasticVector& w,
                                  std::size_t last);

/// R x^(m-1) = M(x) x.
StochasticVector apply(const TransitionHypermatrix& h, const StochasticVector& x);

/// Surfer hypermatrix with entries alpha * P + (1 - alpha) * v_i.
TransitionHypermatrix make_surfer(const TransitionHypermatrix& h, double alpha,
                                  const StochasticVector& v);

/// True iff M(w) has a single recurrent class for every strictly positive w,
/// tested on the union of the panels' nonzero patterns.
bool check_property_b(const TransitionHypermatrix& h);

/// Nonzero pattern of M(w) for any w > 0 (1.0 where some panel is positive).
Eigen::MatrixXd union_pattern(const TransitionHypermatrix& h);

}  // namespace srw
