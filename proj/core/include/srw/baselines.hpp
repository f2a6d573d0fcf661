#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include <Eigen/Core>

#include "srw/hypermatrix.hpp"
#include "srw/simulate.hpp"
#include "srw/stochastic_vector.hpp"

namespace srw {

enum class ModelKind { zeroth, first, second, srw, true_srw };

std::string_view to_string(ModelKind kind) noexcept;
/// Throws ParseError for unknown names.
ModelKind parse_model_kind(std::string_view name);

/// What a model may condition on when predicting X(q).
struct PredictionContext {
  std::size_t last = 0;                     // X(q-1)
  std::optional<std::size_t> second_last;   // X(q-2)
  StochasticVector occupation = StochasticVector::uniform(1);  // w(q-1)
};

/// A next-state predictor: a zeroth-order distribution, a first-order
/// transition matrix, or an order-3 hypermatrix read either as a
/// second-order chain or as a spacey random walk.
class PredictiveModel {
public:
  static PredictiveModel zeroth(StochasticVector distribution);
  /// Throws NotStochastic unless `matrix` is square and column-stochastic.
  static PredictiveModel first(Eigen::MatrixXd matrix);
  static PredictiveModel second(TransitionHypermatrix h);
  /// kind must be srw or true_srw.
  static PredictiveModel spacey(TransitionHypermatrix h, ModelKind kind = ModelKind::srw);

  ModelKind kind() const noexcept { return kind_; }
  std::size_t dim() const;

  using Parameters = std::variant<StochasticVector, Eigen::MatrixXd, TransitionHypermatrix>;
  const Parameters& parameters() const noexcept { return params_; }

private:
  PredictiveModel(ModelKind kind, Parameters params) : kind_(kind), params_(std::move(params)) {}

  ModelKind kind_;
  Parameters params_;
};

/// State frequencies over X(1..Q) of every trajectory, one pseudocount each.
StochasticVector fit_zeroth(std::span<const Trajectory> data, std::size_t dim);

/// Empirical transition frequencies; columns of unseen source states are
/// the zeroth-order vector.
Eigen::MatrixXd fit_first(std::span<const Trajectory> data, std::size_t dim);

/// Empirical (j, k) -> i frequencies as an order-3 hypermatrix; unseen
/// contexts fall back to fit_first's column j.
TransitionHypermatrix fit_second(std::span<const Trajectory> data, std::size_t dim);

struct PairStationary {
  /// pairs(i, j): stationary probability that the last state is i and the
  /// one before it j.
  Eigen::MatrixXd pairs;
  /// Row sums of `pairs` (distribution of the most recent state).
  StochasticVector marginal = StochasticVector::uniform(1);
  /// Column sums of `pairs`.
  StochasticVector column_marginal = StochasticVector::uniform(1);
};

/// Stationary distribution of the N^2-state chain on (last, second-last)
/// pairs. Throws MultipleRecurrentClasses if that chain has several.
PairStationary pair_stationary(const TransitionHypermatrix& h);

/// Residual max_ij |X_ij - sum_k P_ijk X_jk|.
double pair_stationary_residual(const TransitionHypermatrix& h, const Eigen::MatrixXd& pairs);

/// Next-state distribution under `model`.
StochasticVector predict(const PredictiveModel& model, const PredictionContext& context);

/// sqrt(mean (1 - p)^2) pooled over every scored transition X(q-1) -> X(q),
/// q = 2..Q, of every trajectory, p being the probability given to X(q).
double rmse(const PredictiveModel& model, std::span<const Trajectory> data);

}  // namespace srw
