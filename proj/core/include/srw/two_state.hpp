#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "srw/hypermatrix.hpp"
#include "srw/stochastic_vector.hpp"

namespace srw::two_state {

/// Probe radius for the sign test in classify_stability.
inline constexpr double kStabilityProbe = 1e-4;
/// Grid size and threshold used to detect f(x) == 0 on all of [0, 1].
inline constexpr std::size_t kZeroGridPoints = 101;
inline constexpr double kZeroThreshold = 1e-12;

/// Order-3, two-state walk with flattening [[a, b | c, d], [1-a, 1-b | 1-c, 1-d]].
struct TwoByTwoByTwo {
  double a = 0, b = 0, c = 0, d = 0;

  /// Throws OutOfRange unless every parameter lies in [0, 1].
  TransitionHypermatrix to_hypermatrix() const;
};

/// Coefficients of dt/dx = (delta x + epsilon) / (alpha x^2 + beta x + gamma)
/// for the 2x2x2 walk; the quadratic is the numerator of f(x) and the linear
/// term its denominator 1 - c + d + x (c - a + b - d).
struct IntegralCoefficients {
  double alpha_c = 0, beta_c = 0, gamma_c = 0, delta_c = 0, epsilon_c = 0;

  static IntegralCoefficients from(const TwoByTwoByTwo& t);
};

enum class Stability { stable, unstable, marginal };

const char* to_string(Stability s) noexcept;

struct Equilibrium {
  double x = 0;
  Stability stability = Stability::marginal;
};

/// Roots of f on [0, 1], or every point when f vanishes identically.
struct EquilibriumSet {
  bool all_points = false;
  std::vector<Equilibrium> points;  // ascending in x; empty when all_points
};

/// x -> (x, 1 - x). Throws OutOfRange outside [0, 1].
StochasticVector z_map(double x);

/// First coordinate of the stationary vector of [[p, 1-q], [1-p, q]]:
/// (1 - q) / (2 - p - q). Throws IdentityMatrix when p = q = 1.
double pi_2x2(double p, double q);

/// f(x) = [pi(M(z(x)))]_1 - x for an order-m, N = 2 hypermatrix. At x = 0
/// or 1 with an identity panel f is the one-sided limit. Throws
/// PropertyBViolation where M(z(x)) is the identity and no limit exists, or
/// for interior x with M(z(x)) = I.
double f_two_state(const TransitionHypermatrix& h, double x);

/// True iff |f| <= kZeroThreshold on a kZeroGridPoints grid over [0, 1].
bool forcing_vanishes(const TransitionHypermatrix& h);

/// Closed-form equilibria of the 2x2x2 dynamics (quadratic formula, the
/// linear case when a + d = b + c, or every point in the degenerate family).
EquilibriumSet equilibria_222(const TwoByTwoByTwo& t, double tol = 1e-10);

/// Equilibria for any order: real roots in [0, 1] of the degree m-1
/// polynomial M_12(x) (1 - x) - x M_21(x), polished and checked against f.
EquilibriumSet equilibria(const TransitionHypermatrix& h, double tol = 1e-10);

/// Sign probe of f at x* -/+ kStabilityProbe (one-sided at the boundary).
/// Throws NotAnEquilibrium if |f(x*)| > tol.
Stability classify_stability(const TransitionHypermatrix& h, double x_star, double tol = 1e-10);

/// Time for the 2x2x2 dynamics to travel from x0 to x, from the closed-form
/// antiderivative. Throws NotApplicable when alpha_c = 0 (use
/// implicit_time_222_linear), EquilibriumCrossed if a root of the numerator
/// lies between x0 and x, OutOfRange unless both lie in (0, 1).
double implicit_time_222(const TwoByTwoByTwo& t, double x0, double x);

/// The alpha_c = 0 case: antiderivative of (delta x + epsilon) / (beta x + gamma).
double implicit_time_222_linear(const TwoByTwoByTwo& t, double x0, double x);

/// (x, f(x)) on `points` evenly spaced abscissae covering [0, 1].
std::vector<std::pair<double, double>> sample_forcing(const TransitionHypermatrix& h,
                                                      std::size_t points);

}  // namespace srw::two_state
