#include "srw/two_state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "srw/error.hpp"

namespace srw::two_state {

namespace {

constexpr double kCoefficientEps = 1e-14;

void require_two_state(const TransitionHypermatrix& h) {
  if (h.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "two-state analysis needs N = 2");
}

void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << what << " = " << x << " is outside [0, 1]";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Coefficients in t of entry (row, col) of M(z(x)), where t = x, or t = 1 - x
// when around_one. A history tuple with `ones` slots in state 0 has weight
// x^ones (1 - x)^(m-2-ones).
std::vector<double> entry_polynomial(const TransitionHypermatrix& h, std::size_t row,
                                     std::size_t col, bool around_one) {
  const std::size_t slots = h.order() - 2;
  std::vector<double> coef(slots + 1, 0.0);
  for (std::size_t kappa = 0; kappa < h.num_panels(); ++kappa) {
    const double r = h.entry(row, col, kappa);
    if (r == 0.0) continue;
    const auto tuple = h.history_tuple(kappa);
    const auto ones = static_cast<std::size_t>(std::count(tuple.begin(), tuple.end(), 0u));
    // x^a (1-x)^b with t = x, or (1-t)^a t^b with t = 1 - x.
    const std::size_t plain = around_one ? slots - ones : ones;
    const std::size_t binom = slots - plain;
    for (std::size_t i = 0; i <= binom; ++i) {
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      coef[plain + i] += r * sign * binomial(binom, i);
    }
  }
  return coef;
}

// One-sided limit of pi_1(M(z(x))) at a boundary where M is the identity:
// the ratio of the lowest-order nonvanishing off-diagonal coefficients.
double boundary_limit_pi(const TransitionHypermatrix& h, bool at_one) {
  const auto up = entry_polynomial(h, 0, 1, at_one);    // M_12
  const auto down = entry_polynomial(h, 1, 0, at_one);  // M_21
  for (std::size_t k = 0; k < up.size(); ++k) {
    const double u = std::abs(up[k]) > kCoefficientEps ? up[k] : 0.0;
    const double d = std::abs(down[k]) > kCoefficientEps ? down[k] : 0.0;
    if (u != 0.0 || d != 0.0) return u / (u + d);
  }
  throw Error(ErrorCode::PropertyBViolation, "M(z(x)) is the identity near the boundary");
}

double horner(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
  return d;
}

// Real roots in [0, 1] of a power-basis polynomial via companion eigenvalues.
std::vector<double> unit_interval_roots(std::vector<double> c) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {};
  while (!c.empty() && std::abs(c.back()) <= kCoefficientEps * scale) c.pop_back();
  std::vector<double> candidates;
  const std::size_t degree = c.empty() ? 0 : c.size() - 1;
  if (degree == 0) return {};
  if (degree == 1) {
    candidates.push_back(-c[0] / c[1]);
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(degree),
                                                      static_cast<Eigen::Index>(degree));
    for (std::size_t i = 1; i < degree; ++i) {
      companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    }
    for (std::size_t i = 0; i < degree; ++i) {
      companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(degree - 1)) =
          -c[i] / c[degree];
    }
    const Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    for (const auto& z : es.eigenvalues()) {
      if (std::abs(z.imag()) <= 1e-7) candidates.push_back(z.real());
    }
  }
  const auto dc = derivative(c);
  std::vector<double> roots;
  for (double r : candidates) {
    if (r < -1e-7 || r > 1.0 + 1e-7) continue;
    // Newton polish; stop if the derivative vanishes (multiple root).
    for (int it = 0; it < 8; ++it) {
      const double slope = horner(dc, r);
      if (slope == 0.0) break;
      const double next = r - horner(c, r) / slope;
      if (!std::isfinite(next) || std::abs(next - r) > 1e-6) break;
      r = next;
    }
    roots.push_back(std::clamp(r, 0.0, 1.0));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-9; }),
              roots.end());
  return roots;
}

EquilibriumSet finish(const TransitionHypermatrix& h, const std::vector<double>& roots,
                      double tol) {
  EquilibriumSet out;
  for (double r : roots) {
    double fr;
    try {
      fr = f_two_state(h, r);
    } catch (const Error&) {
      continue;
    }
    if (std::abs(fr) > tol) continue;
    out.points.push_back({r, classify_stability(h, r, tol)});
  }
  return out;
}

}  // namespace

const char* to_string(Stability s) noexcept {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
  }
  return "marginal";
}

TransitionHypermatrix TwoByTwoByTwo::to_hypermatrix() const {
  for (double v : {a, b, c, d}) require_unit_interval(v, "2x2x2 parameter");
  Eigen::MatrixXd r(2, 4);
  r << a, b, c, d, 1.0 - a, 1.0 - b, 1.0 - c, 1.0 - d;
  return TransitionHypermatrix::create(3, 2, std::move(r));
}

IntegralCoefficients IntegralCoefficients::from(const TwoByTwoByTwo& t) {
  return {t.a - t.c + t.d - t.b, t.b + t.c - 2.0 * t.d - 1.0, t.d, t.c - t.a + t.b - t.d,
          1.0 - t.c + t.d};
}

StochasticVector z_map(double x) {
  require_unit_interval(x, "x");
  return StochasticVector({x, 1.0 - x});
}

double pi_2x2(double p, double q) {
  require_unit_interval(p, "p");
  require_unit_interval(q, "q");
  if (p == 1.0 && q == 1.0) throw Error(ErrorCode::IdentityMatrix, "pi of the 2x2 identity");
  return (1.0 - q) / (2.0 - p - q);
}

double f_two_state(const TransitionHypermatrix& h, double x) {
  require_two_state(h);
  require_unit_interval(x, "x");
  const Eigen::MatrixXd m = build_mw(h, z_map(x));
  // Off-diagonals directly: (1 - q) and (1 - p) without cancellation.
  const double up = m(0, 1), down = m(1, 0);
  if (up + down > 0.0) return up / (up + down) - x;
  if (x == 0.0) return boundary_limit_pi(h, false);
  if (x == 1.0) return boundary_limit_pi(h, true) - 1.0;
  std::ostringstream os;
  os << "M(z(" << x << ")) is the identity";
  throw Error(ErrorCode::PropertyBViolation, os.str());
}

bool forcing_vanishes(const TransitionHypermatrix& h) {
  for (std::size_t i = 0; i < kZeroGridPoints; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(kZeroGridPoints - 1);
    if (std::abs(f_two_state(h, x)) > kZeroThreshold) return false;
  }
  return true;
}

EquilibriumSet equilibria_222(const TwoByTwoByTwo& t, double tol) {
  const auto h = t.to_hypermatrix();
  const auto k = IntegralCoefficients::from(t);
  std::vector<double> roots;
  if (std::abs(k.alpha_c) > kCoefficientEps) {
    const double disc = k.beta_c * k.beta_c - 4.0 * k.alpha_c * k.gamma_c;
    if (disc >= -kCoefficientEps) {
      const double s = std::sqrt(std::max(disc, 0.0));
      // Stable pairing: q = -(beta + sign(beta) sqrt(disc)) / 2, roots q/alpha, gamma/q.
      const double q = -0.5 * (k.beta_c + std::copysign(s, k.beta_c));
      roots.push_back(q / k.alpha_c);
      if (q != 0.0) roots.push_back(k.gamma_c / q);
    }
  } else if (std::abs(k.beta_c) > kCoefficientEps) {
    roots.push_back(t.d / (1.0 + 2.0 * t.d - t.b - t.c));
  } else {
    // a + d = b + c and b + c = 1 + 2d force d = 0: the numerator vanishes.
    return {true, {}};
  }
  std::vector<double> in_range;
  for (double r : roots) {
    if (r >= -1e-12 && r <= 1.0 + 1e-12) in_range.push_back(std::clamp(r, 0.0, 1.0));
  }
  std::sort(in_range.begin(), in_range.end());
  in_range.erase(std::unique(in_range.begin(), in_range.end(),
                             [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
                 in_range.end());
  return finish(h, in_range, tol);
}

EquilibriumSet equilibria(const TransitionHypermatrix& h, double tol) {
  require_two_state(h);
  if (forcing_vanishes(h)) return {true, {}};
  // g(x) = M_12(x) (1 - x) - x M_21(x) shares its roots with f away from
  // points where M(z(x)) is the identity; finish() re-checks against f.
  const auto up = entry_polynomial(h, 0, 1, false);
  const auto down = entry_polynomial(h, 1, 0, false);
  std::vector<double> g(up.size() + 1, 0.0);
  for (std::size_t k = 0; k < up.size(); ++k) {
    g[k] += up[k];
    g[k + 1] -= up[k] + down[k];
  }
  return finish(h, unit_interval_roots(std::move(g)), tol);
}

Stability classify_stability(const TransitionHypermatrix& h, double x_star, double tol) {
  const double f0 = f_two_state(h, x_star);
  if (!(std::abs(f0) <= tol)) {
    std::ostringstream os;
    os << "f(" << x_star << ") = " << f0;
    throw Error(ErrorCode::NotAnEquilibrium, os.str());
  }
  if (forcing_vanishes(h)) return Stability::marginal;

  const bool has_left = x_star - kStabilityProbe >= 0.0;
  const bool has_right = x_star + kStabilityProbe <= 1.0;
  const double left = has_left ? f_two_state(h, x_star - kStabilityProbe) : 0.0;
  const double right = has_right ? f_two_state(h, x_star + kStabilityProbe) : 0.0;

  // Flow points toward x* from each probed side.
  const bool attract_left = !has_left || left > 0.0;
  const bool attract_right = !has_right || right < 0.0;
  const bool repel_left = !has_left || left < 0.0;
  const bool repel_right = !has_right || right > 0.0;
  if (attract_left && attract_right) return Stability::stable;
  if (repel_left && repel_right) return Stability::unstable;
  return Stability::marginal;
}

namespace {

void require_open_interval(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) {
    std::ostringstream os;
    os << what << " = " << x << " is outside (0, 1)";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
}

void require_no_crossing(double root, double x0, double x) {
  if (root >= std::min(x0, x) && root <= std::max(x0, x)) {
    std::ostringstream os;
    os << "equilibrium " << root << " lies between " << x0 << " and " << x;
    throw Error(ErrorCode::EquilibriumCrossed, os.str());
  }
}

}  // namespace

double implicit_time_222(const TwoByTwoByTwo& t, double x0, double x) {
  require_open_interval(x0, "x0");
  require_open_interval(x, "x");
  const auto k = IntegralCoefficients::from(t);
  const double al = k.alpha_c, be = k.beta_c, ga = k.gamma_c, de = k.delta_c, ep = k.epsilon_c;
  if (std::abs(al) <= kCoefficientEps) {
    throw Error(ErrorCode::NotApplicable, "alpha_c = 0; use implicit_time_222_linear");
  }
  const double disc = 4.0 * al * ga - be * be;
  if (disc < 0.0) {
    const double s = std::sqrt(-disc);
    require_no_crossing((-be - s) / (2.0 * al), x0, x);
    require_no_crossing((-be + s) / (2.0 * al), x0, x);
  } else if (disc == 0.0) {
    require_no_crossing(-be / (2.0 * al), x0, x);
  }

  const double lead = 2.0 * al * ep - be * de;
  auto antiderivative = [&](double y) {
    const double q = al * y * y + be * y + ga;
    const double log_part = de / (2.0 * al) * std::log(std::abs(q));
    const double u = 2.0 * al * y + be;
    if (disc > 0.0) {
      const double s = std::sqrt(disc);
      return log_part + lead / (al * s) * std::atan(u / s);
    }
    if (disc < 0.0) {
      const double s = std::sqrt(-disc);
      // 0.5 log|(1 + v)/(1 - v)| equals atanh(v) for |v| < 1 and stays an
      // antiderivative outside the roots.
      const double v = u / s;
      return log_part - lead / (al * s) * 0.5 * std::log(std::abs((1.0 + v) / (1.0 - v)));
    }
    return log_part - lead / (al * u);
  };
  return antiderivative(x) - antiderivative(x0);
}

double implicit_time_222_linear(const TwoByTwoByTwo& t, double x0, double x) {
  require_open_interval(x0, "x0");
  require_open_interval(x, "x");
  const auto k = IntegralCoefficients::from(t);
  const double be = k.beta_c, ga = k.gamma_c, de = k.delta_c, ep = k.epsilon_c;
  if (std::abs(k.alpha_c) > kCoefficientEps) {
    throw Error(ErrorCode::NotApplicable, "alpha_c != 0; use implicit_time_222");
  }
  if (std::abs(be) > kCoefficientEps) {
    require_no_crossing(-ga / be, x0, x);
    auto antiderivative = [&](double y) {
      return de / be * y + (ep * be - de * ga) / (be * be) * std::log(std::abs(be * y + ga));
    };
    return antiderivative(x) - antiderivative(x0);
  }
  if (ga == 0.0) throw Error(ErrorCode::NotApplicable, "f vanishes identically");
  return (de * (x * x - x0 * x0) / 2.0 + ep * (x - x0)) / ga;
}

std::vector<std::pair<double, double>> sample_forcing(const TransitionHypermatrix& h,
                                                      std::size_t points) {
  if (points < 2) throw Error(ErrorCode::OutOfRange, "need at least two sample points");
  std::vector<std::pair<double, double>> out;
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(points - 1);
    out.emplace_back(x, f_two_state(h, x));
  }
  return out;
}

}  // namespace srw::two_state
