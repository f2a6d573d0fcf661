#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "srw/error.hpp"
#include "srw/learn.hpp"
#include "srw/random.hpp"
#include "srw/simulate.hpp"

using namespace srw;
using fixtures::rows;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected srw::Error");
  return ErrorCode::IoError;
}

Trajectory traj(std::size_t dim, std::vector<std::size_t> one_based) {
  for (auto& s : one_based) --s;
  return {dim, std::move(one_based)};
}

std::vector<Trajectory> sample(const TransitionHypermatrix& h, std::size_t count, std::size_t len,
                               std::uint64_t seed) {
  std::vector<Trajectory> out;
  Rng starts(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const auto start = static_cast<std::size_t>(starts.uniform() * static_cast<double>(h.dim()));
    out.push_back(simulate(h, start, len, seed * 1000 + i, false).trajectory);
  }
  return out;
}

void check_nonincreasing(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1]);
}

}  // namespace

TEST_CASE("occupation_at examples") {
  CHECK(occupation_at(traj(2, {1, 2, 2}), 0) == StochasticVector::uniform(2));
  const auto w = occupation_at(traj(2, {2, 1}), 1);
  CHECK(w[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(w[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  const std::size_t q = 50;
  const auto same = occupation_at(Trajectory{2, std::vector<std::size_t>(q + 1, 1)}, q);
  CHECK(same[1] == doctest::Approx((1.0 + q) / (2.0 + q)).epsilon(1e-15));
  CHECK(code_of([] { occupation_at(traj(2, {1, 2}), 2); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("nll examples") {
  const auto uniform = TransitionHypermatrix::create(3, 3, Eigen::MatrixXd::Constant(3, 9, 1.0 / 3));
  const std::vector<Trajectory> one{traj(3, {1, 2, 1})};
  const auto v = nll(uniform, one);
  CHECK(v.finite);
  CHECK(v.value == doctest::Approx(-std::log(1.0 / 3)).epsilon(1e-15));

  // Scored transition 1 -> 2 with w(1) = (2/3, 1/3).
  const auto h2 = TransitionHypermatrix::create(3, 2, rows(2, 4, {0.4, 0.5, 0.7, 0.5, 0.6, 0.5, 0.3, 0.5}));
  const std::vector<Trajectory> fixture{traj(2, {2, 1, 2})};
  CHECK(nll(h2, fixture).value == doctest::Approx(-std::log(0.5)).epsilon(1e-15));

  const auto g = nll_gradient(h2, fixture);
  CHECK(g(1, 0) == doctest::Approx(-4.0 / 3).epsilon(1e-15));
  CHECK(g(1, 2) == doctest::Approx(-2.0 / 3).epsilon(1e-15));
  CHECK(g(0, 0) == 0.0);
  CHECK(g.col(1).isZero());
  CHECK(g.col(3).isZero());

  // Zero mass on an observed transition.
  const auto blocked = TransitionHypermatrix::create(3, 2, rows(2, 4, {1, 0.5, 1, 0.5, 0, 0.5, 0, 0.5}));
  const auto inf = nll(blocked, fixture);
  CHECK_FALSE(inf.finite);
  CHECK(std::isinf(inf.value));
  CHECK(code_of([&] { nll_gradient(blocked, fixture); }) == ErrorCode::InfiniteNLL);

  const auto order4 = TransitionHypermatrix::create(4, 2, Eigen::MatrixXd::Constant(2, 8, 0.5));
  CHECK(code_of([&] { nll(order4, fixture); }) == ErrorCode::Unsupported);
  CHECK(code_of([&] { nll(uniform, fixture); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("nll gradient with no data is zero") {
  const auto h = TransitionHypermatrix::create(3, 2, Eigen::MatrixXd::Constant(2, 4, 0.5));
  const std::vector<Trajectory> none;
  CHECK(nll_gradient(h, none).isZero());
  CHECK(nll(h, none).value == 0.0);
}

TEST_CASE("nll agrees with a from-scratch evaluation") {
  Rng rng(401);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = oracle::random_hypermatrix(rng, 3, 4);
    const auto data = sample(h, 3, 60, 10 + trial);
    CHECK(nll(h, data).value == doctest::Approx(oracle::nll_from_scratch(h.flattening(), data)).epsilon(1e-12));
  }
}

TEST_CASE("property: analytic gradient matches central differences") {
  Rng rng(402);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = oracle::random_interior_hypermatrix(rng, 4, 0.05);
    const auto data = sample(h, 4, 50, 100 + trial);
    const double worst = oracle::gradient_check(h.flattening(), nll_gradient(h, data), data);
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("project_simplex examples") {
  auto proj = [](std::vector<double> v) { return project_simplex(v); };
  CHECK(proj({0.3, 0.7}) == StochasticVector({0.3, 0.7}));
  CHECK(proj({2, 0}) == StochasticVector({1, 0}));
  const auto p = proj({0.6, 0.8});
  CHECK(p[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.6).epsilon(1e-15));
  const auto o = oracle::simplex_projection({0.6, 0.8});
  CHECK(std::abs(o[0] - 0.4) <= 1e-12);
}

TEST_CASE("property: project_simplex matches the KKT oracle and is idempotent") {
  Rng rng(403);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 12);
    std::vector<double> v(n);
    for (auto& e : v) e = (rng.uniform() - 0.5) * 4.0;
    const auto p = project_simplex(v);
    const auto ref = oracle::simplex_projection(v);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(p[i] - ref[i]) <= 1e-9);
    const auto again = project_simplex(p.values());
    CHECK(again == p);
  }
}

TEST_CASE("fit on a deterministic cycle concentrates on observed moves") {
  std::vector<std::size_t> states;
  for (int i = 0; i < 200; ++i) states.push_back(static_cast<std::size_t>(i % 2));
  const std::vector<Trajectory> data{{2, states}};
  const auto fit = fit_srw(data, 2);
  const auto& p = fit.hypermatrix;
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(p.entry(1, 0, k) >= 0.99);
    CHECK(p.entry(0, 1, k) >= 0.99);
  }
  check_nonincreasing(fit.nll_trace);
  CHECK(fit.converged);
}

TEST_CASE("fit beats the generating hypermatrix on its training data") {
  const auto r1 = fixtures::r1();
  const auto data = sample(r1, 20, 200, 7);
  const auto fit = fit_srw(data, 4);
  check_nonincreasing(fit.nll_trace);
  CHECK(fit.converged);
  CHECK(fit.nll_trace.back() <= nll(r1, data).value);
  CHECK(nll(fit.hypermatrix, data).value == doctest::Approx(fit.nll_trace.back()).epsilon(1e-14));
  CHECK_FALSE(validate(fit.hypermatrix).has_value());
}

TEST_CASE("property: nll trace is nonincreasing on random fits") {
  Rng rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 4);
    const auto h = oracle::random_hypermatrix(rng, 3, n);
    const auto data = sample(h, 5, 80, 200 + trial);
    FitConfig cfg;
    cfg.uniform_init = trial % 2 == 0;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const auto fit = fit_srw(data, n, cfg);
    check_nonincreasing(fit.nll_trace);
    CHECK(fit.nll_trace.size() == fit.iterations + 1);
  }
}

TEST_CASE("unobserved blocks keep their initial value") {
  // State 3 is never left, so columns (., 3, k) see no data.
  const std::vector<Trajectory> data{traj(3, {1, 2, 1, 2, 1, 1, 2})};
  const auto fit = fit_srw(data, 3);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < 3; ++i) CHECK(fit.hypermatrix.entry(i, 2, k) == 1.0 / 3);
}

TEST_CASE("property: fitting commutes with relabeling states") {
  const std::size_t n = 4;
  const std::vector<std::size_t> perm{2, 0, 3, 1};
  Rng rng(405);
  const auto h = oracle::random_hypermatrix(rng, 3, n);
  const auto data = sample(h, 6, 100, 31);
  std::vector<Trajectory> relabeled = data;
  for (auto& t : relabeled)
    for (auto& s : t.states) s = perm[s];
  const auto a = fit_srw(data, n);
  const auto b = fit_srw(relabeled, n);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(a.hypermatrix.entry(i, j, k) -
                                         b.hypermatrix.entry(perm[i], perm[j], perm[k])));
  CHECK(worst <= 1e-6);
}

TEST_CASE("fit config validation") {
  FitConfig bad;
  bad.armijo_c = 1.5;
  CHECK(code_of([&] { bad.check(); }) == ErrorCode::OutOfRange);
  bad = {};
  bad.tol = 0.0;
  CHECK(code_of([&] { bad.check(); }) == ErrorCode::OutOfRange);
  const std::vector<Trajectory> none;
  CHECK_THROWS_AS(fit_srw(none, 2), Error);
}
