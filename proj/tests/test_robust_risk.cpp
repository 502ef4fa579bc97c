#include <doctest.h>

#include <array>
#include <cmath>

#include "dgsam/convergence.hpp"
#include "dgsam/errors.hpp"
#include "dgsam/linear_program.hpp"
#include "dgsam/seeded_rng.hpp"
#include "dgsam/theory_checks.hpp"
#include "dgsam/uncertainty.hpp"
#include "dgsam/worst_case.hpp"
#include "oracles.hpp"

using namespace dgsam;

namespace {

std::array<double, 3> random_simplex(SeededRng& rng) {
  std::array<double, 3> p{};
  double s = 0.0;
  for (auto& v : p) {
    v = 0.05 + rng.uniform();
    s += v;
  }
  for (auto& v : p) v /= s;
  return p;
}

std::vector<double> vec(const std::array<double, 3>& a) { return {a.begin(), a.end()}; }

}  // namespace

TEST_CASE("divergence helpers") {
  const std::vector<double> p{0.5, 0.5};
  CHECK(kl_divergence({1.0, 0.0}, p) == doctest::Approx(std::log(2.0)));
  CHECK(kl_divergence(p, p) == 0.0);
  CHECK(tv_distance({1.0, 0.0}, p) == doctest::Approx(0.5));
  Eigen::MatrixXd m(2, 2);
  m << 0.0, 3.0, 3.0, 0.0;
  CHECK(w1_distance({1.0, 0.0}, p, m) == doctest::Approx(1.5));
  CHECK(std::isinf(kl_divergence({0.5, 0.5}, {1.0, 0.0})));
}

TEST_CASE("rho of delta per divergence") {
  CHECK(rho_of_delta(1.0, 1.0, 1.0, Divergence::KL, std::log(2.0)) ==
        doctest::Approx(std::sqrt(std::log(2.0) / 2.0)));
  CHECK(rho_of_delta(2.0, 4.0, 1.0, Divergence::KL, 0.5) == doctest::Approx(0.25));
  CHECK(rho_of_delta(2.0, 4.0, 1.0, Divergence::KL, 0.0) == 0.0);
  CHECK(rho_of_delta(1.0, 1.0, 0.0, Divergence::KL, 2.0) == doctest::Approx(1.0));
  CHECK(rho_of_delta(2.0, 4.0, 0.0, Divergence::TV, 0.5) == doctest::Approx(0.25));
  CHECK(rho_of_delta(0.0, 1.5, 3.0, Divergence::W1, 2.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(rho_of_delta(2.0, 0.0, 1.0, Divergence::KL, 0.1), ConfigError);
}

TEST_CASE("simplex LP solver on small problems") {
  // max x + 2y s.t. x + y + s = 4, x + 3y + t = 6.
  Eigen::MatrixXd A(2, 4);
  A << 1, 1, 1, 0, 1, 3, 0, 1;
  Eigen::VectorXd b(2);
  b << 4, 6;
  Eigen::VectorXd c(4);
  c << 1, 2, 0, 0;
  const auto r = solve_standard_lp(A, b, c);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(5.0));
  Eigen::MatrixXd A2(1, 2);
  A2 << 1, -1;
  Eigen::VectorXd b2(1);
  b2 << 1;
  Eigen::VectorXd c2(2);
  c2 << 1, 0;
  CHECK(solve_standard_lp(A2, b2, c2).status == LpStatus::Unbounded);
  Eigen::MatrixXd A3(1, 1);
  A3 << 1;
  Eigen::VectorXd b3(1);
  b3 << -1;
  Eigen::VectorXd c3(1);
  c3 << 1;
  CHECK(solve_standard_lp(A3, b3, c3).status == LpStatus::Infeasible);
}

TEST_CASE("KL worst case matches the simplex-grid oracle") {
  SeededRng rng(100);
  for (int rep = 0; rep < 50; ++rep) {
    const auto p = random_simplex(rng);
    const std::array<double, 3> l{rng.uniform(), rng.uniform(), rng.uniform()};
    const double delta = rng.uniform(0.01, 1.0);
    const auto r = worst_case_kl(vec(l), vec(p), delta);
    const double brute =
        oracle::simplex_grid_max(l, p, [&](const auto& q) { return oracle::kl(q, p); }, delta);
    CHECK(std::abs(r.value - brute) <= 1e-4);
    CHECK(r.divergence <= delta + 1e-9);
    CHECK(r.value >= r.base_value - 1e-12);
  }
}

TEST_CASE("TV worst case matches the simplex-grid oracle") {
  SeededRng rng(101);
  for (int rep = 0; rep < 50; ++rep) {
    const auto p = random_simplex(rng);
    const std::array<double, 3> l{rng.uniform(), rng.uniform(), rng.uniform()};
    const double delta = rng.uniform(0.01, 0.6);
    const auto r = worst_case_tv(vec(l), vec(p), delta);
    const double brute =
        oracle::simplex_grid_max(l, p, [&](const auto& q) { return oracle::tv(q, p); }, delta);
    CHECK(std::abs(r.value - brute) <= 1e-4);
  }
}

TEST_CASE("W1 worst case matches the simplex-grid oracle with a CDF metric") {
  SeededRng rng(102);
  for (int rep = 0; rep < 50; ++rep) {
    const auto p = random_simplex(rng);
    const std::array<double, 3> l{rng.uniform(), rng.uniform(), rng.uniform()};
    std::vector<double> xs{rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2)};
    std::sort(xs.begin(), xs.end());
    Eigen::MatrixXd m(3, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m(i, j) = std::abs(xs[i] - xs[j]);
    }
    const double delta = rng.uniform(0.01, 0.5);
    const auto r = worst_case_w1(vec(l), vec(p), m, delta);
    const double brute = oracle::simplex_grid_max(
        l, p, [&](const auto& q) { return oracle::w1_line(vec(q), vec(p), xs); }, delta);
    CHECK(std::abs(r.value - brute) <= 1e-4);
    CHECK(oracle::w1_line(r.q, vec(p), xs) <= delta + 1e-9);
  }
}

TEST_CASE("worst-case risk is non-decreasing in delta") {
  SeededRng rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const auto p = vec(random_simplex(rng));
    const std::vector<double> l{rng.uniform(), rng.uniform(), rng.uniform()};
    Eigen::MatrixXd m(3, 3);
    m << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    double pk = -1, pt = -1, pw = -1;
    for (double d = 0.0; d <= 1.0; d += 0.05) {
      const double k = worst_case_kl(l, p, d).value;
      const double t = worst_case_tv(l, p, d).value;
      const double w = worst_case_w1(l, p, m, d).value;
      CHECK(k >= pk - 1e-12);
      CHECK(t >= pt - 1e-12);
      CHECK(w >= pw - 1e-9);
      pk = k;
      pt = t;
      pw = w;
    }
  }
}

TEST_CASE("zero radius recovers the base risk; large radius the max loss") {
  const std::vector<double> l{0.1, 0.7, 0.4};
  const std::vector<double> p{0.3, 0.3, 0.4};
  const double base = 0.03 + 0.21 + 0.16;
  CHECK(worst_case_kl(l, p, 0.0).value == doctest::Approx(base));
  CHECK(worst_case_tv(l, p, 0.0).value == doctest::Approx(base));
  CHECK(worst_case_kl(l, p, 5.0).value == doctest::Approx(0.7));
  CHECK(worst_case_tv(l, p, 1.0).value == doctest::Approx(0.7));
}

TEST_CASE("uncertainty set membership") {
  auto base = std::make_shared<FiniteSupportStatLoss>(
      PointwiseLoss::Linear, std::vector<ParameterVector>{{1.0}, {-1.0}}, std::vector<double>{},
      std::vector<double>{0.5, 0.5}, ParameterBox{});
  UncertaintySet u{base, Divergence::TV, 0.2};
  CHECK(u.contains({0.6, 0.4}));
  CHECK_FALSE(u.contains({0.8, 0.2}));
  u.delta = -1.0;
  CHECK_THROWS_AS(u.validate(), ConfigError);
}

TEST_CASE("bound holds on random finite-support instances") {
  SeededRng rng(55);
  for (int i = 0; i < 60; ++i) {
    const auto div = static_cast<Divergence>(i % 3);
    const auto inst = random_bound_instance(rng, div);
    const auto r = check_theorem1_bound(inst.problem, inst.theta, inst.divergence, inst.delta);
    CHECK(r.pass);
    CHECK(r.lhs <= r.rhs + 1e-8);
    CHECK(r.lhs >= r.total_loss - 1e-12);
  }
}

TEST_CASE("global sharpness alone cannot bound the worst case") {
  for (double t : {0.1, 0.5, 1.0}) {
    const auto v = global_sharpness_violation(t, std::log(2.0));
    CHECK(v.total_loss == doctest::Approx(0.0));
    CHECK(v.global_sharpness == doctest::Approx(0.0));
    CHECK(std::abs(v.margin - t) <= 1e-9);
  }
}

TEST_CASE("flat-vs-fake-flat ordering witness") {
  for (double rho : {0.001, 0.005, 0.01, 0.05}) {
    const auto r = build_prop1_counterexample(rho);
    CHECK(r.global_ordering);
    CHECK(r.individual_ordering);
    CHECK(r.global2 - r.global1 >= 1e-10);
    CHECK(r.mean_individual1 - r.mean_individual2 >= 1e-10);
  }
  CHECK_THROWS_AS(build_prop1_counterexample(0.2), ConfigError);
  CHECK_THROWS_AS(build_prop1_counterexample(0.01, 1.5), ConfigError);
}

TEST_CASE("convergence constants match the independent calculator") {
  ConvergenceBudget b{1.0, 1.0, 1.0, 1.0, 1.0, 2, 0.5};
  const auto c = convergence_constants(b);
  const auto o = oracle::convergence_oracle(1, 1, 1, 1, 1, 2, 0.5);
  CHECK(c.T_min == 4608);
  CHECK(o.T_int == 4608);
  CHECK(c.gamma_bar == doctest::Approx(o.gamma));
  CHECK(c.rho_bar == doctest::Approx(o.rho));
  SeededRng rng(3);
  for (int i = 0; i < 200; ++i) {
    ConvergenceBudget r{rng.uniform(0.1, 5), rng.uniform() < 0.3 ? 0.0 : rng.uniform(0, 3),
                        rng.uniform() < 0.3 ? 0.0 : rng.uniform(0, 3),
                        rng.uniform() < 0.3 ? 0.0 : rng.uniform(0, 3), rng.uniform(0.1, 5),
                        1 + rng.index(5), rng.uniform(0.01, 1.0)};
    const auto cc = convergence_constants(r);
    const auto oo = oracle::convergence_oracle(r.L, r.M1, r.M2, r.M3, r.M4,
                                               static_cast<double>(r.S), r.epsilon);
    CHECK(cc.T_min_real == doctest::Approx(oo.T).epsilon(1e-9));
    CHECK(cc.gamma_bar == doctest::Approx(oo.gamma).epsilon(1e-9));
    CHECK(cc.rho_bar == doctest::Approx(oo.rho).epsilon(1e-12));
  }
}

TEST_CASE("convergence constants are monotone") {
  SeededRng rng(4);
  for (int i = 0; i < 100; ++i) {
    ConvergenceBudget b{rng.uniform(0.1, 5), rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 3),
                        rng.uniform(0.1, 5), 1 + rng.index(4), rng.uniform(0.01, 1.0)};
    const auto c = convergence_constants(b);
    auto eps = b;
    eps.epsilon *= 1.5;
    CHECK(convergence_constants(eps).T_min <= c.T_min);
    auto bigL = b;
    bigL.L *= 2.0;
    CHECK(convergence_constants(bigL).gamma_bar <= c.gamma_bar * (1 + 1e-12));
    CHECK(convergence_constants(bigL).rho_bar <= c.rho_bar * (1 + 1e-12));
    auto bigS = b;
    bigS.S += 1;
    CHECK(convergence_constants(bigS).gamma_bar <= c.gamma_bar * (1 + 1e-12));
    CHECK(convergence_constants(bigS).rho_bar <= c.rho_bar * (1 + 1e-12));
  }
}

TEST_CASE("degenerate ER constants collapse the branches") {
  ConvergenceBudget b{2.0, 0.0, 0.0, 0.0, 3.0, 2, 0.1};
  const auto c = convergence_constants(b);
  CHECK(c.gamma_bar == 1.0);
  CHECK(c.T_min_real == doctest::Approx(12.0 * 3.0 / (0.01 * 2.0)));
}

TEST_CASE("stationarity test passes at t=0 when epsilon is large") {
  QuadraticDomainEnsemble e;
  e.hessians = {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)};
  e.anchor_gradients = {ParameterVector{0.1, 0.0}, ParameterVector{-0.1, 0.0}};
  e.anchor = ParameterVector{0.0, 0.0};
  const ParameterVector t0{0.1, 0.1};
  const auto b = quadratic_budget(e, t0, 10.0);
  const auto r = empirical_stationarity_test(e.to_problem(), b, t0, 0, 100);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.steps_run == 0);
}

TEST_CASE("quadratic ER constants in closed form") {
  QuadraticDomainEnsemble e;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
  h.diagonal() << 2.0, 1.0;
  e.hessians = {h, h};
  e.anchor_gradients = {ParameterVector{1.0, 0.0}, ParameterVector{-1.0, 0.0}};
  e.anchor = ParameterVector{0.0, 0.0};
  const auto k = quadratic_er_constants(e);
  CHECK(k.L == doctest::Approx(2.0));
  CHECK(k.M1 == 0.0);
  CHECK(k.M2 == 1.0);
  CHECK(k.M3 == doctest::Approx(1.0));
  CHECK(norm2(k.minimizer) < 1e-14);
}
