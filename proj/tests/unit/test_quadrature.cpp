#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "solvq/coefficients.hpp"
#include "solvq/errors.hpp"
#include "solvq/quadrature.hpp"

using namespace solvq;

namespace {

// Dense-grid composite Simpson reference, independent of the adaptive path.
double simpson_dense(const Fn& f, double a, double b, int n) {
  if (n % 2) ++n;
  double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Simpson with panels split at the cosine sign changes, for oscillatory
// references.
double simpson_osc_reference(const Fn& f, double a, double b,
                             const std::vector<double>& bps, int per_piece) {
  std::vector<double> cuts{a};
  for (double t : bps)
    if (t > a && t < b) cuts.push_back(t);
  cuts.push_back(b);
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += simpson_dense(f, cuts[i], cuts[i + 1], per_piece);
  return total;
}

}  // namespace

TEST_CASE("constant integrand is exact") {
  Fn one = [](double) { return 1.0; };
  QuadratureResult r = integrate_finite(one, 0.0, 2.0, 1e-12);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.abs_error_estimate <= 1e-12);
}

TEST_CASE("exponential against the antiderivative") {
  Fn f = [](double t) { return std::exp(-t); };
  QuadratureResult r = integrate_finite(f, 0.0, 1.0, 1e-12);
  double exact = 1.0 - std::exp(-1.0);
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-13));
  CHECK(std::fabs(r.value - exact) <= 1e-12);
}

TEST_CASE("cos(e^{2t}) on [0,3] split at its sign changes") {
  Fn f = [](double t) { return std::cos(std::exp(2.0 * t)); };
  // breakpoints: e^{2t} = (k + 1/2) pi
  std::vector<double> bps;
  for (int k = 0;; ++k) {
    double t = 0.5 * std::log((k + 0.5) * M_PI);
    if (t >= 3.0) break;
    if (t > 0.0) bps.push_back(t);
  }
  QuadratureResult r = integrate_finite(f, 0.0, 3.0, 1e-10, &bps);
  double ref = simpson_osc_reference(f, 0.0, 3.0, bps, 512);
  CHECK(std::fabs(r.value - ref) <= 1e-8);
}

TEST_CASE("window mass of the identity pair") {
  PairPtr pair = make_constant(1.0, 1.0);
  CHECK(integrate_qr_window(pair, 0.0, 1.0, 1e-12).value ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate_qr_window(pair, 7.0, 0.25, 1e-12).value ==
        doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("oscillatory window against a dense reference") {
  PairPtr pair = make_exp_osc(0.0, 1.0, 2.0);
  QuadratureResult r = integrate_qr_window(pair, 0.0, 0.5, 1e-11);
  Fn qr = [&](double t) { return pair->q_over_r(t); };
  std::vector<double> bps = pair->oscillation_hint->breakpoints_in(-0.5, 0.5, 1000);
  double ref = simpson_osc_reference(qr, -0.5, 0.5, bps, 128);
  CHECK(std::fabs(r.value - ref) <= 1e-8);
}

TEST_CASE("linearity on random polynomials") {
  std::mt19937_64 gen(7);
  auto coef = [&] { return (gen() >> 11) * 0x1.0p-53 * 4.0 - 2.0; };
  for (int rep = 0; rep < 20; ++rep) {
    double c0 = coef(), c1 = coef(), c2 = coef(), d0 = coef(), d1 = coef();
    double a = coef(), b = a + 1.0 + std::fabs(coef());
    double s = coef(), t = coef();
    Fn f = [&](double x) { return c0 + c1 * x + c2 * x * x; };
    Fn g = [&](double x) { return d0 + d1 * x; };
    Fn combo = [&](double x) { return s * f(x) + t * g(x); };
    QuadratureResult rf = integrate_finite(f, a, b, 1e-12);
    QuadratureResult rg = integrate_finite(g, a, b, 1e-12);
    QuadratureResult rc = integrate_finite(combo, a, b, 1e-12);
    double expected = s * rf.value + t * rg.value;
    double slack = 1e-11 * (1.0 + std::fabs(expected));
    CHECK(std::fabs(rc.value - expected) <=
          std::fabs(s) * rf.abs_error_estimate +
              std::fabs(t) * rg.abs_error_estimate + slack);
  }
}

TEST_CASE("interval additivity") {
  Fn f = [](double x) { return std::sin(3.0 * x) + 0.2 * x; };
  QuadratureResult whole = integrate_finite(f, -1.0, 2.5, 1e-12);
  QuadratureResult left = integrate_finite(f, -1.0, 0.7, 1e-12);
  QuadratureResult right = integrate_finite(f, 0.7, 2.5, 1e-12);
  CHECK(std::fabs(whole.value - left.value - right.value) <=
        whole.abs_error_estimate + left.abs_error_estimate +
            right.abs_error_estimate + 1e-13);
}

TEST_CASE("non-finite integrand raises") {
  Fn f = [](double x) { return 1.0 / x; };
  CHECK_THROWS_AS(integrate_finite(f, -1.0, 1.0, 1e-10), NonFinite);
}

TEST_CASE("panel budget exhaustion raises unless accepted") {
  // an integrable singularity the rule keeps chasing
  Fn f = [](double x) { return 1.0 / std::sqrt(std::fabs(x - 0.3)); };
  QuadOptions opt;
  opt.max_panels = 64;
  CHECK_THROWS_AS(integrate_finite(f, -1.0, 1.0, 1e-13, nullptr, opt),
                  MaxSubdivisions);
  opt.accept_best = true;
  QuadratureResult r = integrate_finite(f, -1.0, 1.0, 1e-13, nullptr, opt);
  CHECK(r.abs_error_estimate > 1e-13);
}

TEST_CASE("phase-substitution fast path agrees with brute subdivision") {
  PairPtr pair = make_exp_osc(0.0, 1.0, 2.0);
  // around |t| ~ 6.3 both paths are feasible; force each via the budget
  double x = 6.3, d = 0.002;
  QuadOptions brute;
  brute.osc_budget = 100000;
  QuadOptions fast;
  fast.osc_budget = 1;
  QuadratureResult rb = integrate_qr_window(pair, x, d, 1e-10, brute);
  QuadratureResult rf = integrate_qr_window(pair, x, d, 1e-10, fast);
  CHECK(std::fabs(rb.value - rf.value) <=
        rb.abs_error_estimate + rf.abs_error_estimate + 1e-13);
  // the fast path must carry an honest certificate
  CHECK(rf.abs_error_estimate >= std::fabs(rb.value - rf.value) * 0.5);
}

TEST_CASE("mass accumulator matches direct integration") {
  PairPtr pair = make_exp_osc(0.0, 1.0, 1.0);
  MassAccumulator acc(pair, 0.5);
  std::mt19937_64 gen(3);
  auto u = [&] { return (gen() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 50; ++i) {
    double t = -2.0 + 6.0 * u();
    double direct = integrate_qr(pair, std::min(0.5, t), std::max(0.5, t), 1e-12)
                        .value;
    if (t < 0.5) direct = -direct;
    CHECK(std::fabs(acc.mass(t) - direct) <= 1e-9 + acc.error());
  }
}

TEST_CASE("empty interval and bad bounds") {
  Fn f = [](double) { return 1.0; };
  QuadratureResult r = integrate_finite(f, 1.0, 1.0, 1e-12);
  CHECK(r.value == 0.0);
  CHECK_THROWS_AS(integrate_finite(f, 2.0, 1.0, 1e-12), ConfigError);
}
