#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "solvq/coefficients.hpp"
#include "solvq/errors.hpp"
#include "solvq/expression.hpp"

using namespace solvq;

TEST_CASE("constant pair") {
  PairPtr p = make_constant(1.0, 1.0);
  CHECK(p->r(5.0) == 1.0);
  CHECK(p->q(5.0) == 1.0);
  PairPtr z = make_constant(2.0, 0.0);
  CHECK(z->q(-3.0) == 0.0);
  CHECK_THROWS_AS(make_constant(0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(make_constant(-1.0, 1.0), ConfigError);
}

TEST_CASE("exp-osc pair values") {
  PairPtr p = make_exp_osc(0.0, 1.0, 2.0);
  CHECK(p->r(0.0) == 1.0);
  CHECK(p->q(0.0) == doctest::Approx(1.0 + std::cos(1.0)).epsilon(1e-14));
  PairPtr flat = make_exp_osc(0.0, 0.0, 1.0);
  for (double x : {-3.0, -1.0, 0.0, 0.5, 2.0}) {
    double q = flat->q(x);
    CHECK(q >= 0.0);
    CHECK(q <= 2.0);
  }
  // q(ln pi) = e^{ln pi}(1 + cos pi) = 0 for gamma = 1
  PairPtr g1 = make_exp_osc(1.0, 1.0, 1.0);
  CHECK(g1->q(std::log(M_PI)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(make_exp_osc(0.0, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(make_exp_osc(0.0, 1.0, -2.0), ConfigError);
}

TEST_CASE("sine-power pair values") {
  PairPtr t1 = make_sine_power(1.0);
  CHECK(t1->q(0.0) == doctest::Approx(1.0));
  PairPtr t2 = make_sine_power(2.0);
  CHECK(t2->q(std::sqrt(1.5 * M_PI)) == doctest::Approx(0.0).epsilon(1e-12));
  PairPtr th = make_sine_power(0.5);
  double x = (M_PI / 2) * (M_PI / 2);
  CHECK(th->q(x) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(make_sine_power(0.0), ConfigError);
}

TEST_CASE("positivity and evenness over random samples") {
  std::mt19937_64 gen(11);
  auto u = [&] { return (gen() >> 11) * 0x1.0p-53 * 100.0 - 50.0; };
  std::vector<PairPtr> presets = {make_constant(1, 1), make_sine_power(2.0),
                                  make_exp_osc(0, 1, 2), make_exp_osc(1, 1, 1)};
  for (const PairPtr& p : presets) {
    for (int i = 0; i < 10000; ++i) {
      double x = u();
      CHECK(p->r(x) > 0.0);
      CHECK(p->q(x) >= 0.0);
      CHECK(p->r(-x) == p->r(x));
      CHECK(p->q(-x) == p->q(x));
    }
  }
}

TEST_CASE("preset split and its pointwise identity") {
  PairPtr p = make_exp_osc(0.0, 1.0, 2.0);
  CoefficientSplit s = split_for_thm28(p);
  std::mt19937_64 gen(5);
  auto u = [&] { return (gen() >> 11) * 0x1.0p-53 * 20.0 - 10.0; };
  for (int i = 0; i < 200; ++i) {
    double x = u();
    double sum = s.q1(x) + s.q2(x);
    double q = p->q(x);
    CHECK(std::fabs(sum - q) <= 4 * std::numeric_limits<double>::epsilon() *
                                    std::max(1.0, std::fabs(q)));
    CHECK(s.q1(x) > 0.0);
  }
}

TEST_CASE("user split for kinds without a canonical one") {
  PairPtr c = make_constant(1.0, 1.0);
  CHECK_THROWS_AS(split_for_thm28(c), Unsplittable);
  CoefficientSplit s =
      split_for_thm28(c, [](double) { return 1.0; }, [](double) { return 0.0; });
  CHECK(s.q1(3.0) + s.q2(3.0) == doctest::Approx(1.0));

  PairPtr sp = make_sine_power(2.0);
  CoefficientSplit s2 = split_for_thm28(
      sp, [](double) { return 1.0; },
      [](double x) { return std::sin(x * x); });
  for (double x : {-2.0, 0.0, 1.3, 4.0})
    CHECK(s2.q1(x) + s2.q2(x) ==
          doctest::Approx(sp->q(x)).epsilon(1e-14));
}

TEST_CASE("oscillation hint breakpoints bracket the cosine zeros") {
  PairPtr p = make_exp_osc(0.0, 1.0, 2.0);
  const auto& h = *p->oscillation_hint;
  auto bps = h.breakpoints_in(0.0, 2.0, 10000);
  CHECK(bps.size() == static_cast<std::size_t>(h.count_in(0.0, 2.0)));
  for (double t : bps) {
    CHECK(t >= 0.0);
    CHECK(t <= 2.0);
    double u = std::exp(2.0 * t) / M_PI - 0.5;
    CHECK(std::fabs(u - std::round(u)) <= 1e-9 * std::max(1.0, u));
  }
  // mirrored interval
  auto neg = h.breakpoints_in(-2.0, -0.0, 10000);
  CHECK(neg.size() == bps.size());
  CHECK(std::is_sorted(neg.begin(), neg.end()));
}

TEST_CASE("scaling preserves q/r and the hint") {
  PairPtr p = make_exp_osc(0.0, 1.0, 1.0);
  PairPtr s = scale_pair(p, 2.0);
  CHECK(s->oscillation_hint != nullptr);
  for (double x : {-1.0, 0.3, 2.0}) {
    CHECK(s->r(x) == doctest::Approx(2.0 * p->r(x)));
    CHECK(s->q_over_r(x) == doctest::Approx(p->q_over_r(x)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(scale_pair(p, 0.0), ConfigError);
}

TEST_CASE("expression coefficients") {
  PairPtr p = make_expr("exp(abs(x))", "1+sin(pow(abs(x),2))");
  CHECK(p->r(1.0) == doctest::Approx(std::exp(1.0)));
  CHECK(p->q(2.0) == doctest::Approx(1.0 + std::sin(4.0)));
  CHECK_THROWS_AS(make_expr("exp(", "1"), ConfigError);
  CHECK_THROWS_AS(make_expr("1", "foo(x)"), ConfigError);
  Fn e = parse_expression("2*pi - x^2");
  CHECK(e(1.0) == doctest::Approx(2 * M_PI - 1.0));
}
