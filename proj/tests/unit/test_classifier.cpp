#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "solvq/classifier.hpp"
#include "solvq/errors.hpp"

using namespace solvq;

TEST_CASE("identity pair: local routes with certified window mass") {
  PairPtr id = make_constant(1, 1);
  GridPolicy policy = GridPolicy::for_pair(id);
  policy.x_max = 64;

  SolvabilityVerdict l2 = classify(id, Space::Lp(2.0), policy);
  CHECK(l2.decision == Decision::Solvable);
  CHECK(l2.route == "Thm2.2");

  SolvabilityVerdict l1 = classify(id, Space::L1(), policy);
  CHECK(l1.decision == Decision::Solvable);
  CHECK(l1.route == "Thm2.4");

  SolvabilityVerdict c = classify(id, Space::C(), policy);
  CHECK(c.decision == Decision::NotSolvable);
  CHECK(c.route == "Thm2.6");
}

TEST_CASE("route soundness: solvable verdicts carry resolved evidence only") {
  PairPtr id = make_constant(1, 1);
  GridPolicy policy = GridPolicy::for_pair(id);
  policy.x_max = 64;
  for (const Space& sp : {Space::Lp(2.0), Space::L1()}) {
    SolvabilityVerdict v = classify(id, sp, policy);
    REQUIRE(v.decision == Decision::Solvable);
    for (const auto& e : v.evidence) {
      CHECK(e.status.find("Inconclusive") == std::string::npos);
    }
    // the certificate that picked the local route must be present
    bool has_b = false;
    for (const auto& e : v.evidence)
      if (e.name == "B(a)") has_b = true;
    CHECK(has_b);
  }
}

TEST_CASE("vanishing q: every space fails") {
  PairPtr decay = make_expr("1", "exp(-abs(x))");
  GridPolicy policy = GridPolicy::for_pair(decay);
  policy.x_max = 64;
  for (const Space& sp : {Space::Lp(2.0), Space::L1(), Space::C()}) {
    SolvabilityVerdict v = classify(decay, sp, policy);
    CHECK(v.decision == Decision::NotSolvable);
  }
}

TEST_CASE("vanishing-q shortcut with bounded window mass") {
  // q/r == 1 keeps B(a) = 2a > 0 while q itself dies out
  PairPtr p = make_expr("exp(-abs(x))", "exp(-abs(x))");
  GridPolicy policy = GridPolicy::for_pair(p);
  policy.x_max = 64;
  for (const Space& sp : {Space::Lp(2.0), Space::L1(), Space::C()}) {
    SolvabilityVerdict v = classify(p, sp, policy);
    CHECK(v.decision == Decision::NotSolvable);
    CHECK(v.route == "Thm2.7");
  }
}

TEST_CASE("growing q: the C-space fast path") {
  PairPtr grow = make_expr("1", "1+x*x");
  GridPolicy policy = GridPolicy::for_pair(grow);
  SolvabilityVerdict v = classify(grow, Space::C(), policy);
  CHECK(v.decision == Decision::Solvable);
  CHECK(v.route == "Thm9.3");
}

TEST_CASE("scaling leaves decisions unchanged") {
  GridPolicy id_policy;
  id_policy.x_max = 64;
  for (double c : {0.5, 2.0}) {
    for (const Space& sp : {Space::Lp(2.0), Space::L1(), Space::C()}) {
      SolvabilityVerdict base = classify(make_constant(1, 1), sp, id_policy);
      SolvabilityVerdict scaled =
          classify(scale_pair(make_constant(1, 1), c), sp, id_policy);
      CHECK(base.decision == scaled.decision);
    }
  }
}

TEST_CASE("local-regularity certificate: table decisions") {
  GridPolicy policy;
  policy.x_max = 64;
  PairPtr id = make_constant(1, 1);
  RegularityCert cert{1.0, 2.0, 0.0, 0.0};  // gamma_hat = e^{-2} <= 1/3
  SolvabilityVerdict l2 = classify_thm12(id, Space::Lp(2.0), cert, policy);
  CHECK(l2.decision == Decision::Solvable);
  SolvabilityVerdict l1 = classify_thm12(id, Space::L1(), cert, policy);
  CHECK(l1.decision == Decision::Solvable);
  SolvabilityVerdict c = classify_thm12(id, Space::C(), cert, policy);
  CHECK(c.decision == Decision::NotSolvable);

  GridPolicy pg;
  pg.x_max = 1024;
  PairPtr grow = make_expr("1", "1+x*x");
  RegularityCert cert2{1.5, 5.0, -3.0, 3.0};
  SolvabilityVerdict cg = classify_thm12(grow, Space::C(), cert2, pg);
  CHECK(cg.decision == Decision::Solvable);

  PairPtr decay = make_expr("1", "exp(-abs(x))");
  RegularityCert cert3{1.5, 0.5, -2.0, 2.0};
  // the narrow-window certificate holds for e^{-|x|} (window b r/q grows
  // but ratio stays within e^{b r / q * slope}); expect a violation instead
  CHECK_THROWS_AS(classify_thm12(decay, Space::L1(), cert3, pg),
                  HypothesisViolated);
}

TEST_CASE("certificate arithmetic is checked") {
  GridPolicy policy;
  PairPtr id = make_constant(1, 1);
  RegularityCert bad{2.0, 0.1, 0.0, 0.0};  // 4 e^{-0.025} > 1/3
  CHECK_THROWS_AS(classify_thm12(id, Space::L1(), bad, policy),
                  HypothesisViolated);
}

TEST_CASE("closed-form family verdicts") {
  // (0,0,1): L2 solvable via the beta = alpha = 0 clause
  SolvabilityVerdict v1 = classify_example8(0, 0, 1, Space::Lp(2.0));
  CHECK(v1.decision == Decision::Solvable);
  CHECK(v1.route == "Thm8.12/Eq8.24");

  // (-1,0,1): L1 needs alpha >= 0
  SolvabilityVerdict v2 = classify_example8(-1, 0, 1, Space::L1());
  CHECK(v2.decision == Decision::NotSolvable);
  CHECK(v2.route == "Thm8.13");

  // (0,1,1): C solvable, boundary of gamma >= beta - alpha
  SolvabilityVerdict v3 = classify_example8(0, 1, 1, Space::C());
  CHECK(v3.decision == Decision::Solvable);
  CHECK(v3.route == "Thm8.14/Eq8.27");
  CHECK(!v3.caveats.empty());

  // (0,1,2): L2 via the moderate-oscillation clause, p >= 1 - alpha/beta
  SolvabilityVerdict v4 = classify_example8(0, 1, 2, Space::Lp(2.0));
  CHECK(v4.decision == Decision::Solvable);
  CHECK(v4.route == "Thm8.12/Eq8.25");

  // (-1,2,2): steep-oscillation clause
  SolvabilityVerdict v5 = classify_example8(-1, 2, 2, Space::Lp(2.0));
  CHECK(v5.decision == Decision::Solvable);
  CHECK(v5.route == "Thm8.12/Eq8.26");

  CHECK_THROWS_AS(classify_example8(0, 1, 0, Space::L1()), ConfigError);
}

TEST_CASE("p-monotonicity of the closed-form Lp verdicts") {
  for (double a : {-1.0, 0.0, 1.0})
    for (double b : {0.0, 1.0, 2.0})
      for (double g : {0.5, 1.0, 2.0})
        for (double p1 : {1.5, 2.0, 3.0}) {
          if (classify_example8(a, b, g, Space::Lp(p1)).decision !=
              Decision::Solvable)
            continue;
          for (double p2 : {2.0, 3.0, 6.0}) {
            if (p2 < p1) continue;
            CHECK(classify_example8(a, b, g, Space::Lp(p2)).decision ==
                  Decision::Solvable);
          }
        }
}

TEST_CASE("cross-check accepts only the desk-scale band") {
  GridPolicy policy;
  CHECK_THROWS_AS(cross_check_example8(5, 0, 1, Space::L1(), policy),
                  ConfigError);
}
