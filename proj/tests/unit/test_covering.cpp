#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "solvq/covering.hpp"
#include "solvq/errors.hpp"

using namespace solvq;

TEST_CASE("identity pair, unit half-widths") {
  PairPtr p = make_constant(1, 1);
  CoveringChain chain = build_d_covering(p, 0.0, Direction::Rightward, 5);
  REQUIRE(chain.segments.size() == 5);
  for (std::size_t n = 0; n < 5; ++n) {
    const auto& s = chain.segments[n];
    CHECK(s.center == doctest::Approx(2.0 * n + 1.0).epsilon(1e-9));
    CHECK(s.lo == doctest::Approx(2.0 * n).epsilon(1e-9));
    CHECK(s.hi == doctest::Approx(2.0 * n + 2.0).epsilon(1e-9));
  }
  CoveringChain left = build_d_covering(p, 0.0, Direction::Leftward, 3);
  CHECK(left.segments[0].center == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(left.segments[2].lo == doctest::Approx(-6.0).epsilon(1e-9));
}

TEST_CASE("constant kappa covering") {
  PairPtr p = make_constant(1, 1);
  Fn kappa = [](double) { return 0.5; };
  CoveringChain chain = build_covering(p, 0.0, kappa, 4, 100.0);
  for (std::size_t n = 0; n < 4; ++n)
    CHECK(chain.segments[n].center == doctest::Approx(0.5 + n).epsilon(1e-9));
}

TEST_CASE("abutment is exact and tiling has no gaps") {
  PairPtr p = make_exp_osc(0.0, 1.0, 2.0);
  CoveringChain chain = build_d_covering(p, 2.0, Direction::Rightward, 20, 1e-9);
  REQUIRE(chain.segments.size() == 20);
  CHECK(chain.segments[0].lo == 2.0);  // exact by construction
  for (std::size_t n = 1; n < chain.segments.size(); ++n)
    CHECK(chain.segments[n].lo == chain.segments[n - 1].hi);
  CoveringReport rep = verify_covering(chain);
  CHECK(rep.max_abutment_gap == 0.0);
  CHECK(rep.max_mass_deviation <= 1e-7);
  CHECK(rep.max_accum_violation <= 20 * 1e-8);
}

TEST_CASE("determinism: rebuilt chains are bitwise identical") {
  PairPtr p = make_exp_osc(0.0, 1.0, 1.0);
  CoveringChain a = build_d_covering(p, 0.5, Direction::Rightward, 10);
  CoveringChain b = build_d_covering(p, 0.5, Direction::Rightward, 10);
  REQUIRE(a.segments.size() == b.segments.size());
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    CHECK(a.segments[i].center == b.segments[i].center);
    CHECK(a.segments[i].lo == b.segments[i].lo);
    CHECK(a.segments[i].hi == b.segments[i].hi);
  }
}

TEST_CASE("verification flags a corrupted chain") {
  PairPtr p = make_constant(1, 1);
  CoveringChain chain = build_d_covering(p, 0.0, Direction::Rightward, 6);
  chain.segments[3].lo += 0.1;  // break the tiling
  CoveringReport rep = verify_covering(chain);
  CHECK(rep.max_abutment_gap >= 0.1 - 1e-12);
  CHECK(rep.max_accum_violation > 1e-3);
}

TEST_CASE("accumulated mass grows by 2 per segment on the identity pair") {
  PairPtr p = make_constant(1, 1);
  CoveringChain chain = build_d_covering(p, 0.0, Direction::Rightward, 8);
  CoveringReport rep = verify_covering(chain);
  CHECK(rep.max_accum_violation <= 8 * 1e-9);
  CHECK(rep.max_mass_deviation <= 1e-9);
}

TEST_CASE("tail certificate closed forms and dominance") {
  PairPtr p = make_constant(1, 1);
  CoveringChain chain = build_d_covering(p, 0.0, Direction::Rightward, 30);
  std::vector<double> bounds(chain.segments.size(), 2.0);

  double cert14 = tail_certificate(chain, 1.0, bounds, 14);
  double closed = 2.0 * std::exp(-26.0) / (1.0 - std::exp(-2.0));
  CHECK(cert14 == doctest::Approx(closed).epsilon(1e-9));
  CHECK(cert14 < 1e-10);

  // halving nu roughly doubles the chain length needed for the same bound
  auto needed = [&](double nu) {
    for (std::size_t n = 1; n <= bounds.size(); ++n)
      if (tail_certificate(chain, nu, bounds, n) <= 1e-10) return n;
    return bounds.size() + 1;
  };
  std::size_t n1 = needed(1.0), n_half = needed(0.5);
  CHECK(n_half >= 2 * n1 - 4);

  // zero bounds mean a zero tail
  std::vector<double> zero(chain.segments.size(), 0.0);
  CHECK(tail_certificate(chain, 1.0, zero, 3) == 0.0);

  // certified tails dominate the closed-form true tails of int e^{-nu t}
  std::mt19937_64 gen(31);
  auto u = [&] { return (gen() >> 11) * 0x1.0p-53; };
  for (int rep = 0; rep < 100; ++rep) {
    double nu = 0.1 + 2.9 * u();
    std::size_t from = 2 + static_cast<std::size_t>(u() * 18);
    double cert = tail_certificate(chain, nu, bounds, from);
    // true neglected tail from the segment start at 2(from-1)
    double true_tail = std::exp(-nu * 2.0 * (from - 1.0)) / nu;
    CHECK(cert >= true_tail * (1.0 - 1e-12));
  }
}

TEST_CASE("unbounded per-segment bounds are rejected") {
  PairPtr p = make_constant(1, 1);
  CoveringChain chain = build_d_covering(p, 0.0, Direction::Rightward, 12);
  std::vector<double> growing;
  for (std::size_t n = 0; n < chain.segments.size(); ++n)
    growing.push_back(std::exp(3.0 * n));  // outgrows e^{2 nu n} for nu = 1
  CHECK_THROWS_AS(tail_certificate(chain, 1.0, growing, 1), Unbounded);
}

TEST_CASE("root bracketing failure surfaces") {
  PairPtr p = make_constant(1, 1);
  Fn runaway = [](double t) { return 10.0 + std::fabs(t); };  // t - kappa(t) decreasing
  CHECK_THROWS_AS(build_covering(p, 0.0, runaway, 3, 50.0), RootNotBracketed);
}
