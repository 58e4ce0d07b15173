#pragma once

#include <optional>
#include <vector>

#include "solvq/coefficients.hpp"
#include "solvq/quadrature.hpp"

namespace solvq {

enum class Trend { Stabilized, Vanishing, Inconclusive };

struct DSolveResult {
  double d = 0.0;
  double residual = 0.0;  // |window mass - 2| plus quadrature error
  double lo = 0.0, hi = 0.0;  // final bracket
};

/// Solves the window-mass equation int_{x-d}^{x+d} q/r = 2 for the smallest
/// positive root. Bracketing starts at r(x)/q(x) (falling back to 1 where
/// q(x) = 0) and doubles until the mass reaches 2; the root is then pinned
/// by damped false position on the monotone mass function.
/// Throws BracketExhausted if the mass stays below 2 up to bracket_limit.
DSolveResult d_of_x(const PairPtr& pair, double x, double tol = 1e-10,
                    double bracket_limit = 1e6,
                    std::optional<double> warm_guess = std::nullopt);

struct LocalizationSample {
  double x, d, residual, lo, hi;
};

struct LocalizationProfile {
  PairPtr pair;
  std::vector<LocalizationSample> samples;  // ordered by x
  double d0_estimate = 0.0;                 // running sup of d over samples
  double domain_limit = 0.0;                // largest |x| scanned
};

/// Solves d at each x (xs strictly increasing). Parallel over fixed chunks;
/// within a chunk the previous sample warm-starts the bracket.
LocalizationProfile scan_d(const PairPtr& pair, const std::vector<double>& xs,
                           double tol = 1e-10, double bracket_limit = 1e6);

struct WindowInfimum {
  double value = 0.0;  // grid minimum: an upper bound for the true inf
  double at_x = 0.0;
  Trend trend = Trend::Inconclusive;
  double confidence = 0.0;
};

/// Grid minimum of the window mass int_{x-a}^{x+a} q/r with a trend verdict
/// over geometric grid extension (vanishing vs stabilized).
WindowInfimum B_of_a(const PairPtr& pair, double a, const std::vector<double>& xs,
                     double tol = 1e-10);

/// The two localization-regularity suprema of the q = q1 + q2 machinery,
/// maximized over a z-grid (257 points) with golden-section refinement.
std::pair<double, double> kappa1_kappa2(const CoefficientSplit& split, double x,
                                        double tol = 1e-10);

struct DEstimateRow {
  double x, d_measured, d_predicted, ratio;
};

/// Measured d against the local prediction r/q1, row per x.
std::vector<DEstimateRow> d_estimate_thm28(const CoefficientSplit& split,
                                           const std::vector<double>& xs,
                                           double tol = 1e-10);

enum class SideVerdict { Diverging, Converging, Inconclusive };

struct SDivergence {
  double s1_partial = 0.0, s2_partial = 0.0;
  SideVerdict s1 = SideVerdict::Inconclusive, s2 = SideVerdict::Inconclusive;
  double confidence = 0.0;
  std::vector<double> s1_partials, s2_partials;  // over geometrically increasing X
};

/// Partial integrals of q/r over [-X, 0] and [0, X]; the verdict per side is
/// decided from the relative increase per doubling. Finiteness of an
/// improper integral is not decidable from finitely many evaluations; treat
/// the verdicts as evidence, not proof.
SDivergence s1_s2_diverge(const PairPtr& pair, double X, double tol = 1e-10);

}  // namespace solvq
