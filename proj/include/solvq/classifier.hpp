#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solvq/criteria.hpp"

namespace solvq {

struct Space {
  enum class Kind { Lp, L1, C } kind = Kind::Lp;
  double p = 2.0;  // meaningful for Lp only

  static Space Lp(double p) { return {Kind::Lp, p}; }
  static Space L1() { return {Kind::L1, 1.0}; }
  static Space C() { return {Kind::C, 0.0}; }
  std::string label() const;
};

/// Parses "L1", "C", "L2", "L3.5", ... Throws ConfigError.
Space parse_space(const std::string& text);

enum class Decision { Solvable, NotSolvable, Inconclusive };
enum class VerdictMode { Symbolic, Numeric };

const char* to_string(Decision d);
const char* to_string(VerdictMode m);

struct EvidenceItem {
  std::string name;    // e.g. "Apprime", "S1", "B(a)", "r0"
  std::string status;  // FiniteStable / Diverging / Stabilized / ...
  double value = 0;
  double confidence = 0;
};

struct SolvabilityVerdict {
  Space space;
  Decision decision = Decision::Inconclusive;
  std::string route;  // identifier of the criterion route used
  VerdictMode mode = VerdictMode::Numeric;
  std::vector<EvidenceItem> evidence;
  std::vector<std::string> caveats;
};

/// Numeric classification through the criterion functionals. Local routes
/// (window-mass certificate established for some a) are preferred; a
/// Solvable verdict never rests on Inconclusive evidence, and NotSolvable
/// requires a positively violated necessary condition.
SolvabilityVerdict classify(const PairPtr& pair, const Space& space,
                            const GridPolicy& policy);
SolvabilityVerdict classify(const PairPtr& pair, const Space& space);

/// Caller-certified local-regularity classification: both coefficients
/// positive continuous, ratio bounds with constant `a` on windows of width
/// b r/q outside (x_lo, x_hi), and a^2 exp(-b/a^2) <= 1/3. The certificate
/// is spot-checked on a grid; violations throw HypothesisViolated.
struct RegularityCert {
  double a = 1.0;
  double b = 1.0;
  double x_lo = 0.0, x_hi = 0.0;  // exempted interval
};

SolvabilityVerdict classify_thm12(const PairPtr& pair, const Space& space,
                                  const RegularityCert& cert,
                                  const GridPolicy& policy);

/// Closed-form verdicts for r = e^{a|x|}, q = e^{b|x|}(1 + cos e^{g|x|}).
/// Pure arithmetic on the parameters; boundary parameter points carry an
/// exact-boundary caveat.
SolvabilityVerdict classify_example8(double alpha, double beta, double gamma,
                                     const Space& space);

struct CrossCheckReport {
  SolvabilityVerdict symbolic;
  SolvabilityVerdict numeric;
  bool agree = false;      // equal decisions, or numeric Inconclusive
  bool conflict = false;   // opposite firm decisions
};

CrossCheckReport cross_check_example8(double alpha, double beta, double gamma,
                                      const Space& space,
                                      const GridPolicy& policy);

}  // namespace solvq
