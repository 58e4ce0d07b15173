#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace solvq {

using Fn = std::function<double(double)>;

enum class CoefficientKind { Constant, SinePower, ExpOsc, UserDefined };

/// Structure of the oscillatory part of q/r for coefficient families whose
/// oscillation defeats plain adaptive rules at large |t|:
///
///   q(t)/r(t) = base(t) + amp(t) * cos(phase(|t|)),
///
/// with phase strictly increasing on [0, inf) and amp/phase' monotone on
/// [s0, inf) for every s0 > 0. Breakpoints are the sign changes of the
/// cosine factor.
struct OscillationHint {
  Fn base;          // even in t
  Fn amp;           // even in t
  Fn phase;         // of s = |t|
  Fn phase_deriv;   // dphase/ds
  Fn phase_inv;     // u -> s with phase(s) = u
  Fn amp_ratio;     // s -> amp(s)/phase_deriv(s)

  /// Number of cosine sign changes inside [a, b].
  double count_in(double a, double b) const;

  /// Sorted breakpoints inside (a, b); at most `cap` of them (callers must
  /// check count_in first if they need all of them).
  std::vector<double> breakpoints_in(double a, double b, std::size_t cap) const;
};

struct CoefficientPair {
  CoefficientKind kind = CoefficientKind::UserDefined;
  Fn r_eval;
  Fn q_eval;
  bool q_continuous = true;
  std::shared_ptr<const OscillationHint> oscillation_hint;  // ExpOsc only

  // Preset parameters, kept for symbolic routes and report echoes.
  double alpha = 0, beta = 0, gamma = 0;  // ExpOsc
  double theta = 0;                       // SinePower
  double r0 = 0, q0 = 0;                  // Constant

  double r(double t) const { return r_eval(t); }
  double q(double t) const { return q_eval(t); }
  double q_over_r(double t) const { return q_eval(t) / r_eval(t); }
  std::string describe() const;
};

using PairPtr = std::shared_ptr<const CoefficientPair>;

/// r == r0, q == q0. Rejects r0 <= 0 (and q0 < 0).
PairPtr make_constant(double r0, double q0);

/// r == 1, q(x) = 1 + sin(|x|^theta). Rejects theta <= 0.
PairPtr make_sine_power(double theta);

/// r(x) = e^{alpha|x|}, q(x) = e^{beta|x|} (1 + cos e^{gamma|x|}).
/// Rejects gamma <= 0.
PairPtr make_exp_osc(double alpha, double beta, double gamma);

/// Coefficients from expression strings (see parse_expression).
PairPtr make_expr(const std::string& r_expr, const std::string& q_expr);

/// (r, q) -> (c r, c q), preserving kind and oscillation structure
/// (q/r is invariant under this map). Rejects c <= 0.
PairPtr scale_pair(const PairPtr& pair, double c);

/// The q = q1 + q2 decomposition with q1 positive continuous.
struct CoefficientSplit {
  PairPtr parent;
  Fn q1_eval;
  Fn q2_eval;
  /// q2/r coincides with the hint's amp * cos(phase) (preset splits only);
  /// lets integrals of q2/r use the oscillation-aware path.
  bool matches_oscillation_hint = false;
  double q1(double t) const { return q1_eval(t); }
  double q2(double t) const { return q2_eval(t); }
};

/// Preset split for ExpOsc (q1 = e^{beta|x|}, q2 = e^{beta|x|} cos e^{gamma|x|});
/// other kinds must supply both parts. Throws Unsplittable otherwise.
CoefficientSplit split_for_thm28(const PairPtr& pair);
CoefficientSplit split_for_thm28(const PairPtr& pair, Fn q1, Fn q2);

}  // namespace solvq
