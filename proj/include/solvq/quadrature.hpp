#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "solvq/coefficients.hpp"

namespace solvq {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t subdivisions = 0;
  std::optional<double> truncation_point;
  std::optional<double> truncation_bound;
};

struct QuadOptions {
  std::size_t max_panels = 1000000;
  /// Breakpoint count beyond which cosine-factor pieces are evaluated by
  /// phase substitution with a certified remainder instead of panel
  /// subdivision at every sign change.
  std::size_t osc_budget = 1024;
  /// Return the best result instead of throwing MaxSubdivisions.
  bool accept_best = false;
};

/// Adaptive Gauss-Kronrod 7/15 over [a, b]. Panels never straddle a
/// breakpoint. Throws MaxSubdivisions (unless opt.accept_best) and
/// NonFinite.
QuadratureResult integrate_finite(const Fn& f, double a, double b, double tol,
                                  const std::vector<double>* breakpoints = nullptr,
                                  const QuadOptions& opt = {});

/// Integral of q/r over an arbitrary finite interval, oscillation-aware.
QuadratureResult integrate_qr(const PairPtr& pair, double a, double b,
                              double tol, const QuadOptions& opt = {});

/// Window mass: integral of q/r over [x-d, x+d].
QuadratureResult integrate_qr_window(const PairPtr& pair, double x, double d,
                                     double tol, const QuadOptions& opt = {});

/// Integral of the oscillatory part amp(t) cos(phase(|t|)) alone, brute
/// below the breakpoint budget and by phase substitution beyond it.
/// Requires an oscillation hint.
QuadratureResult integrate_osc_part(const PairPtr& pair, double a, double b,
                                    double tol, const QuadOptions& opt = {});

/// Cached cumulative mass m(t) = int_anchor^t q/r, signed. Queries are
/// resolved by integrating the gap to the nearest cached point, so nearby
/// queries stay cheap. In regions where the cosine factor is too dense to
/// subdivide, gaps carry only the smooth part and the dropped oscillation
/// is certified through osc_drop_bound(). Not thread-safe; use one
/// accumulator per task.
class MassAccumulator {
 public:
  MassAccumulator(PairPtr pair, double anchor, double gap_tol = 1e-12,
                  QuadOptions opt = {});

  /// Signed mass from the anchor to t.
  double mass(double t);

  /// Accumulated quadrature error over all cached gaps.
  double error() const { return err_; }

  /// Bound on oscillatory mass dropped anywhere inside [t0, t1].
  double osc_drop_bound(double t0, double t1) const;

  double anchor() const { return anchor_; }

 private:
  PairPtr pair_;
  double anchor_;
  double gap_tol_;
  QuadOptions opt_;
  std::map<double, double> cache_;
  double err_ = 0.0;
};

struct SegmentRef;  // covering.hpp

}  // namespace solvq
