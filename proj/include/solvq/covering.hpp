#pragma once

#include <functional>
#include <vector>

#include "solvq/coefficients.hpp"
#include "solvq/dfunc.hpp"

namespace solvq {

enum class Direction { Rightward, Leftward };

struct CoveringSegment {
  double center = 0, half_width = 0;
  double lo = 0, hi = 0;   // abutting endpoints; lo of segment n+1 == hi of n
  double mass = 0;         // int_{lo}^{hi} q/r
  double mass_err = 0;
};

/// An R(x, kappa)-covering chain: abutting segments [center +- kappa(center)]
/// tiling [x, inf) (rightward) or (-inf, x] (leftward). Segments are stored
/// outward from the origin. With kappa = d every segment carries mass 2 up
/// to the solver tolerance, which is what certifies geometric tail decay.
struct CoveringChain {
  PairPtr pair;
  double origin = 0;
  Direction direction = Direction::Rightward;
  bool kappa_is_d = false;
  std::vector<CoveringSegment> segments;

  double frontier() const {
    if (segments.empty()) return origin;
    return direction == Direction::Rightward ? segments.back().hi
                                             : segments.back().lo;
  }
};

/// Chain for a user-supplied positive continuous kappa. Each next center
/// solves t -+ kappa(t) = previous outward endpoint by bracketed bisection.
/// Throws RootNotBracketed if no sign change appears within span_limit.
CoveringChain build_covering(const PairPtr& pair, double x,
                             const Fn& kappa, std::size_t n_max,
                             double span_limit,
                             Direction direction = Direction::Rightward);

/// Incremental chain with kappa = d, extended on demand. Each phi
/// evaluation needs a d-solve; solves are warm-started through the
/// 1-Lipschitz bound on d.
class DChain {
 public:
  DChain(PairPtr pair, double origin, Direction dir, double tol = 1e-10,
         double bracket_limit = 1e6);

  /// Segments built so far (index 0 nearest the origin).
  const CoveringChain& chain() const { return chain_; }

  /// Ensures at least n segments exist; throws BracketExhausted if d stops
  /// being solvable (insufficient one-sided mass).
  const CoveringSegment& segment(std::size_t i);

  std::size_t size() const { return chain_.segments.size(); }

 private:
  void extend_once();
  double d_at(double t);

  CoveringChain chain_;
  double tol_;
  double bracket_limit_;
  double last_d_ = 0.0, last_t_ = 0.0;
  bool have_last_ = false;
};

/// Snapshot helper: n_max segments of a kappa = d chain.
CoveringChain build_d_covering(const PairPtr& pair, double x, Direction dir,
                               std::size_t n_max, double tol = 1e-10);

struct CoveringReport {
  double max_mass_deviation = 0;      // max |mass_n - 2| (kappa = d chains)
  double max_accum_violation = 0;     // max over n of (2(n-1) - accum mass)+
  double max_abutment_gap = 0;        // exact 0 by construction
  std::size_t n_segments = 0;
};

/// Re-integrates each segment mass independently and checks the
/// accumulated-mass lower bound 2(n-1) at every segment start.
CoveringReport verify_covering(const CoveringChain& chain, double tol = 1e-9);

/// Certified bound on sum_{n >= from_segment} bound_n e^{-2 nu (n-1)}
/// (segments indexed from 1), extended past the built chain with the
/// largest observed per-segment bound. Throws Unbounded if the summand
/// grows along the chain.
double tail_certificate(const CoveringChain& chain, double nu,
                        const std::vector<double>& per_segment_bound,
                        std::size_t from_segment);

}  // namespace solvq
