#include "solvq/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "solvq/errors.hpp"
#include "solvq/quadrature.hpp"

namespace solvq {

namespace {

// Root of f on [a, b] given f(a), f(b) of opposite signs; damped false
// position with a bisection fallback. Stops at bracket width x_tol.
double illinois_root(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double x_tol) {
  if (fa == 0) return a;
  if (fb == 0) return b;
  int last_kept = 0;  // -1: a side updated twice, +1: b side
  for (int it = 0; it < 100 && (b - a) > x_tol; ++it) {
    double t = (fa * b - fb * a) / (fa - fb);
    double margin = 0.05 * (b - a);
    if (!(t > a + margin && t < b - margin)) t = 0.5 * (a + b);
    double ft = f(t);
    if (ft == 0) return t;
    if ((ft < 0) == (fa < 0)) {
      a = t;
      fa = ft;
      if (last_kept == +1) fb *= 0.5;
      last_kept = +1;
    } else {
      b = t;
      fb = ft;
      if (last_kept == -1) fa *= 0.5;
      last_kept = -1;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

CoveringChain build_covering(const PairPtr& pair, double x, const Fn& kappa,
                             std::size_t n_max, double span_limit,
                             Direction direction) {
  CoveringChain chain;
  chain.pair = pair;
  chain.origin = x;
  chain.direction = direction;
  chain.kappa_is_d = false;
  const int sgn = direction == Direction::Rightward ? +1 : -1;

  double edge = x;
  for (std::size_t n = 0; n < n_max; ++n) {
    if (std::fabs(edge - x) > span_limit) break;
    // phi < 0 at the edge, > 0 once t has moved out past its own kappa.
    auto phi = [&](double t) { return sgn * (t - edge) - kappa(t); };
    double k_edge = kappa(edge);
    if (!(k_edge > 0))
      throw ConfigError("build_covering: kappa must be positive");
    double span = k_edge;
    double probe = edge + sgn * span;
    while (phi(probe) < 0) {
      span *= 2;
      if (span > span_limit)
        throw RootNotBracketed(
            "build_covering: t -+ kappa(t) never reaches the segment edge "
            "within span_limit");
      probe = edge + sgn * span;
    }
    double a = std::min(edge, probe), b = std::max(edge, probe);
    double center =
        illinois_root(phi, a, phi(a), b, phi(b), 1e-9 * std::max(k_edge, 1e-12));
    double hw = kappa(center);
    CoveringSegment seg;
    seg.center = center;
    seg.half_width = hw;
    if (sgn > 0) {
      seg.lo = edge;  // exact abutment
      seg.hi = center + hw;
    } else {
      seg.hi = edge;
      seg.lo = center - hw;
    }
    QuadratureResult m = integrate_qr(pair, seg.lo, seg.hi, 1e-10);
    seg.mass = m.value;
    seg.mass_err = m.abs_error_estimate;
    chain.segments.push_back(seg);
    edge = sgn > 0 ? seg.hi : seg.lo;
  }
  return chain;
}

DChain::DChain(PairPtr pair, double origin, Direction dir, double tol,
               double bracket_limit)
    : tol_(tol), bracket_limit_(bracket_limit) {
  chain_.pair = std::move(pair);
  chain_.origin = origin;
  chain_.direction = dir;
  chain_.kappa_is_d = true;
}

double DChain::d_at(double t) {
  std::optional<double> warm;
  if (have_last_) warm = last_d_ + std::fabs(t - last_t_);
  DSolveResult r = d_of_x(chain_.pair, t, tol_, bracket_limit_, warm);
  last_d_ = r.d;
  last_t_ = t;
  have_last_ = true;
  return r.d;
}

void DChain::extend_once() {
  const int sgn = chain_.direction == Direction::Rightward ? +1 : -1;
  double edge = chain_.frontier();
  auto phi = [&](double u) { return sgn * (u - edge) - d_at(u); };
  double d_edge = d_at(edge);
  double span = d_edge;
  double probe = edge + sgn * span;
  while (phi(probe) < 0) {
    span *= 2;
    if (!std::isfinite(probe) || span > 1e12)
      throw RootNotBracketed("DChain: segment center not bracketed");
    probe = edge + sgn * span;
  }
  double a = std::min(edge, probe), b = std::max(edge, probe);
  double center =
      illinois_root(phi, a, phi(a), b, phi(b), 1e-9 * std::max(d_edge, 1e-300));
  std::optional<double> warm = last_d_ + std::fabs(center - last_t_);
  DSolveResult dr = d_of_x(chain_.pair, center, tol_, bracket_limit_, warm);
  last_d_ = dr.d;
  last_t_ = center;
  CoveringSegment seg;
  seg.center = center;
  seg.half_width = dr.d;
  if (sgn > 0) {
    seg.lo = edge;
    seg.hi = center + dr.d;
  } else {
    seg.hi = edge;
    seg.lo = center - dr.d;
  }
  seg.mass = 2.0;  // by the defining equation; dr.residual bounds the slack
  seg.mass_err = dr.residual;
  chain_.segments.push_back(seg);
}

const CoveringSegment& DChain::segment(std::size_t i) {
  while (chain_.segments.size() <= i) extend_once();
  return chain_.segments[i];
}

CoveringChain build_d_covering(const PairPtr& pair, double x, Direction dir,
                               std::size_t n_max, double tol) {
  DChain builder(pair, x, dir, tol);
  if (n_max > 0) builder.segment(n_max - 1);
  return builder.chain();
}

CoveringReport verify_covering(const CoveringChain& chain, double tol) {
  CoveringReport rep;
  rep.n_segments = chain.segments.size();
  double accum = 0.0;
  for (std::size_t i = 0; i < chain.segments.size(); ++i) {
    const auto& seg = chain.segments[i];
    QuadratureResult m = integrate_qr(chain.pair, seg.lo, seg.hi, tol);
    if (chain.kappa_is_d)
      rep.max_mass_deviation =
          std::max(rep.max_mass_deviation, std::fabs(m.value - 2.0));
    double required = chain.kappa_is_d ? 2.0 * static_cast<double>(i) : 0.0;
    rep.max_accum_violation =
        std::max(rep.max_accum_violation, required - accum);
    if (i > 0) {
      const auto& prev = chain.segments[i - 1];
      double gap = chain.direction == Direction::Rightward
                       ? std::fabs(seg.lo - prev.hi)
                       : std::fabs(seg.hi - prev.lo);
      rep.max_abutment_gap = std::max(rep.max_abutment_gap, gap);
    }
    accum += m.value;
  }
  rep.max_accum_violation = std::max(rep.max_accum_violation, 0.0);
  return rep;
}

double tail_certificate(const CoveringChain& chain, double nu,
                        const std::vector<double>& per_segment_bound,
                        std::size_t from_segment) {
  if (!(nu > 0)) throw ConfigError("tail_certificate: nu must be > 0");
  if (per_segment_bound.size() > chain.segments.size())
    throw ConfigError("tail_certificate: more bounds than segments");
  if (from_segment < 1) from_segment = 1;
  const double damp = std::exp(-2.0 * nu);
  double total = 0.0;
  double b_max = 0.0;
  double prev_summand = -1.0;
  std::size_t grow_streak = 0;
  std::size_t n_avail = per_segment_bound.size();
  for (std::size_t n = 1; n <= n_avail; ++n) {
    double b = per_segment_bound[n - 1];
    if (b < 0) throw ConfigError("tail_certificate: bounds must be >= 0");
    b_max = std::max(b_max, b);
    double summand = b * std::exp(-2.0 * nu * static_cast<double>(n - 1));
    if (prev_summand >= 0 && summand > prev_summand && summand > 0) {
      if (++grow_streak >= 3)
        throw Unbounded(
            "tail_certificate: per-segment bounds outgrow the geometric "
            "damping");
    } else {
      grow_streak = 0;
    }
    prev_summand = summand;
    if (n >= from_segment) total += summand;
  }
  // geometric closure past the built chain, using the largest observed bound
  std::size_t n_ext = std::max(from_segment, n_avail + 1);
  total += b_max * std::exp(-2.0 * nu * static_cast<double>(n_ext - 1)) /
           (1.0 - damp);
  return total;
}

}  // namespace solvq
