#include "solvq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "solvq/errors.hpp"

namespace solvq {
namespace {

// QUADPACK qk15 nodes/weights on [-1, 1]; nodes 1,3,5,7 carry the
// embedded 7-point Gauss rule.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double lo, hi;
  double value;   // Kronrod estimate
  double err;     // |K15 - G7|
  double resabs;  // Kronrod estimate of int |f|
};

struct PanelOrder {
  bool operator()(const Panel& a, const Panel& b) const { return a.err < b.err; }
};

Panel eval_panel(const Fn& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  double fc = f(c);
  if (!std::isfinite(fc))
    throw NonFinite("integrand not finite at x=" + std::to_string(c));
  double kron = kWk[7] * fc;
  double gauss = kWg[3] * fc;
  double resabs = kWk[7] * std::fabs(fc);
  for (int i = 0; i < 7; ++i) {
    double x1 = c - h * kNodes[i];
    double x2 = c + h * kNodes[i];
    double f1 = f(x1);
    double f2 = f(x2);
    if (!std::isfinite(f1) || !std::isfinite(f2))
      throw NonFinite("integrand not finite near x=" + std::to_string(c));
    kron += kWk[i] * (f1 + f2);
    resabs += kWk[i] * (std::fabs(f1) + std::fabs(f2));
    if (i % 2 == 1) gauss += kWg[i / 2] * (f1 + f2);
  }
  Panel p;
  p.lo = lo;
  p.hi = hi;
  p.value = kron * h;
  p.err = std::fabs((kron - gauss) * h);
  p.resabs = resabs * h;
  return p;
}

bool refinable(const Panel& p) {
  double scale = std::max({1.0, std::fabs(p.lo), std::fabs(p.hi)});
  if ((p.hi - p.lo) <= 64.0 * std::numeric_limits<double>::epsilon() * scale)
    return false;
  // roundoff floor: splitting cannot push the estimate below the noise of
  // the absolute integral on this panel
  return p.err > 100.0 * std::numeric_limits<double>::epsilon() * p.resabs;
}

QuadratureResult finish(std::vector<Panel>& panels, std::size_t evals) {
  std::sort(panels.begin(), panels.end(),
            [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  QuadratureResult r;
  for (const Panel& p : panels) {
    r.value += p.value;
    r.abs_error_estimate += p.err;
  }
  r.subdivisions = evals;
  return r;
}

}  // namespace

QuadratureResult integrate_finite(const Fn& f, double a, double b, double tol,
                                  const std::vector<double>* breakpoints,
                                  const QuadOptions& opt) {
  if (!(a <= b)) throw ConfigError("integrate_finite: requires a <= b");
  if (a == b) return {};

  std::vector<double> seeds;
  seeds.push_back(a);
  if (breakpoints) {
    for (double t : *breakpoints)
      if (t > a && t < b) seeds.push_back(t);
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  }
  seeds.push_back(b);

  std::priority_queue<Panel, std::vector<Panel>, PanelOrder> active;
  std::vector<Panel> done;
  std::size_t evals = 0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < seeds.size(); ++i) {
    if (seeds[i + 1] <= seeds[i]) continue;
    Panel p = eval_panel(f, seeds[i], seeds[i + 1]);
    ++evals;
    total_err += p.err;
    active.push(p);
  }

  while (total_err > tol && !active.empty()) {
    Panel worst = active.top();
    if (worst.err <= 0) break;
    active.pop();
    if (!refinable(worst) || evals + 2 > opt.max_panels) {
      if (evals + 2 > opt.max_panels && refinable(worst)) {
        active.push(worst);
        break;
      }
      done.push_back(worst);
      continue;
    }
    total_err -= worst.err;
    double mid = 0.5 * (worst.lo + worst.hi);
    Panel left = eval_panel(f, worst.lo, mid);
    Panel right = eval_panel(f, mid, worst.hi);
    evals += 2;
    total_err += left.err + right.err;
    active.push(left);
    active.push(right);
  }

  std::vector<Panel> all(std::move(done));
  while (!active.empty()) {
    all.push_back(active.top());
    active.pop();
  }
  QuadratureResult r = finish(all, evals);
  if (r.abs_error_estimate > tol && evals + 2 > opt.max_panels && !opt.accept_best)
    throw MaxSubdivisions("integrate_finite: panel budget exhausted (err=" +
                          std::to_string(r.abs_error_estimate) + ", tol=" +
                          std::to_string(tol) + ")");
  return r;
}

namespace {

// Phase-substitution evaluation of int_a^b amp(t) cos(phase(|t|)) dt for a
// one-signed interval [s0, s1] (s-coordinates, s = |t|). With u = phase(s)
// and A(u) = amp/phase', integration by parts gives
//   int = [A sin u] - int A'(u) sin u du,   |remainder| <= |A(u1) - A(u0)|
// since A is monotone for hint-equipped families. The sign of the original
// t-interval does not matter: the integrand is even.
struct OscPiece {
  double value = 0.0;
  double bound = 0.0;  // certified remainder
};

// Above this, sin(phase) loses enough digits that we bound |A sin| instead
// of evaluating it.
constexpr double kPhaseReliable = 1e14;

OscPiece osc_by_parts(const OscillationHint& h, double s0, double s1,
                      bool keep_endpoint_term) {
  OscPiece out;
  if (s1 <= s0) return out;
  const double u0 = h.phase(s0), u1 = h.phase(s1);
  const double a0 = h.amp_ratio(s0), a1 = h.amp_ratio(s1);
  out.bound = std::fabs(a1 - a0);
  if (!keep_endpoint_term) {
    out.bound += std::fabs(a0) + std::fabs(a1);
    return out;
  }
  if (u0 < kPhaseReliable)
    out.value -= a0 * std::sin(u0);
  else
    out.bound += std::fabs(a0);
  if (u1 < kPhaseReliable)
    out.value += a1 * std::sin(u1);
  else
    out.bound += std::fabs(a1);
  // residual phase roundoff: |d sin| <= |u| * eps
  if (u0 < kPhaseReliable)
    out.bound += std::fabs(a0) * u0 * std::numeric_limits<double>::epsilon();
  if (u1 < kPhaseReliable)
    out.bound += std::fabs(a1) * u1 * std::numeric_limits<double>::epsilon();
  return out;
}

OscPiece osc_by_parts_interval(const OscillationHint& h, double a, double b,
                               bool keep_endpoint_term) {
  OscPiece out;
  if (a >= 0) return osc_by_parts(h, a, b, keep_endpoint_term);
  if (b <= 0) return osc_by_parts(h, -b, -a, keep_endpoint_term);
  OscPiece l = osc_by_parts(h, 0.0, -a, keep_endpoint_term);
  OscPiece r = osc_by_parts(h, 0.0, b, keep_endpoint_term);
  out.value = l.value + r.value;
  out.bound = l.bound + r.bound;
  return out;
}

// Relative roundoff in exp(gamma t) turns into absolute phase noise
// ~ phase * eps, which the cosine magnifies into integrand noise of size
// amp * phase * eps. No refinement can certify below that.
double osc_noise_floor(const OscillationHint& h, double a, double b) {
  double s = std::max(std::fabs(a), std::fabs(b));
  return 8.0 * std::numeric_limits<double>::epsilon() * h.amp(s) * h.phase(s) *
         (b - a);
}

QuadratureResult qr_interval(const PairPtr& pair, double a, double b, double tol,
                             const QuadOptions& opt, bool keep_endpoint_term) {
  if (!(a <= b)) throw ConfigError("integrate_qr: requires a <= b");
  if (a == b) return {};
  Fn qr = [pair](double t) { return pair->q_over_r(t); };
  const OscillationHint* h = pair->oscillation_hint.get();
  if (!h) {
    QuadOptions plain_opt = opt;
    plain_opt.accept_best = true;
    return integrate_finite(qr, a, b, tol, nullptr, plain_opt);
  }
  double count = h->count_in(a, b);
  if (count <= static_cast<double>(opt.osc_budget)) {
    std::vector<double> bps = h->breakpoints_in(a, b, opt.osc_budget + 1);
    QuadOptions brute_opt = opt;
    brute_opt.accept_best = true;
    double tol_eff = std::max(tol, osc_noise_floor(*h, a, b));
    return integrate_finite(qr, a, b, tol_eff, &bps, brute_opt);
  }
  QuadOptions base_opt = opt;
  base_opt.accept_best = true;
  QuadratureResult base = integrate_finite(h->base, a, b, tol, nullptr, base_opt);
  OscPiece osc = osc_by_parts_interval(*h, a, b, keep_endpoint_term);
  QuadratureResult r;
  r.value = base.value + osc.value;
  r.abs_error_estimate = base.abs_error_estimate + osc.bound;
  r.subdivisions = base.subdivisions;
  return r;
}

}  // namespace

QuadratureResult integrate_qr(const PairPtr& pair, double a, double b,
                              double tol, const QuadOptions& opt) {
  return qr_interval(pair, a, b, tol, opt, /*keep_endpoint_term=*/true);
}

QuadratureResult integrate_osc_part(const PairPtr& pair, double a, double b,
                                    double tol, const QuadOptions& opt) {
  const OscillationHint* h = pair->oscillation_hint.get();
  if (!h)
    throw ConfigError("integrate_osc_part: pair has no oscillation hint");
  if (!(a <= b)) throw ConfigError("integrate_osc_part: requires a <= b");
  if (a == b) return {};
  double count = h->count_in(a, b);
  if (count <= static_cast<double>(opt.osc_budget)) {
    Fn osc = [h](double t) {
      return h->amp(t) * std::cos(h->phase(std::fabs(t)));
    };
    std::vector<double> bps = h->breakpoints_in(a, b, opt.osc_budget + 1);
    QuadOptions brute_opt = opt;
    brute_opt.accept_best = true;
    double tol_eff = std::max(tol, osc_noise_floor(*h, a, b));
    return integrate_finite(osc, a, b, tol_eff, &bps, brute_opt);
  }
  OscPiece p = osc_by_parts_interval(*h, a, b, /*keep_endpoint_term=*/true);
  QuadratureResult r;
  r.value = p.value;
  r.abs_error_estimate = p.bound;
  return r;
}

QuadratureResult integrate_qr_window(const PairPtr& pair, double x, double d,
                                     double tol, const QuadOptions& opt) {
  if (d < 0) throw ConfigError("integrate_qr_window: d must be >= 0");
  return integrate_qr(pair, x - d, x + d, tol, opt);
}

MassAccumulator::MassAccumulator(PairPtr pair, double anchor, double gap_tol,
                                 QuadOptions opt)
    : pair_(std::move(pair)), anchor_(anchor), gap_tol_(gap_tol), opt_(opt) {
  cache_.emplace(anchor_, 0.0);
}

double MassAccumulator::mass(double t) {
  auto it = cache_.lower_bound(t);
  if (it != cache_.end() && it->first == t) return it->second;
  // nearest cached neighbor
  double t0, m0;
  if (it == cache_.begin()) {
    t0 = it->first;
    m0 = it->second;
  } else if (it == cache_.end()) {
    auto prev = std::prev(it);
    t0 = prev->first;
    m0 = prev->second;
  } else {
    auto prev = std::prev(it);
    if (t - prev->first <= it->first - t) {
      t0 = prev->first;
      m0 = prev->second;
    } else {
      t0 = it->first;
      m0 = it->second;
    }
  }
  double lo = std::min(t0, t), hi = std::max(t0, t);
  // Smooth-part-only gaps where the cosine factor is too dense; the
  // dropped mass is reported through osc_drop_bound, never silently.
  QuadratureResult gap =
      qr_interval(pair_, lo, hi, gap_tol_, opt_, /*keep_endpoint_term=*/false);
  double m = (t >= t0) ? m0 + gap.value : m0 - gap.value;
  err_ += gap.abs_error_estimate;
  cache_.emplace(t, m);
  return m;
}

double MassAccumulator::osc_drop_bound(double t0, double t1) const {
  const OscillationHint* h = pair_->oscillation_hint.get();
  if (!h) return 0.0;
  double a = std::min(t0, t1), b = std::max(t0, t1);
  if (h->count_in(a, b) <= static_cast<double>(opt_.osc_budget)) return 0.0;
  OscPiece p = osc_by_parts_interval(*h, a, b, /*keep_endpoint_term=*/false);
  return p.bound;
}

}  // namespace solvq
