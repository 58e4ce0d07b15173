#include "solvq/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "solvq/errors.hpp"
#include "solvq/quadrature.hpp"

namespace solvq {

const char* to_string(Finiteness f) {
  switch (f) {
    case Finiteness::FiniteStable: return "FiniteStable";
    case Finiteness::GrowingUnbounded: return "GrowingUnbounded";
    case Finiteness::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(LimitKind k) {
  switch (k) {
    case LimitKind::Zero: return "Zero";
    case LimitKind::Infinity: return "Infinity";
    case LimitKind::NonzeroFinite: return "NonzeroFinite";
    case LimitKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(Trend t) {
  switch (t) {
    case Trend::Stabilized: return "Stabilized";
    case Trend::Vanishing: return "Vanishing";
    case Trend::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(SideVerdict v) {
  switch (v) {
    case SideVerdict::Diverging: return "Diverging";
    case SideVerdict::Converging: return "Converging";
    case SideVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

GridPolicy GridPolicy::for_pair(const PairPtr& pair) {
  GridPolicy p;
  if (pair->oscillation_hint) p.x_max = 16;
  return p;
}

namespace {

constexpr std::size_t kPiecePanelCap = 8192;

// Integrates w(t) exp(-nu * m(t)) over [a, b] where m is the accumulated
// mass from the evaluation origin (nonnegative on the integration side).
// On oscillation-hinted pairs the kernel carries an unavoidable wiggle of
// relative size ~ nu * amp/phase'; the tolerance is floored there so the
// adaptive loop does not chase what the certificate already bounds.
QuadratureResult kernel_piece(const PairPtr& pair, MassAccumulator& acc,
                              const Fn& w, double nu, double a, double b,
                              double tol) {
  Fn kernel = [&](double t) {
    double m = std::fabs(acc.mass(t));
    return w(t) * std::exp(-nu * m);
  };
  std::vector<double> bps;
  const OscillationHint* h = pair->oscillation_hint.get();
  QuadOptions opt;
  opt.max_panels = kPiecePanelCap;
  opt.accept_best = true;
  if (h && h->count_in(a, b) <= 512.0) bps = h->breakpoints_in(a, b, 513);

  double tol_eff = tol;
  double osc_floor = 0.0;
  if (h) {
    osc_floor =
        nu * (h->amp_ratio(std::fabs(a)) + h->amp_ratio(std::fabs(b)));
    QuadOptions coarse = opt;
    coarse.max_panels = 16;
    double rough =
        std::fabs(integrate_finite(kernel, a, b, 1e300, nullptr, coarse).value);
    tol_eff = std::max(tol, 0.5 * osc_floor * rough);
  }
  QuadratureResult r =
      integrate_finite(kernel, a, b, tol_eff, bps.empty() ? nullptr : &bps, opt);
  r.abs_error_estimate += osc_floor * std::fabs(r.value);
  return r;
}

// Partial-integral growth probe for sides with no covering: doubling spans
// until either the increments stall (heuristic convergence) or keep growing
// (divergence evidence).
FunctionalValue divergence_probe(const PairPtr& pair, double x, Direction side,
                                 double nu, const Fn& w, double tol) {
  const int sgn = side == Direction::Rightward ? +1 : -1;
  MassAccumulator acc(pair, x, std::min(tol, 1e-10));
  FunctionalValue out;
  out.certified = false;
  double total = 0.0, prev_total = 0.0, prev_prev = 0.0;
  double from = x;
  for (int k = 0; k <= 14; ++k) {
    double L = std::pow(2.0, k);
    double to = x + sgn * L;
    double a = std::min(from, to), b = std::max(from, to);
    QuadratureResult piece = kernel_piece(pair, acc, w, nu, a, b, tol);
    prev_prev = prev_total;
    prev_total = total;
    total += piece.value;
    out.err += piece.abs_error_estimate;
    from = to;
    if (k >= 4 && prev_prev > 0 && total >= 2.5 * prev_prev) {
      out.value = total;  // a growing lower bound
      out.diverging = true;
      return out;
    }
    if (k >= 2) {
      double g1 = total - prev_total;
      if (g1 <= 0.01 * std::max(std::fabs(total), 1e-300)) {
        out.value = total;
        out.err += std::max(g1, 0.0) + 0.05 * std::fabs(total);
        return out;
      }
    }
  }
  out.value = total;
  out.diverging = prev_prev > 0 && total >= 2.5 * prev_prev;
  out.err += 0.5 * std::fabs(total);
  return out;
}

}  // namespace

FunctionalValue exp_kernel_integral(const PairPtr& pair, double x,
                                    Direction side, double nu, const Fn& w,
                                    double tol) {
  if (!(nu > 0)) throw ConfigError("exp_kernel_integral: nu must be > 0");
  const double damp = std::exp(-2.0 * nu);
  const double tol_tail = 0.5 * tol;

  DChain chain(pair, x, side, std::min(1e-10, tol));
  MassAccumulator acc(pair, x, std::min(tol * 1e-2, 1e-11));
  FunctionalValue out;

  double b_max = 0.0;
  const std::size_t n_cap = std::max<std::size_t>(
      128, static_cast<std::size_t>(std::ceil(40.0 / nu)) + 8);
  for (std::size_t n = 1;; ++n) {
    const CoveringSegment* seg;
    try {
      seg = &chain.segment(n - 1);
    } catch (const BracketExhausted&) {
      // No covering on this side: fall back to the growth probe.
      return divergence_probe(pair, x, side, nu, w, tol);
    }
    double a = std::min(seg->lo, seg->hi), b = std::max(seg->lo, seg->hi);
    QuadratureResult piece = kernel_piece(
        pair, acc, w, nu, a, b,
        std::max(tol * 0.25 * std::pow(damp, static_cast<double>(n - 1)) *
                     (1.0 - damp),
                 1e-16));
    out.value += piece.value;
    out.err += piece.abs_error_estimate;

    QuadOptions wopt;
    wopt.accept_best = true;
    wopt.max_panels = kPiecePanelCap;
    Fn w_abs = [&w](double t) { return std::fabs(w(t)); };
    double wmass =
        integrate_finite(w_abs, a, b, std::max(1e-3 * tol, 1e-14), nullptr, wopt)
            .value;
    b_max = std::max(b_max, wmass);

    double summand = wmass * std::pow(damp, static_cast<double>(n - 1));
    double remaining =
        b_max * std::pow(damp, static_cast<double>(n)) / (1.0 - damp);
    // extrapolating the largest observed weight mass is only meaningful
    // after a few segments; weights like compactly-supported forcings can
    // be zero on the first ones
    if (remaining <= tol_tail && n >= 8) {
      out.err += remaining + nu * acc.error() * std::fabs(out.value);
      return out;
    }
    if (n >= n_cap) {
      // certificate is not closing; check whether the summands at least decay
      if (summand > tol_tail * 1e3)
        throw TailNotDecaying(
            "exp_kernel_integral: certificate not reached within " +
            std::to_string(n_cap) + " segments");
      out.err += remaining + nu * acc.error() * std::fabs(out.value);
      out.certified = false;
      return out;
    }
  }
}

FunctionalValue M_p_at(const PairPtr& pair, double p, double x, double tol) {
  if (!(p > 1) || !std::isfinite(p))
    throw ConfigError("M_p_at: requires 1 < p < inf");
  const double pp = p / (p - 1.0);
  Fn one = [](double) { return 1.0; };
  Fn wr = [pair, pp](double t) { return std::pow(pair->r(t), -pp); };
  FunctionalValue left = exp_kernel_integral(pair, x, Direction::Leftward, p,
                                             one, 0.5 * tol);
  FunctionalValue right = exp_kernel_integral(pair, x, Direction::Rightward,
                                              pp, wr, 0.5 * tol);
  FunctionalValue out;
  out.diverging = left.diverging || right.diverging;
  out.certified = left.certified && right.certified;
  out.value = std::pow(std::max(left.value, 0.0), 1.0 / p) *
              std::pow(std::max(right.value, 0.0), 1.0 / pp);
  if (left.value > 0 && right.value > 0)
    out.err = out.value * (left.err / (p * left.value) +
                           right.err / (pp * right.value));
  else
    out.err = std::max(left.err, right.err);
  return out;
}

FunctionalValue A_pprime_at(const PairPtr& pair, double p, double x, double d_x,
                            double tol) {
  if (!(p > 1) || !std::isfinite(p))
    throw ConfigError("A_pprime_at: requires 1 < p < inf");
  const double pp = p / (p - 1.0);
  Fn wr = [pair, pp](double t) { return std::pow(pair->r(t), -pp); };
  std::vector<double> bps{0.0};
  QuadratureResult r = integrate_finite(wr, x - d_x, x + d_x, tol, &bps);
  return {r.value, r.abs_error_estimate, false, true};
}

FunctionalValue M_1_at(const PairPtr& pair, double x, double tol) {
  Fn one = [](double) { return 1.0; };
  FunctionalValue left =
      exp_kernel_integral(pair, x, Direction::Leftward, 1.0, one, tol);
  double rx = pair->r(x);
  left.value /= rx;
  left.err /= rx;
  return left;
}

FunctionalValue A_at(const PairPtr& pair, double x, double tol) {
  Fn inv_r = [pair](double t) { return 1.0 / pair->r(t); };
  return exp_kernel_integral(pair, x, Direction::Rightward, 1.0, inv_r, tol);
}

FunctionalValue A_tilde_at(const PairPtr& pair, double x, double d_x,
                           double tol) {
  Fn inv_r = [pair](double t) { return 1.0 / pair->r(t); };
  std::vector<double> bps{0.0};
  QuadratureResult r = integrate_finite(inv_r, x - d_x, x + d_x, tol, &bps);
  return {r.value, r.abs_error_estimate, false, true};
}

FunctionalValue I_p_at(const PairPtr& pair, double p, double x, double tol) {
  if (!(p >= 1)) throw ConfigError("I_p_at: requires p >= 1");
  Fn one = [](double) { return 1.0; };
  return exp_kernel_integral(pair, x, Direction::Leftward, p, one, tol);
}

FunctionalValue J_nu_at(const PairPtr& pair, double nu, double pprime, double x,
                        double tol) {
  Fn wr = [pair, pprime](double t) { return std::pow(pair->r(t), -pprime); };
  return exp_kernel_integral(pair, x, Direction::Rightward, nu, wr, tol);
}

FunctionalValue K_p_at(const PairPtr& pair, double pprime, double x, double tol) {
  return J_nu_at(pair, pprime, pprime, x, tol);
}

namespace {

// One-sided improper integral of a nonnegative weight by doubling
// increments; certifies the tail once three consecutive increment ratios
// stay below 0.6.
double truncated_weight_integral(const Fn& g, double from, int sgn, double tol) {
  double total = 0.0;
  double prev_inc = -1.0;
  int decay_streak = 0, zero_streak = 0;
  double edge = from;
  for (int k = 0; k <= 60; ++k) {
    double L = std::pow(2.0, k);
    double to = from + sgn * L;
    double a = std::min(edge, to), b = std::max(edge, to);
    QuadOptions opt;
    opt.accept_best = true;
    double inc = integrate_finite(g, a, b, std::min(tol, 1e-12), nullptr, opt).value;
    if (inc < 0) throw ConfigError("hardy_H: weights must be nonnegative");
    total += inc;
    edge = to;
    if (inc == 0.0) {
      if (++zero_streak >= 5 && total > 0) return total;
      continue;
    }
    zero_streak = 0;
    if (prev_inc >= 0) {
      double ratio = prev_inc > 0 ? inc / prev_inc : 1.0;
      if (ratio <= 0.6) {
        if (++decay_streak >= 3) {
          double tail = inc * 0.6 / 0.4;
          if (tail <= std::max(tol, 1e-12 * total)) return total;
        }
      } else {
        decay_streak = 0;
      }
    }
    prev_inc = inc;
  }
  throw TailNotDecaying("hardy_H: improper piece did not certify decay");
}

}  // namespace

double hardy_H(const Fn& w, const Fn& v, double p, double x, double tol) {
  if (!(p > 1) || !std::isfinite(p))
    throw ConfigError("hardy_H: requires 1 < p < inf");
  const double pp = p / (p - 1.0);
  Fn v_weight = [v, pp, p](double t) { return std::pow(v(t), -pp / p); };
  double left = truncated_weight_integral(w, x, -1, tol);
  double right = truncated_weight_integral(v_weight, x, +1, tol);
  return std::pow(left, 1.0 / p) * std::pow(right, 1.0 / pp);
}

namespace {

struct ScanGrid {
  std::vector<double> xs;          // |x|-ascending, signs interleaved
  std::vector<std::size_t> level_of;
  std::size_t n_levels = 0;
};

ScanGrid make_scan_grid(const GridPolicy& policy) {
  ScanGrid g;
  const int s = std::max(2, policy.samples_per_level);
  std::size_t K = 0;
  while (std::pow(2.0, static_cast<double>(K)) < policy.x_max) ++K;
  g.n_levels = K + 1;
  auto push = [&](double x, std::size_t lvl) {
    g.xs.push_back(x);
    g.level_of.push_back(lvl);
  };
  push(0.0, 0);
  for (int i = 1; i <= s; ++i) {
    double x = static_cast<double>(i) / s;
    push(x, 0);
    push(-x, 0);
  }
  for (std::size_t k = 1; k <= K; ++k) {
    double lo = std::pow(2.0, static_cast<double>(k - 1));
    double hi = std::min(std::pow(2.0, static_cast<double>(k)), policy.x_max);
    for (int i = 1; i <= s; ++i) {
      double x = lo * std::pow(hi / lo, static_cast<double>(i) / s);
      push(x, k);
      push(-x, k);
    }
  }
  return g;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

InfimaTriplet infima_triplet(const PairPtr& pair, double p,
                             const GridPolicy& policy) {
  const double pp = p / (p - 1.0);
  ScanGrid g = make_scan_grid(policy);
  // candidate minimizers of q: odd-pi phase points of the cosine factor
  std::vector<double> xs(g.xs);
  std::vector<std::size_t> lvl(g.level_of);
  if (const OscillationHint* h = pair->oscillation_hint.get()) {
    for (std::size_t k = 0; k + 1 < g.n_levels + 1; ++k) {
      double lo = k == 0 ? 0.25 : std::pow(2.0, static_cast<double>(k - 1));
      double hi = std::min(std::pow(2.0, static_cast<double>(k)), policy.x_max);
      if (lo >= hi) continue;
      double u_lo = h->phase(lo), u_hi = h->phase(hi);
      double j0 = std::ceil((u_lo / M_PI - 1.0) / 2.0);
      double j1 = std::floor((u_hi / M_PI - 1.0) / 2.0);
      int added = 0;
      for (double j = std::max(j0, 0.0); j <= j1 && added < 4; ++j, ++added) {
        double s = h->phase_inv((2.0 * j + 1.0) * M_PI);
        xs.push_back(s);
        lvl.push_back(k);
        xs.push_back(-s);
        lvl.push_back(k);
      }
    }
  }

  auto scan_min = [&](const Fn& f) {
    WindowInfimum out;
    out.value = std::numeric_limits<double>::infinity();
    std::vector<double> level_min(g.n_levels,
                                  std::numeric_limits<double>::infinity());
    std::vector<double> values;
    values.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double v = f(xs[i]);
      values.push_back(v);
      if (v < out.value) {
        out.value = v;
        out.at_x = xs[i];
      }
      level_min[std::min(lvl[i], g.n_levels - 1)] =
          std::min(level_min[std::min(lvl[i], g.n_levels - 1)], v);
    }
    std::vector<double> filled;
    for (double m : level_min)
      if (std::isfinite(m)) filled.push_back(m);
    double med = median_of(values);
    out.trend = [&] {
      double conf = 0;
      Trend t = Trend::Inconclusive;
      if (filled.size() >= 3) {
        // reuse of the B(a) trend logic, inlined to avoid a dependency loop
        double overall = *std::min_element(filled.begin(), filled.end());
        double overall_ex_last =
            *std::min_element(filled.begin(), filled.end() - 1);
        std::size_t k = filled.size();
        if (med > 0 && overall <= 1e-6 * med) {
          conf = 0.9;
          t = Trend::Vanishing;
        } else if (filled[k - 1] < 0.7 * filled[k - 2] &&
                   filled[k - 2] < 0.7 * filled[k - 3]) {
          conf = 0.8;
          t = Trend::Vanishing;
        } else if (overall > 0 && filled[k - 1] >= 0.9 * overall_ex_last) {
          conf = 0.8;
          t = Trend::Stabilized;
        }
      }
      out.confidence = conf;
      return t;
    }();
    return out;
  };

  InfimaTriplet out;
  out.r0 = scan_min([&](double t) { return pair->r(t); });
  out.q0 = scan_min([&](double t) { return pair->q(t); });
  out.sigma = scan_min([&](double t) {
    return std::pow(pair->r(t), 1.0 / p) * std::pow(pair->q(t), 1.0 / pp);
  });
  return out;
}

CoefficientLimits coefficient_limits(const PairPtr& pair,
                                     const GridPolicy& policy) {
  ScanGrid g = make_scan_grid(policy);
  std::vector<double> max_l(g.n_levels, 0.0), max_r(g.n_levels, 0.0);
  std::vector<double> min_l(g.n_levels, std::numeric_limits<double>::infinity());
  std::vector<double> min_r(g.n_levels, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < g.xs.size(); ++i) {
    double q = pair->q(g.xs[i]);
    auto& mx = g.xs[i] < 0 ? max_l : max_r;
    auto& mn = g.xs[i] < 0 ? min_l : min_r;
    std::size_t k = g.level_of[i];
    mx[k] = std::max(mx[k], q);
    mn[k] = std::min(mn[k], q);
  }
  auto side_zero = [&](const std::vector<double>& mx) {
    std::size_t k = mx.size();
    if (k < 3) return false;
    return mx[k - 1] <= 1e-8 && mx[k - 1] <= mx[k - 2] && mx[k - 2] <= mx[k - 3];
  };
  auto side_infinity = [&](const std::vector<double>& mn) {
    std::size_t k = mn.size();
    if (k < 4) return false;
    return mn[k - 1] > mn[k - 2] && mn[k - 2] > mn[k - 3] &&
           mn[k - 3] > mn[k - 4] && mn[k - 1] >= 50.0;
  };
  CoefficientLimits out;
  if (side_zero(max_l)) out.q_left = LimitKind::Zero;
  if (side_zero(max_r)) out.q_right = LimitKind::Zero;
  out.q_to_infinity = side_infinity(min_l) && side_infinity(min_r);
  if (out.q_to_infinity) {
    out.q_left = LimitKind::Infinity;
    out.q_right = LimitKind::Infinity;
  }
  return out;
}

CriterionReport sup_scan(const FunctionalSpec& spec, const PairPtr& pair,
                         const GridPolicy& policy) {
  CriterionReport rep;
  switch (spec.kind) {
    case Functional::Mp: rep.name = "Mp"; break;
    case Functional::Apprime: rep.name = "Apprime"; break;
    case Functional::M1: rep.name = "M1"; break;
    case Functional::A: rep.name = "A"; break;
    case Functional::Atilde: rep.name = "Atilde"; break;
    case Functional::Ip: rep.name = "Ip"; break;
    case Functional::Jnu: rep.name = "Jnu"; break;
    case Functional::Kp: rep.name = "Kp"; break;
  }
  rep.p = spec.p;
  const double pp = spec.p > 1 ? spec.p / (spec.p - 1.0) : 0.0;
  const bool needs_d = spec.kind == Functional::Apprime ||
                       spec.kind == Functional::Atilde;

  ScanGrid g = make_scan_grid(policy);
  // evaluate in |x|-ascending order (already built that way)
  rep.grid = g.xs;
  rep.values.assign(g.xs.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<char> divergent(g.xs.size(), 0);

  std::optional<double> warm_d;
  double warm_x = 0;
  for (std::size_t i = 0; i < g.xs.size(); ++i) {
    double x = g.xs[i];
    try {
      FunctionalValue v;
      if (needs_d) {
        std::optional<double> guess;
        if (warm_d) guess = *warm_d + std::fabs(x - warm_x);
        DSolveResult dr = d_of_x(pair, x, policy.tol_criteria, 1e6, guess);
        warm_d = dr.d;
        warm_x = x;
        v = spec.kind == Functional::Apprime
                ? A_pprime_at(pair, spec.p, x, dr.d, policy.tol_criteria)
                : A_tilde_at(pair, x, dr.d, policy.tol_criteria);
      } else {
        switch (spec.kind) {
          case Functional::Mp:
            v = M_p_at(pair, spec.p, x, policy.tol_criteria);
            break;
          case Functional::M1:
            v = M_1_at(pair, x, policy.tol_criteria);
            break;
          case Functional::A:
            v = A_at(pair, x, policy.tol_criteria);
            break;
          case Functional::Ip:
            v = I_p_at(pair, spec.p, x, policy.tol_criteria);
            break;
          case Functional::Jnu:
            v = J_nu_at(pair, spec.nu, pp, x, policy.tol_criteria);
            break;
          case Functional::Kp:
            v = K_p_at(pair, pp, x, policy.tol_criteria);
            break;
          default:
            break;
        }
      }
      rep.values[i] = v.value;
      divergent[i] = v.diverging ? 1 : 0;
      if (v.diverging) rep.has_divergent_points = true;
    } catch (const Error& e) {
      ++rep.n_failures;
      if (rep.notes.size() < 8)
        rep.notes.push_back("x=" + std::to_string(x) + ": " + e.what());
    }
  }

  // running sup and per-level sups
  rep.running_sup.assign(rep.values.size(),
                         std::numeric_limits<double>::quiet_NaN());
  std::vector<double> level_sup(g.n_levels, 0.0);
  double sup = 0.0;
  for (std::size_t i = 0; i < rep.values.size(); ++i) {
    if (std::isfinite(rep.values[i])) sup = std::max(sup, rep.values[i]);
    rep.running_sup[i] = sup;
    level_sup[g.level_of[i]] = sup;
  }
  rep.sup_value = sup;

  // stabilization over the last two octaves
  std::size_t K = g.n_levels - 1;
  double rel_change = 0.0;
  if (K >= 2 && level_sup[K] > 0)
    rel_change = (level_sup[K] - level_sup[K - 2]) / level_sup[K];

  // monotone growth inside the outermost octave, per side
  auto side_growth = [&](bool right) {
    std::vector<double> outer;
    for (std::size_t i = 0; i < rep.values.size(); ++i)
      if (g.level_of[i] == K && (g.xs[i] >= 0) == right &&
          std::isfinite(rep.values[i]))
        outer.push_back(rep.values[i]);
    if (outer.size() < 4) return false;
    std::vector<double> first(outer.begin(), outer.begin() + outer.size() / 2);
    std::vector<double> second(outer.begin() + outer.size() / 2, outer.end());
    return median_of(second) > 1.05 * median_of(first);
  };
  bool outer_growth = side_growth(true) || side_growth(false);

  bool strong_growth =
      K >= 2 && level_sup[K - 1] > 0 && level_sup[K - 2] > 0 &&
      level_sup[K] >= 1.5 * level_sup[K - 1] &&
      level_sup[K - 1] >= 1.5 * level_sup[K - 2];

  if (rep.has_divergent_points || strong_growth) {
    rep.finiteness = Finiteness::GrowingUnbounded;
    rep.confidence = rep.has_divergent_points ? 0.9 : 0.75;
  } else if (rep.n_failures == 0 && rel_change < policy.stabilization_rel &&
             !outer_growth) {
    rep.finiteness = Finiteness::FiniteStable;
    rep.confidence =
        std::clamp(1.0 - rel_change / policy.stabilization_rel, 0.0, 1.0);
  } else {
    rep.finiteness = Finiteness::Inconclusive;
    rep.confidence = 0.3;
  }

  // limit at infinity: side medians over the last two octaves
  auto side_median = [&](bool right, std::size_t lvl) {
    std::vector<double> vals;
    for (std::size_t i = 0; i < rep.values.size(); ++i)
      if (g.level_of[i] == lvl && (g.xs[i] > 0) == right &&
          std::isfinite(rep.values[i]))
        vals.push_back(std::fabs(rep.values[i]));
    return median_of(vals);
  };
  if (K >= 2) {
    double m_l1 = side_median(false, K), m_r1 = side_median(true, K);
    double m_l2 = side_median(false, K - 1), m_r2 = side_median(true, K - 1);
    double hi_med = std::max(m_l1, m_r1);
    double lo_med = std::min(m_l1, m_r1);
    if (std::isfinite(hi_med) && std::isfinite(lo_med)) {
      if (hi_med <= policy.zero_threshold)
        rep.limit_at_infinity = LimitKind::Zero;
      else if (lo_med >= policy.inf_threshold)
        rep.limit_at_infinity = LimitKind::Infinity;
      else {
        bool stable = std::fabs(m_l1 - m_l2) <= 0.05 * std::max(m_l1, 1e-300) &&
                      std::fabs(m_r1 - m_r2) <= 0.05 * std::max(m_r1, 1e-300);
        rep.limit_at_infinity =
            stable ? LimitKind::NonzeroFinite : LimitKind::Inconclusive;
      }
    } else {
      rep.limit_at_infinity = LimitKind::Inconclusive;
    }
  }
  return rep;
}

}  // namespace solvq
