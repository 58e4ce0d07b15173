#include "solvq/green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "solvq/errors.hpp"
#include "solvq/quadrature.hpp"

namespace solvq {

GreenApply apply_G(const PairPtr& pair, const Fn& f, double x, double tol) {
  Fn w = [pair, f](double t) { return f(t) / pair->r(t); };
  FunctionalValue v =
      exp_kernel_integral(pair, x, Direction::Rightward, 1.0, w, tol);
  if (v.diverging)
    throw TailNotDecaying("apply_G: rightward tail not certified and partial "
                          "integrals keep growing");
  return {v.value, v.err};
}

struct GreenSolver::Impl {
  PairPtr pair;
  double tol;
  DChain chain;
  // f-independent caches, one entry per segment
  std::vector<std::shared_ptr<MassAccumulator>> accs;
  std::vector<double> seg_mass;  // accumulator mass across the segment

  Impl(PairPtr p, double x_min, double tol_)
      : pair(std::move(p)),
        tol(tol_),
        chain(pair, x_min, Direction::Rightward, std::min(tol_ * 1e-2, 1e-10)) {}

  const CoveringSegment& seg(std::size_t i) {
    const CoveringSegment& s = chain.segment(i);
    while (accs.size() <= i) {
      std::size_t j = accs.size();
      const CoveringSegment& sj = chain.segment(j);
      auto acc = std::make_shared<MassAccumulator>(pair, sj.lo,
                                                   std::min(tol * 1e-2, 1e-11));
      accs.push_back(acc);
      seg_mass.push_back(acc->mass(sj.hi));
    }
    return s;
  }

  std::size_t containing(double x) {
    if (x < chain.chain().origin - 1e-12)
      throw ConfigError("GreenSolver: x below the chain origin");
    std::size_t i = 0;
    for (;; ++i) {
      const CoveringSegment& s = seg(i);
      if (x <= s.hi || std::fabs(x - s.hi) < 1e-14) return i;
    }
  }
};

GreenSolver::GreenSolver(PairPtr pair, double x_min, double tol)
    : impl_(std::make_shared<Impl>(std::move(pair), x_min, tol)) {}

namespace {

QuadratureResult segment_piece(const PairPtr& pair, MassAccumulator& acc,
                               const Fn& f, double base_mass, double a,
                               double b, double tol,
                               const std::vector<double>* bps) {
  // integrand (f/r) exp(-(m(t) - base_mass)) with m anchored at the segment
  Fn kernel = [&](double t) {
    return f(t) / pair->r(t) * std::exp(-(acc.mass(t) - base_mass));
  };
  QuadOptions opt;
  opt.accept_best = true;
  opt.max_panels = 4096;
  return integrate_finite(kernel, a, b, tol, bps, opt);
}

}  // namespace

SolutionCurve GreenSolver::solve(const Fn& f, const std::vector<double>& xs,
                                 const std::string& f_desc,
                                 const std::vector<double>& f_breakpoints) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw ConfigError("GreenSolver::solve: xs must be strictly increasing");
  Impl& im = *impl_;
  SolutionCurve curve;
  curve.xs = xs;
  curve.f_desc = f_desc;
  curve.ys.resize(xs.size());
  curve.per_point_error.resize(xs.size());

  // f-dependent per-segment caches, grown on demand
  std::vector<double> S, S_err, W;
  auto ensure_seg_cache = [&](std::size_t m) {
    while (S.size() <= m) {
      std::size_t j = S.size();
      const CoveringSegment& s = im.seg(j);
      std::vector<double> bps;
      for (double b : f_breakpoints)
        if (b > s.lo && b < s.hi) bps.push_back(b);
      QuadratureResult r =
          segment_piece(im.pair, *im.accs[j], f, 0.0, s.lo, s.hi,
                        im.tol * 0.25, bps.empty() ? nullptr : &bps);
      S.push_back(r.value);
      S_err.push_back(r.abs_error_estimate);
      Fn wabs = [&](double t) { return std::fabs(f(t)) / im.pair->r(t); };
      QuadOptions wo;
      wo.accept_best = true;
      W.push_back(
          integrate_finite(wabs, s.lo, s.hi, 1e-12, bps.empty() ? nullptr : &bps, wo)
              .value);
    }
  };

  const double damp = std::exp(-2.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double x = xs[i];
    std::size_t j = im.containing(x);
    const CoveringSegment& sj = im.seg(j);
    double mj_x = im.accs[j]->mass(x);

    std::vector<double> bps;
    for (double b : f_breakpoints)
      if (b > x && b < sj.hi) bps.push_back(b);
    QuadratureResult head =
        segment_piece(im.pair, *im.accs[j], f, mj_x, x, sj.hi, im.tol * 0.25,
                      bps.empty() ? nullptr : &bps);
    double y = head.value;
    double err = head.abs_error_estimate;

    double offset = im.seg_mass[j] - mj_x;  // mass from x to the segment end
    double w_max = 0.0;
    double support_end =
        f_breakpoints.empty()
            ? -std::numeric_limits<double>::infinity()
            : *std::max_element(f_breakpoints.begin(), f_breakpoints.end());
    for (std::size_t m = j + 1;; ++m) {
      ensure_seg_cache(m);
      double damp_m = std::exp(-offset);
      y += damp_m * S[m];
      err += damp_m * S_err[m];
      w_max = std::max(w_max, W[m]);
      offset += im.seg_mass[m];
      double remaining = std::exp(-offset) * std::max(w_max, 1e-300) /
                         (1.0 - damp);
      // the observed-weight extrapolation is sound only once any declared
      // breakpoints of f are behind the frontier and a few segments have
      // been seen
      bool seen_enough = m >= j + 8 && im.seg(m).hi >= support_end;
      if ((remaining <= 0.25 * im.tol && seen_enough) ||
          std::exp(-offset) == 0.0) {
        err += remaining;
        break;
      }
      if (m > j + 100000)
        throw TailNotDecaying("GreenSolver: truncation certificate stalled");
    }
    // exponent error propagation across the accumulators
    err += (im.accs[j]->error() + 1e-15) * std::fabs(y);
    curve.ys[i] = y;
    curve.per_point_error[i] = err;
  }
  return curve;
}

GreenApply GreenSolver::at(const Fn& f, double x,
                           const std::vector<double>& f_breakpoints) {
  SolutionCurve c = solve(f, {x}, "", f_breakpoints);
  return {c.ys[0], c.per_point_error[0]};
}

SolutionCurve solve_on_grid(const PairPtr& pair, const Fn& f,
                            const std::vector<double>& xs, double tol,
                            const std::string& f_desc,
                            const std::vector<double>& f_breakpoints) {
  if (xs.empty()) throw ConfigError("solve_on_grid: xs must be nonempty");
  GreenSolver solver(pair, xs.front(), tol);
  return solver.solve(f, xs, f_desc, f_breakpoints);
}

ResidualReport residual_check(const PairPtr& pair, const SolutionCurve& curve,
                              const Fn& f, double rel_scale,
                              const std::vector<double>& f_singular) {
  const auto& xs = curve.xs;
  const auto& ys = curve.ys;
  if (xs.size() < 5)
    throw GridTooCoarse("residual_check: need at least 5 grid points");

  ResidualReport rep;
  std::vector<double> diff_errs;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    double h1 = xs[i] - xs[i - 1], h2 = xs[i + 1] - xs[i];
    double h = std::max(h1, h2);
    bool skip = false;
    for (double s : f_singular)
      if (std::fabs(xs[i] - s) <= 2.0 * h) skip = true;
    if (skip) continue;
    double yp = (ys[i + 1] - ys[i - 1]) / (h1 + h2);
    double resid = -pair->r(xs[i]) * yp + pair->q(xs[i]) * ys[i] - f(xs[i]);
    double rel = std::fabs(resid) / (1.0 + std::fabs(f(xs[i])));
    ++rep.n_checked;
    if (rel > rep.max_rel_residual) {
      rep.max_rel_residual = rel;
      rep.at_x = xs[i];
    }
    if (i + 2 < xs.size() && i >= 1) {
      double third =
          std::fabs(ys[i + 2] - 3 * ys[i + 1] + 3 * ys[i] - ys[i - 1]);
      // |y'''| h^2 / 6 is the leading differencing error
      diff_errs.push_back(pair->r(xs[i]) * third / (6.0 * h) /
                          (1.0 + std::fabs(f(xs[i]))));
    }
  }
  if (rep.n_checked == 0)
    throw GridTooCoarse("residual_check: every point sits near a singular "
                        "point of f");
  if (!diff_errs.empty()) {
    std::sort(diff_errs.begin(), diff_errs.end());
    double med = diff_errs[diff_errs.size() / 2];
    if (med > rel_scale)
      throw GridTooCoarse(
          "residual_check: central differencing error estimate (" +
          std::to_string(med) + ") dominates the requested scale");
  }
  return rep;
}

namespace {

double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

struct Hat {
  double center, width, height;
};

// piecewise-linear node representation of a sum of hats
struct PwLinear {
  std::vector<double> nodes;  // sorted breakpoints
  std::vector<double> vals;   // values at nodes (0 at the extremes)

  double operator()(double x) const {
    if (nodes.empty() || x <= nodes.front() || x >= nodes.back()) return 0.0;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    std::size_t i = static_cast<std::size_t>(it - nodes.begin());
    double t = (x - nodes[i - 1]) / (nodes[i] - nodes[i - 1]);
    return vals[i - 1] + t * (vals[i] - vals[i - 1]);
  }

  double norm(double p) const {  // p = 0 means the sup norm
    if (nodes.size() < 2) return 0.0;
    if (p == 0.0) {
      double m = 0;
      for (double v : vals) m = std::max(m, std::fabs(v));
      return m;
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      double h = nodes[i + 1] - nodes[i];
      double a = vals[i], b = vals[i + 1];
      if (h <= 0) continue;
      if (p == 1.0) {
        if (a * b >= 0) {
          total += 0.5 * std::fabs(a + b) * h;
        } else {
          double z = a / (a - b);  // zero crossing
          total += 0.5 * std::fabs(a) * z * h + 0.5 * std::fabs(b) * (1 - z) * h;
        }
      } else if (p == 2.0) {
        total += h * (a * a + a * b + b * b) / 3.0;
      } else {
        // generic p by fine Simpson over the piece
        int n = 32;
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
          double t0 = static_cast<double>(k) / n, t1 = (k + 1.0) / n;
          double f0 = std::pow(std::fabs(a + (b - a) * t0), p);
          double fm = std::pow(std::fabs(a + (b - a) * 0.5 * (t0 + t1)), p);
          double f1 = std::pow(std::fabs(a + (b - a) * t1), p);
          acc += (f0 + 4 * fm + f1) / 6.0 * (t1 - t0);
        }
        total += acc * h;
      }
    }
    return p == 1.0 ? total : std::pow(total, 1.0 / p);
  }
};

PwLinear make_forcing(std::mt19937_64& g) {
  int n_hats = 1 + static_cast<int>(g() % 3);
  std::vector<Hat> hats;
  for (int i = 0; i < n_hats; ++i) {
    Hat h;
    h.center = -8.0 + 16.0 * uniform01(g);
    h.width = 0.1 + 1.9 * uniform01(g);
    h.height = (g() & 1) ? 1.0 : -1.0;
    hats.push_back(h);
  }
  std::vector<double> nodes;
  for (const Hat& h : hats) {
    nodes.push_back(h.center - 0.5 * h.width);
    nodes.push_back(h.center);
    nodes.push_back(h.center + 0.5 * h.width);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  PwLinear f;
  f.nodes = nodes;
  f.vals.resize(nodes.size(), 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double v = 0;
    for (const Hat& h : hats) {
      double u = 1.0 - std::fabs(nodes[i] - h.center) / (0.5 * h.width);
      if (u > 0) v += h.height * u;
    }
    f.vals[i] = v;
  }
  return f;
}

// Measurement grid: uniform panels of even count between consecutive
// breakpoints of f, so each piece is smooth and composite Simpson reaches
// ~1e-8 relative accuracy on the norms.
std::vector<double> measurement_grid(double lo, double hi,
                                     const std::vector<double>& breaks,
                                     double target_h) {
  std::vector<double> cuts{lo};
  for (double b : breaks)
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> xs;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double len = cuts[i + 1] - cuts[i];
    int n = std::max(2, static_cast<int>(std::ceil(len / target_h)));
    if (n % 2) ++n;
    for (int k = 0; k < n; ++k) xs.push_back(cuts[i] + len * k / n);
  }
  xs.push_back(hi);
  return xs;
}

// Composite Simpson of g(y_i) over the even-count uniform pieces produced
// by measurement_grid.
double curve_norm(const SolutionCurve& c, double p) {
  if (p == 0.0) {
    double m = 0;
    for (double y : c.ys) m = std::max(m, std::fabs(y));
    return m;
  }
  auto g = [&](std::size_t i) { return std::pow(std::fabs(c.ys[i]), p); };
  double total = 0;
  std::size_t i = 0;
  while (i + 2 < c.xs.size()) {
    double h1 = c.xs[i + 1] - c.xs[i];
    double h2 = c.xs[i + 2] - c.xs[i + 1];
    if (std::fabs(h1 - h2) <= 1e-9 * std::max(h1, h2)) {
      total += (g(i) + 4.0 * g(i + 1) + g(i + 2)) * (h1 + h2) / 6.0;
      i += 2;
    } else {
      total += 0.5 * (g(i) + g(i + 1)) * h1;
      i += 1;
    }
  }
  if (i + 1 < c.xs.size())
    total += 0.5 * (g(i) + g(i + 1)) * (c.xs[i + 1] - c.xs[i]);
  return std::pow(total, 1.0 / p);
}

}  // namespace

NormBracket norm_bracket(const PairPtr& pair, double p, int n_samples,
                         std::uint64_t seed, double tol,
                         const GridPolicy& policy) {
  const bool space_c = (p == 0.0);
  if (!space_c && !(p >= 1))
    throw ConfigError("norm_bracket: p must be >= 1, or 0 for the sup norm");

  NormBracket out;
  FunctionalSpec spec;
  double bracket_factor = 1.0;
  if (space_c) {
    spec.kind = Functional::A;
  } else if (p == 1.0) {
    spec.kind = Functional::M1;
  } else {
    spec.kind = Functional::Mp;
    spec.p = p;
    double pp = p / (p - 1.0);
    bracket_factor = std::pow(p, 1.0 / p) * std::pow(pp, 1.0 / pp);
  }
  CriterionReport rep = sup_scan(spec, pair, policy);
  if (rep.finiteness != Finiteness::FiniteStable)
    throw TailNotDecaying("norm_bracket: the norm functional did not "
                          "stabilize; nothing to bracket");
  out.M_value = rep.sup_value;
  out.upper_bound = bracket_factor * rep.sup_value;

  GreenSolver solver(pair, -16.0, tol);
  std::mt19937_64 g(seed);
  for (int s = 0; s < n_samples; ++s) {
    PwLinear f = make_forcing(g);
    double fn = f.norm(space_c ? 0.0 : p);
    if (fn <= 0) continue;
    std::vector<double> xs = measurement_grid(-16.0, 12.0, f.nodes, 0.01);
    Fn feval = [&f](double t) { return f(t); };
    SolutionCurve c = solver.solve(feval, xs, "", f.nodes);
    double ratio = curve_norm(c, space_c ? 0.0 : p) / fn;
    out.ratios.push_back(ratio);
    out.lower_empirical = std::max(out.lower_empirical, ratio);
  }
  out.kappa = out.M_value > 0 ? out.lower_empirical / out.M_value : 0.0;
  out.contained = out.lower_empirical <= out.upper_bound * (1.0 + tol);
  return out;
}

WeightedDiag weighted_diagnostics(const PairPtr& pair,
                                  const SolutionCurve& curve, const Fn& f,
                                  double p, double r0) {
  WeightedDiag out;
  const auto& xs = curve.xs;
  const auto& ys = curve.ys;
  auto trapz = [&](const std::function<double(std::size_t)>& g) {
    double total = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      total += 0.5 * (g(i) + g(i + 1)) * (xs[i + 1] - xs[i]);
    return total;
  };
  if (p == 1.0) {
    if (!(r0 > 0)) throw ConfigError("weighted_diagnostics: needs r0 > 0");
    auto yprime = [&](std::size_t i) {
      return std::fabs((pair->q(xs[i]) * ys[i] - f(xs[i])) / pair->r(xs[i]));
    };
    auto qy = [&](std::size_t i) {
      return std::fabs(pair->q(xs[i]) / pair->r(xs[i]) * ys[i]);
    };
    auto af = [&](std::size_t i) { return std::fabs(f(xs[i])); };
    out.lhs = trapz(yprime) + trapz(qy);
    out.rhs = 3.0 / r0 * trapz(af);
    out.ratio = out.rhs > 0 ? out.lhs / out.rhs : 0.0;
    out.asserted = out.lhs <= out.rhs;
    return out;
  }
  auto weighted = [&](std::size_t i) {
    return pair->q(xs[i]) / pair->r(xs[i]) * std::pow(std::fabs(ys[i]), p);
  };
  auto fp = [&](std::size_t i) { return std::pow(std::fabs(f(xs[i])), p); };
  out.lhs = std::pow(trapz(weighted), 1.0 / p);
  out.rhs = std::pow(trapz(fp), 1.0 / p);
  out.ratio = out.rhs > 0 ? out.lhs / out.rhs : 0.0;
  out.asserted = false;  // the constant is not explicit for p > 1
  return out;
}

}  // namespace solvq
