#include "solvq/dfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "solvq/errors.hpp"
#include "solvq/parallel.hpp"

namespace solvq {

namespace {

double window_mass(const PairPtr& pair, double x, double d, double qtol,
                   double* err = nullptr) {
  QuadratureResult r = integrate_qr_window(pair, x, d, qtol);
  if (err) *err = r.abs_error_estimate;
  return r.value;
}

}  // namespace

DSolveResult d_of_x(const PairPtr& pair, double x, double tol,
                    double bracket_limit, std::optional<double> warm_guess) {
  const double qtol = std::min(tol * 0.1, 1e-11);
  double guess;
  if (warm_guess && *warm_guess > 0) {
    guess = *warm_guess;
  } else {
    double qx = pair->q(x), rx = pair->r(x);
    guess = (qx > 0 && std::isfinite(qx) && std::isfinite(rx)) ? rx / qx : 1.0;
  }
  guess = std::clamp(guess, 1e-300, bracket_limit);

  double lo = 0.0, m_lo = 0.0;
  double hi = guess;
  double quad_err = 0.0;
  double m_hi = window_mass(pair, x, hi, qtol, &quad_err);
  while (m_hi < 2.0) {
    lo = hi;
    m_lo = m_hi;
    hi *= 2.0;
    if (hi > bracket_limit)
      throw BracketExhausted("d_of_x: window mass stays below 2 up to d=" +
                             std::to_string(bracket_limit) + " at x=" +
                             std::to_string(x));
    m_hi = window_mass(pair, x, hi, qtol, &quad_err);
  }
  // If the first probe already overshot, walk the lower edge down.
  while (lo == 0.0 && m_hi >= 2.0 && hi > 1e-300) {
    double half = hi * 0.5;
    double m_half = window_mass(pair, x, half, qtol, &quad_err);
    if (m_half < 2.0) {
      lo = half;
      m_lo = m_half;
      break;
    }
    hi = half;
    m_hi = m_half;
  }

  // Damped false position (Illinois) on the nondecreasing mass function.
  double f_lo = m_lo - 2.0, f_hi = m_hi - 2.0;
  double best_d = hi, best_res = std::fabs(f_hi);
  int side = 0;
  for (int iter = 0; iter < 200; ++iter) {
    double d_try = (f_hi != f_lo) ? (f_lo * hi - f_hi * lo) / (f_lo - f_hi)
                                  : 0.5 * (lo + hi);
    double margin = 0.1 * (hi - lo);
    if (!(d_try > lo + margin && d_try < hi - margin)) d_try = 0.5 * (lo + hi);
    double qe = 0.0;
    double m = window_mass(pair, x, d_try, qtol, &qe);
    quad_err = std::max(quad_err, qe);
    double f = m - 2.0;
    if (std::fabs(f) < best_res) {
      best_res = std::fabs(f);
      best_d = d_try;
    }
    double tol_eff = std::max(tol, 2.0 * quad_err);
    if (std::fabs(f) <= tol_eff) {
      return {d_try, std::fabs(f) + qe, lo, hi};
    }
    if (f < 0) {
      lo = d_try;
      f_lo = f;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = d_try;
      f_hi = f;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    if (hi - lo <=
        8 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi))
      break;
  }
  return {best_d, best_res + quad_err, lo, hi};
}

LocalizationProfile scan_d(const PairPtr& pair, const std::vector<double>& xs,
                           double tol, double bracket_limit) {
  if (xs.empty()) throw ConfigError("scan_d: xs must be nonempty");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw ConfigError("scan_d: xs must be strictly increasing");

  LocalizationProfile profile;
  profile.pair = pair;
  profile.samples.resize(xs.size());
  parallel_chunks(xs.size(), 16, [&](std::size_t begin, std::size_t end) {
    std::optional<double> warm;
    double warm_x = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      std::optional<double> guess;
      if (warm) {
        // d is 1-Lipschitz, so the previous solution bounds this one.
        guess = std::max(*warm + std::fabs(xs[i] - warm_x), 1e-300);
      }
      try {
        DSolveResult r = d_of_x(pair, xs[i], tol, bracket_limit, guess);
        profile.samples[i] = {xs[i], r.d, r.residual, r.lo, r.hi};
        warm = r.d;
        warm_x = xs[i];
      } catch (const BracketExhausted& e) {
        throw BracketExhausted(std::string(e.what()) + " (scan_d at x=" +
                               std::to_string(xs[i]) + ")");
      }
    }
  });
  double d0 = 0.0, limit = 0.0;
  for (const auto& s : profile.samples) {
    d0 = std::max(d0, s.d);
    limit = std::max(limit, std::fabs(s.x));
  }
  profile.d0_estimate = d0;
  profile.domain_limit = limit;
  return profile;
}

namespace {

// Trend from per-level minima over |x| octaves: stabilized when the minimum
// is attained away from the scan edge and the edge level does not improve
// it; vanishing when the edge keeps cutting it down or the ratio to the
// typical value has collapsed.
Trend minima_trend(const std::vector<double>& level_min, double median_value,
                   double* confidence) {
  *confidence = 0.0;
  if (level_min.size() < 3) return Trend::Inconclusive;
  std::size_t k = level_min.size();
  double overall = *std::min_element(level_min.begin(), level_min.end());
  double overall_ex_last =
      *std::min_element(level_min.begin(), level_min.end() - 1);
  if (median_value > 0 && overall <= 1e-6 * median_value) {
    *confidence = 0.9;
    return Trend::Vanishing;
  }
  bool tail_decaying = level_min[k - 1] < 0.7 * level_min[k - 2] &&
                       level_min[k - 2] < 0.7 * level_min[k - 3];
  if (tail_decaying) {
    *confidence = 0.8;
    return Trend::Vanishing;
  }
  if (overall > 0 && level_min[k - 1] >= 0.9 * overall_ex_last) {
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (level_min[i] == overall) {
        argmin = i;
        break;
      }
    *confidence = (argmin + 3 <= k) ? 0.9 : 0.6;
    return Trend::Stabilized;
  }
  return Trend::Inconclusive;
}

}  // namespace

WindowInfimum B_of_a(const PairPtr& pair, double a, const std::vector<double>& xs,
                     double tol) {
  if (!(a > 0)) throw ConfigError("B_of_a: a must be > 0");
  if (xs.empty()) throw ConfigError("B_of_a: xs must be nonempty");
  WindowInfimum out;
  out.value = std::numeric_limits<double>::infinity();
  std::vector<double> values(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    values[i] = window_mass(pair, xs[i], a, tol);
    if (values[i] < out.value) {
      out.value = values[i];
      out.at_x = xs[i];
    }
  }
  // octave levels of |x|
  double x_abs_max = 0.0;
  for (double x : xs) x_abs_max = std::max(x_abs_max, std::fabs(x));
  int n_levels = std::max(3, static_cast<int>(std::ceil(std::log2(std::max(2.0, x_abs_max)))) + 1);
  std::vector<double> level_min(n_levels, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double ax = std::fabs(xs[i]);
    int lvl = ax <= 1.0 ? 0
                        : std::min(n_levels - 1,
                                   static_cast<int>(std::ceil(std::log2(ax))));
    level_min[lvl] = std::min(level_min[lvl], values[i]);
  }
  std::vector<double> filled;
  for (double m : level_min)
    if (std::isfinite(m)) filled.push_back(m);
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  double median = sorted[sorted.size() / 2];
  out.trend = minima_trend(filled, median, &out.confidence);
  return out;
}

std::pair<double, double> kappa1_kappa2(const CoefficientSplit& split, double x,
                                        double tol) {
  const PairPtr& pair = split.parent;
  double q1x = split.q1(x);
  if (!(q1x > 0)) throw ConfigError("kappa1_kappa2: q1(x) must be > 0");
  double Z = 2.0 * pair->r(x) / q1x;

  Fn sym_defect = [&](double t) {
    return split.q1(x + t) / pair->r(x + t) - 2.0 * q1x / pair->r(x) +
           split.q1(x - t) / pair->r(x - t);
  };
  Fn osc_part = [&](double t) { return split.q2(t) / pair->r(t); };

  QuadOptions kopt;
  kopt.accept_best = true;
  auto k1_of = [&](double z) {
    if (z <= 0) return 0.0;
    QuadratureResult r = integrate_finite(sym_defect, 0.0, z, tol, nullptr, kopt);
    return std::fabs(r.value);
  };
  auto k2_of = [&](double z) {
    if (z <= 0) return 0.0;
    if (split.matches_oscillation_hint && pair->oscillation_hint)
      return std::fabs(integrate_osc_part(pair, x - z, x + z, tol).value);
    QuadOptions capped = kopt;
    capped.max_panels = 20000;
    QuadratureResult r =
        integrate_finite(osc_part, x - z, x + z, tol, nullptr, capped);
    return std::fabs(r.value);
  };

  auto grid_max = [&](const std::function<double(double)>& f) {
    const int n = 257;
    double best = 0.0, best_z = 0.0;
    for (int i = 0; i < n; ++i) {
      double z = Z * i / (n - 1);
      double v = f(z);
      if (v > best) {
        best = v;
        best_z = z;
      }
    }
    // golden-section refinement around the grid maximizer
    double step = Z / (n - 1);
    double a = std::max(0.0, best_z - step), b = std::min(Z, best_z + step);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 40 && (b - a) > 1e-12 * std::max(1.0, Z); ++it) {
      if (fc < fd) {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = f(d);
      } else {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = f(c);
      }
    }
    return std::max({best, fc, fd});
  };

  return {grid_max(k1_of), grid_max(k2_of)};
}

std::vector<DEstimateRow> d_estimate_thm28(const CoefficientSplit& split,
                                           const std::vector<double>& xs,
                                           double tol) {
  std::vector<DEstimateRow> rows;
  rows.reserve(xs.size());
  std::optional<double> warm;
  double warm_x = 0.0;
  for (double x : xs) {
    std::optional<double> guess;
    if (warm) guess = *warm + std::fabs(x - warm_x);
    DSolveResult r = d_of_x(split.parent, x, tol, 1e6, guess);
    warm = r.d;
    warm_x = x;
    double pred = split.parent->r(x) / split.q1(x);
    rows.push_back({x, r.d, pred, r.d / pred});
  }
  return rows;
}

SDivergence s1_s2_diverge(const PairPtr& pair, double X, double tol) {
  if (!(X > 0)) throw ConfigError("s1_s2_diverge: X must be > 0");
  SDivergence out;
  const int n_steps = 8;
  std::vector<double> cuts;
  for (int k = n_steps - 1; k >= 0; --k) cuts.push_back(X / std::pow(2.0, k));

  auto run_side = [&](bool right) {
    std::vector<double> partials;
    double acc = 0.0, prev_cut = 0.0;
    for (double c : cuts) {
      double a = right ? prev_cut : -c;
      double b = right ? c : -prev_cut;
      acc += integrate_qr(pair, a, b, tol).value;
      partials.push_back(acc);
      prev_cut = c;
    }
    return partials;
  };
  out.s2_partials = run_side(true);
  out.s1_partials = run_side(false);
  out.s1_partial = out.s1_partials.back();
  out.s2_partial = out.s2_partials.back();

  auto verdict = [&](const std::vector<double>& p, double* conf) -> SideVerdict {
    std::size_t k = p.size();
    double rel1 = (p[k - 1] - p[k - 2]) / std::max(p[k - 2], 1e-300);
    double rel2 = (p[k - 2] - p[k - 3]) / std::max(p[k - 3], 1e-300);
    if (rel1 > 0.01 && rel2 > 0.01) {
      *conf = std::min(1.0, 0.5 + 0.5 * std::min(rel1, rel2));
      return SideVerdict::Diverging;
    }
    if (rel1 <= 0.01 && rel2 <= 0.01) {
      *conf = 0.9;
      return SideVerdict::Converging;
    }
    *conf = 0.3;
    return SideVerdict::Inconclusive;
  };
  double c1 = 0, c2 = 0;
  out.s1 = verdict(out.s1_partials, &c1);
  out.s2 = verdict(out.s2_partials, &c2);
  out.confidence = std::min(c1, c2);
  return out;
}

}  // namespace solvq
