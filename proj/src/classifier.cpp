#include "solvq/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "solvq/errors.hpp"
#include "solvq/quadrature.hpp"

namespace solvq {

std::string Space::label() const {
  switch (kind) {
    case Kind::L1: return "L1";
    case Kind::C: return "C";
    case Kind::Lp: {
      std::ostringstream os;
      if (p == static_cast<long>(p))
        os << "L" << static_cast<long>(p);
      else
        os << "L" << p;
      return os.str();
    }
  }
  return "?";
}

Space parse_space(const std::string& text) {
  if (text == "C" || text == "c") return Space::C();
  if (text.size() >= 2 && (text[0] == 'L' || text[0] == 'l')) {
    double p = std::atof(text.c_str() + 1);
    if (p == 1.0) return Space::L1();
    if (p > 1.0 && std::isfinite(p)) return Space::Lp(p);
  }
  throw ConfigError("unknown space '" + text + "' (use L1, L<p>, or C)");
}

const char* to_string(Decision d) {
  switch (d) {
    case Decision::Solvable: return "Solvable";
    case Decision::NotSolvable: return "NotSolvable";
    case Decision::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(VerdictMode m) {
  return m == VerdictMode::Symbolic ? "Symbolic" : "Numeric";
}

namespace {

EvidenceItem ev(const std::string& name, const std::string& status,
                double value, double conf) {
  return {name, status, value, conf};
}

EvidenceItem ev_report(const CriterionReport& r) {
  EvidenceItem e;
  e.name = r.name;
  e.status = to_string(r.finiteness);
  if (r.limit_at_infinity)
    e.status += std::string("/limit=") + to_string(*r.limit_at_infinity);
  e.value = r.sup_value;
  e.confidence = r.confidence;
  return e;
}

struct SharedEvidence {
  SDivergence sdiv;
  std::optional<double> b_certified_a;  // smallest a with B(a) stabilized > 0
  WindowInfimum b_best;
  CoefficientLimits qlim;
  InfimaTriplet infs;
};

std::vector<double> probe_grid(const GridPolicy& policy) {
  std::vector<double> xs;
  double x_max = std::max(8.0, policy.x_max);
  int s = std::max(2, policy.samples_per_level);
  std::size_t K = 0;
  while (std::pow(2.0, static_cast<double>(K)) < x_max) ++K;
  xs.push_back(0.0);
  for (int i = 1; i <= s; ++i) {
    double x = static_cast<double>(i) / s;
    xs.push_back(x);
    xs.push_back(-x);
  }
  for (std::size_t k = 1; k <= K; ++k) {
    double lo = std::pow(2.0, static_cast<double>(k - 1));
    double hi = std::min(std::pow(2.0, static_cast<double>(k)), x_max);
    for (int i = 1; i <= s; ++i) {
      double x = lo * std::pow(hi / lo, static_cast<double>(i) / s);
      xs.push_back(x);
      xs.push_back(-x);
    }
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

SharedEvidence gather_shared(const PairPtr& pair, double p,
                             const GridPolicy& policy) {
  SharedEvidence sh;
  sh.sdiv = s1_s2_diverge(pair, policy.s_probe_reach, policy.tol_criteria);
  std::vector<double> xs = probe_grid(policy);
  sh.b_best.value = 0;
  for (double a : {1.0, 2.0, 4.0, 8.0}) {
    WindowInfimum b = B_of_a(pair, a, xs, policy.tol_criteria);
    if (!sh.b_certified_a && b.trend == Trend::Stabilized && b.value > 0) {
      sh.b_certified_a = a;
      sh.b_best = b;
    }
  }
  if (!sh.b_certified_a) {
    sh.b_best = B_of_a(pair, 1.0, xs, policy.tol_criteria);
  }
  sh.qlim = coefficient_limits(pair, policy);
  sh.infs = infima_triplet(pair, p, policy);
  return sh;
}

void push_shared(SolvabilityVerdict* v, const SharedEvidence& sh) {
  v->evidence.push_back(ev("S1", to_string(sh.sdiv.s1), sh.sdiv.s1_partial,
                           sh.sdiv.confidence));
  v->evidence.push_back(ev("S2", to_string(sh.sdiv.s2), sh.sdiv.s2_partial,
                           sh.sdiv.confidence));
  if (sh.b_certified_a)
    v->evidence.push_back(ev("B(a)", "Stabilized>0 at a=" +
                                         std::to_string(*sh.b_certified_a),
                             sh.b_best.value, sh.b_best.confidence));
  else
    v->evidence.push_back(ev("B(a)", to_string(sh.b_best.trend),
                             sh.b_best.value, sh.b_best.confidence));
}

bool q_vanishes_one_side(const SharedEvidence& sh) {
  return sh.qlim.q_left == LimitKind::Zero ||
         sh.qlim.q_right == LimitKind::Zero;
}

}  // namespace

SolvabilityVerdict classify(const PairPtr& pair, const Space& space) {
  return classify(pair, space, GridPolicy::for_pair(pair));
}

SolvabilityVerdict classify(const PairPtr& pair, const Space& space,
                            const GridPolicy& policy) {
  SolvabilityVerdict v;
  v.space = space;
  v.mode = VerdictMode::Numeric;
  const double p = space.kind == Space::Kind::Lp ? space.p : 2.0;
  if (space.kind == Space::Kind::Lp && !(space.p > 1 && std::isfinite(space.p)))
    throw ConfigError("classify: Lp requires p in (1, inf)");

  SharedEvidence sh = gather_shared(pair, p, policy);
  push_shared(&v, sh);

  const bool s1_div = sh.sdiv.s1 == SideVerdict::Diverging;
  const bool s1_conv = sh.sdiv.s1 == SideVerdict::Converging;

  // Vanishing-q shortcut: with a window-mass certificate, q -> 0 on either
  // side rules out every space.
  if (sh.b_certified_a && q_vanishes_one_side(sh)) {
    v.decision = Decision::NotSolvable;
    v.route = "Thm2.7";
    v.evidence.push_back(ev("q_side_limit", "Zero", 0.0, 0.9));
    return v;
  }

  if (space.kind == Space::Kind::C) {
    // fast path: positive infimum with q -> infinity
    if (s1_div && sh.infs.q0.trend == Trend::Stabilized &&
        sh.infs.q0.value > 0 && sh.qlim.q_to_infinity) {
      v.decision = Decision::Solvable;
      v.route = "Thm9.3";
      v.evidence.push_back(ev("q0", "Stabilized>0", sh.infs.q0.value,
                              sh.infs.q0.confidence));
      v.evidence.push_back(ev("q_limit", "Infinity", 0.0, 0.9));
      return v;
    }
    if (s1_conv) {
      v.decision = Decision::NotSolvable;
      v.route = "Thm2.5";
      v.caveats.push_back("one-sided mass integral converges");
      return v;
    }
    FunctionalSpec spec;
    spec.kind = sh.b_certified_a ? Functional::Atilde : Functional::A;
    spec.p = 2.0;
    CriterionReport rep = sup_scan(spec, pair, policy);
    v.evidence.push_back(ev_report(rep));
    v.route = sh.b_certified_a ? "Thm2.6" : "Thm2.5";
    if (rep.limit_at_infinity == LimitKind::Zero &&
        rep.finiteness != Finiteness::GrowingUnbounded) {
      v.decision = Decision::Solvable;
    } else if (rep.limit_at_infinity == LimitKind::NonzeroFinite ||
               rep.limit_at_infinity == LimitKind::Infinity ||
               rep.has_divergent_points) {
      v.decision = Decision::NotSolvable;
    } else {
      v.decision = Decision::Inconclusive;
      v.caveats.push_back("limit of " + rep.name + " not resolved");
    }
    return v;
  }

  if (space.kind == Space::Kind::L1) {
    const WindowInfimum& r0 = sh.infs.r0;
    v.evidence.push_back(ev("r0", to_string(r0.trend), r0.value, r0.confidence));
    if (sh.b_certified_a) {
      v.route = "Thm2.4";
      if (r0.trend == Trend::Stabilized && r0.value > 0)
        v.decision = Decision::Solvable;
      else if (r0.trend == Trend::Vanishing)
        v.decision = Decision::NotSolvable;
      else {
        v.decision = Decision::Inconclusive;
        v.caveats.push_back("inf r not resolved");
      }
      return v;
    }
    v.route = "Thm2.3";
    if (s1_conv || r0.trend == Trend::Vanishing) {
      v.decision = Decision::NotSolvable;
      if (s1_conv) v.caveats.push_back("one-sided mass integral converges");
      return v;
    }
    FunctionalSpec spec;
    spec.kind = Functional::M1;
    CriterionReport rep = sup_scan(spec, pair, policy);
    v.evidence.push_back(ev_report(rep));
    if (rep.finiteness == Finiteness::GrowingUnbounded) {
      v.decision = Decision::NotSolvable;
    } else if (rep.finiteness == Finiteness::FiniteStable && s1_div &&
               r0.trend == Trend::Stabilized && r0.value > 0) {
      v.decision = Decision::Solvable;
    } else {
      v.decision = Decision::Inconclusive;
      v.caveats.push_back("M1 scan or inf r not resolved");
    }
    return v;
  }

  // Lp, 1 < p < inf
  if (sh.b_certified_a) {
    v.route = "Thm2.2";
    FunctionalSpec spec;
    spec.kind = Functional::Apprime;
    spec.p = space.p;
    CriterionReport rep = sup_scan(spec, pair, policy);
    v.evidence.push_back(ev_report(rep));
    if (rep.finiteness == Finiteness::FiniteStable)
      v.decision = Decision::Solvable;
    else if (rep.finiteness == Finiteness::GrowingUnbounded)
      v.decision = Decision::NotSolvable;
    else {
      v.decision = Decision::Inconclusive;
      v.caveats.push_back("Apprime scan not resolved");
    }
    return v;
  }
  v.route = "Thm2.1";
  if (s1_conv) {
    v.decision = Decision::NotSolvable;
    v.caveats.push_back("one-sided mass integral converges");
    return v;
  }
  FunctionalSpec mspec;
  mspec.kind = Functional::Mp;
  mspec.p = space.p;
  CriterionReport mrep = sup_scan(mspec, pair, policy);
  v.evidence.push_back(ev_report(mrep));
  if (mrep.finiteness == Finiteness::GrowingUnbounded) {
    v.decision = Decision::NotSolvable;
    return v;
  }
  FunctionalSpec aspec;
  aspec.kind = Functional::Apprime;
  aspec.p = space.p;
  CriterionReport arep = sup_scan(aspec, pair, policy);
  v.evidence.push_back(ev_report(arep));
  if (arep.finiteness == Finiteness::GrowingUnbounded) {
    v.decision = Decision::NotSolvable;
    return v;
  }
  if (s1_div && mrep.finiteness == Finiteness::FiniteStable &&
      arep.finiteness == Finiteness::FiniteStable) {
    v.decision = Decision::Solvable;
    return v;
  }
  v.decision = Decision::Inconclusive;
  v.caveats.push_back("criterion scans not all resolved");
  return v;
}

SolvabilityVerdict classify_thm12(const PairPtr& pair, const Space& space,
                                  const RegularityCert& cert,
                                  const GridPolicy& policy) {
  SolvabilityVerdict v;
  v.space = space;
  v.mode = VerdictMode::Numeric;
  v.route = "Thm1.2";
  if (!(cert.a >= 1) || !(cert.b > 0))
    throw ConfigError("classify_thm12: certificate needs a >= 1, b > 0");
  double gamma_hat = cert.a * cert.a * std::exp(-cert.b / (cert.a * cert.a));
  if (!(gamma_hat <= 1.0 / 3.0))
    throw HypothesisViolated("classify_thm12: a^2 exp(-b/a^2) = " +
                             std::to_string(gamma_hat) + " > 1/3");
  v.evidence.push_back(ev("gamma_hat", "<=1/3", gamma_hat, 1.0));

  // spot-check the ratio bounds on a grid of (x, t) pairs
  std::vector<double> xs = probe_grid(policy);
  const double fudge = 1.0 + 1e-12;
  for (double x : xs) {
    if (x > cert.x_lo && x < cert.x_hi) continue;
    double rx = pair->r(x), qx = pair->q(x);
    if (!(rx > 0) || !(qx > 0))
      throw HypothesisViolated(
          "classify_thm12: coefficients must be positive (x=" +
          std::to_string(x) + ")");
    double delta = cert.b * rx / qx;
    for (int j = -8; j <= 8; ++j) {
      double t = x + delta * j / 8.0;
      double rr = pair->r(t) / rx, qq = pair->q(t) / qx;
      if (rr > cert.a * fudge || rr < 1.0 / (cert.a * fudge) ||
          qq > cert.a * fudge || qq < 1.0 / (cert.a * fudge))
        throw HypothesisViolated(
            "classify_thm12: ratio bound fails at x=" + std::to_string(x) +
            ", t=" + std::to_string(t));
    }
  }

  const double p = space.kind == Space::Kind::Lp ? space.p : 2.0;
  InfimaTriplet infs = infima_triplet(pair, p, policy);
  CoefficientLimits qlim = coefficient_limits(pair, policy);

  auto positive = [](const WindowInfimum& w) {
    return w.trend == Trend::Stabilized && w.value > 0;
  };
  auto vanishing = [](const WindowInfimum& w) {
    return w.trend == Trend::Vanishing;
  };

  switch (space.kind) {
    case Space::Kind::L1:
      v.evidence.push_back(ev("r0", to_string(infs.r0.trend), infs.r0.value,
                              infs.r0.confidence));
      v.evidence.push_back(ev("q0", to_string(infs.q0.trend), infs.q0.value,
                              infs.q0.confidence));
      if (positive(infs.r0) && positive(infs.q0))
        v.decision = Decision::Solvable;
      else if (vanishing(infs.r0) || vanishing(infs.q0))
        v.decision = Decision::NotSolvable;
      else
        v.decision = Decision::Inconclusive;
      break;
    case Space::Kind::Lp:
      v.evidence.push_back(ev("sigma_pprime", to_string(infs.sigma.trend),
                              infs.sigma.value, infs.sigma.confidence));
      v.evidence.push_back(ev("q0", to_string(infs.q0.trend), infs.q0.value,
                              infs.q0.confidence));
      if (positive(infs.sigma) && positive(infs.q0))
        v.decision = Decision::Solvable;
      else if (vanishing(infs.sigma) || vanishing(infs.q0))
        v.decision = Decision::NotSolvable;
      else
        v.decision = Decision::Inconclusive;
      break;
    case Space::Kind::C:
      v.evidence.push_back(
          ev("q_limit", qlim.q_to_infinity ? "Infinity" : "NotInfinity", 0.0,
             0.9));
      v.decision =
          qlim.q_to_infinity ? Decision::Solvable : Decision::NotSolvable;
      break;
  }
  return v;
}

namespace {

struct Example8Verdict {
  bool solvable = false;
  bool boundary = false;
  std::string route;
};

Example8Verdict example8_lp(double a, double b, double g, double p) {
  Example8Verdict out;
  out.route = "Thm8.12";
  if (b == 0 && a == 0) {
    out.solvable = true;
    out.route = "Thm8.12/Eq8.24";
  } else if (b > 0 && b - a >= 0 && b - a <= g && p >= 1 - a / b) {
    out.solvable = true;
    out.route = "Thm8.12/Eq8.25";
  } else if (b > 0 && b - a > g && b + 2 * a + 2 * g > 0 &&
             p > 1 - 3 * a / (b + 2 * a + 2 * g)) {
    out.solvable = true;
    out.route = "Thm8.12/Eq8.26";
  }
  if (b > 0) {
    if (b - a == 0 || b - a == g) out.boundary = true;
    if (b - a >= 0 && b - a <= g && p == 1 - a / b) out.boundary = true;
    if (b - a > g) {
      if (b + 2 * a + 2 * g == 0) out.boundary = true;
      if (b + 2 * a + 2 * g > 0 && p == 1 - 3 * a / (b + 2 * a + 2 * g))
        out.boundary = true;
    }
  }
  return out;
}

Example8Verdict example8_l1(double a, double b) {
  Example8Verdict out;
  out.route = "Thm8.13";
  out.solvable = b >= a && a >= 0;
  out.boundary = (b == a) || (a == 0);
  return out;
}

Example8Verdict example8_c(double a, double b, double g) {
  Example8Verdict out;
  out.route = "Thm8.14";
  if (b > 0 && b - a >= 0 && b - a <= g) {
    out.solvable = true;
    out.route = "Thm8.14/Eq8.27";
  } else if (b > 0 && b - a > g && b + 2 * a + 2 * g > 0) {
    out.solvable = true;
    out.route = "Thm8.14/Eq8.28";
  }
  out.boundary = b == 0;
  if (b > 0) {
    if (b - a == 0 || b - a == g) out.boundary = true;
    if (b - a > g && b + 2 * a + 2 * g == 0) out.boundary = true;
  }
  return out;
}

}  // namespace

SolvabilityVerdict classify_example8(double alpha, double beta, double gamma,
                                     const Space& space) {
  if (!(gamma > 0)) throw ConfigError("classify_example8: gamma must be > 0");
  if (space.kind == Space::Kind::Lp &&
      !(space.p > 1 && std::isfinite(space.p)))
    throw ConfigError("classify_example8: Lp requires p in (1, inf)");
  Example8Verdict ev8;
  switch (space.kind) {
    case Space::Kind::Lp:
      ev8 = example8_lp(alpha, beta, gamma, space.p);
      break;
    case Space::Kind::L1:
      ev8 = example8_l1(alpha, beta);
      break;
    case Space::Kind::C:
      ev8 = example8_c(alpha, beta, gamma);
      break;
  }
  SolvabilityVerdict v;
  v.space = space;
  v.mode = VerdictMode::Symbolic;
  v.decision = ev8.solvable ? Decision::Solvable : Decision::NotSolvable;
  v.route = ev8.route;
  v.evidence.push_back(ev("alpha", "", alpha, 1.0));
  v.evidence.push_back(ev("beta", "", beta, 1.0));
  v.evidence.push_back(ev("gamma", "", gamma, 1.0));
  if (ev8.boundary)
    v.caveats.push_back(
        "parameters sit exactly on a condition boundary; the closed-form "
        "conditions are sharp there");
  return v;
}

CrossCheckReport cross_check_example8(double alpha, double beta, double gamma,
                                      const Space& space,
                                      const GridPolicy& policy) {
  if (std::fabs(alpha) > 3 || std::fabs(beta) > 3 || gamma < 0.5 || gamma > 3)
    throw ConfigError(
        "cross_check_example8: parameters outside the desk-scale band "
        "(|alpha|,|beta| <= 3, gamma in [0.5, 3])");
  CrossCheckReport rep;
  rep.symbolic = classify_example8(alpha, beta, gamma, space);
  PairPtr pair = make_exp_osc(alpha, beta, gamma);
  rep.numeric = classify(pair, space, policy);
  rep.agree = rep.numeric.decision == rep.symbolic.decision ||
              rep.numeric.decision == Decision::Inconclusive;
  rep.conflict = rep.numeric.decision != Decision::Inconclusive &&
                 rep.symbolic.decision != Decision::Inconclusive &&
                 rep.numeric.decision != rep.symbolic.decision;
  return rep;
}

}  // namespace solvq
