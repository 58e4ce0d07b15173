#include "solvq/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "solvq/errors.hpp"
#include "solvq/expression.hpp"

namespace solvq {

namespace {

// Half-integer multiples of pi index the zeros of cos(phase):
// phase(s) = (k + 1/2) pi.
double first_zero_index(double u) { return u / M_PI - 0.5; }

// Count of k >= 0 with phase(|t|) = (k+1/2)pi inside a one-signed [a, b].
double count_one_sided(const OscillationHint& h, double s_lo, double s_hi) {
  if (s_hi <= s_lo) return 0.0;
  double k_lo = std::ceil(first_zero_index(h.phase(s_lo)));
  double k_hi = std::floor(first_zero_index(h.phase(s_hi)));
  k_lo = std::max(k_lo, 0.0);
  if (k_hi < k_lo) return 0.0;
  return k_hi - k_lo + 1.0;
}

void append_one_sided(const OscillationHint& h, double s_lo, double s_hi,
                      int sign, std::size_t cap, std::vector<double>* out) {
  if (s_hi <= s_lo) return;
  double k_lo = std::max(std::ceil(first_zero_index(h.phase(s_lo))), 0.0);
  double k_hi = std::floor(first_zero_index(h.phase(s_hi)));
  for (double k = k_lo; k <= k_hi; ++k) {
    if (out->size() >= cap) return;
    double s = h.phase_inv((k + 0.5) * M_PI);
    out->push_back(sign * s);
  }
}

}  // namespace

double OscillationHint::count_in(double a, double b) const {
  if (b <= a) return 0.0;
  if (a >= 0) return count_one_sided(*this, a, b);
  if (b <= 0) return count_one_sided(*this, -b, -a);
  return count_one_sided(*this, 0.0, -a) + count_one_sided(*this, 0.0, b);
}

std::vector<double> OscillationHint::breakpoints_in(double a, double b,
                                                    std::size_t cap) const {
  std::vector<double> out;
  if (b <= a) return out;
  if (a >= 0) {
    append_one_sided(*this, a, b, +1, cap, &out);
  } else if (b <= 0) {
    append_one_sided(*this, -b, -a, -1, cap, &out);
    std::reverse(out.begin(), out.end());
  } else {
    append_one_sided(*this, 0.0, -a, -1, cap, &out);
    std::reverse(out.begin(), out.end());
    append_one_sided(*this, 0.0, b, +1, cap, &out);
  }
  return out;
}

std::string CoefficientPair::describe() const {
  std::ostringstream os;
  switch (kind) {
    case CoefficientKind::Constant:
      os << "constant(r=" << r0 << ", q=" << q0 << ")";
      break;
    case CoefficientKind::SinePower:
      os << "sine_power(theta=" << theta << ")";
      break;
    case CoefficientKind::ExpOsc:
      os << "exp_osc(alpha=" << alpha << ", beta=" << beta << ", gamma=" << gamma
         << ")";
      break;
    case CoefficientKind::UserDefined:
      os << "expr";
      break;
  }
  return os.str();
}

PairPtr make_constant(double r0, double q0) {
  if (!(r0 > 0)) throw ConfigError("make_constant: r0 must be > 0");
  if (q0 < 0) throw ConfigError("make_constant: q0 must be >= 0");
  auto p = std::make_shared<CoefficientPair>();
  p->kind = CoefficientKind::Constant;
  p->r0 = r0;
  p->q0 = q0;
  p->r_eval = [r0](double) { return r0; };
  p->q_eval = [q0](double) { return q0; };
  return p;
}

PairPtr make_sine_power(double theta) {
  if (!(theta > 0)) throw ConfigError("make_sine_power: theta must be > 0");
  auto p = std::make_shared<CoefficientPair>();
  p->kind = CoefficientKind::SinePower;
  p->theta = theta;
  p->r_eval = [](double) { return 1.0; };
  p->q_eval = [theta](double x) { return 1.0 + std::sin(std::pow(std::fabs(x), theta)); };
  return p;
}

PairPtr make_exp_osc(double alpha, double beta, double gamma) {
  if (!(gamma > 0)) throw ConfigError("make_exp_osc: gamma must be > 0");
  auto p = std::make_shared<CoefficientPair>();
  p->kind = CoefficientKind::ExpOsc;
  p->alpha = alpha;
  p->beta = beta;
  p->gamma = gamma;
  p->r_eval = [alpha](double x) { return std::exp(alpha * std::fabs(x)); };
  // summed form, shared verbatim with the canonical split so that
  // q1 + q2 == q to the last bit; clamped against a one-ulp sign slip
  p->q_eval = [beta, gamma](double x) {
    double a = std::fabs(x);
    double e = std::exp(beta * a);
    return std::max(e + e * std::cos(std::exp(gamma * a)), 0.0);
  };
  const double th = beta - alpha;  // exponent of q/r
  auto hint = std::make_shared<OscillationHint>();
  hint->base = [th](double t) { return std::exp(th * std::fabs(t)); };
  hint->amp = hint->base;
  hint->phase = [gamma](double s) { return std::exp(gamma * s); };
  hint->phase_deriv = [gamma](double s) { return gamma * std::exp(gamma * s); };
  hint->phase_inv = [gamma](double u) { return std::log(u) / gamma; };
  hint->amp_ratio = [th, gamma](double s) {
    return std::exp((th - gamma) * s) / gamma;
  };
  p->oscillation_hint = hint;
  return p;
}

PairPtr make_expr(const std::string& r_expr, const std::string& q_expr) {
  auto p = std::make_shared<CoefficientPair>();
  p->kind = CoefficientKind::UserDefined;
  p->r_eval = parse_expression(r_expr);
  p->q_eval = parse_expression(q_expr);
  return p;
}

PairPtr scale_pair(const PairPtr& pair, double c) {
  if (!(c > 0)) throw ConfigError("scale_pair: c must be > 0");
  auto p = std::make_shared<CoefficientPair>(*pair);
  Fn r_old = pair->r_eval;
  Fn q_old = pair->q_eval;
  p->r_eval = [r_old, c](double x) { return c * r_old(x); };
  p->q_eval = [q_old, c](double x) { return c * q_old(x); };
  p->r0 *= c;
  p->q0 *= c;
  // q/r is untouched, so the oscillation structure carries over as-is.
  return p;
}

CoefficientSplit split_for_thm28(const PairPtr& pair) {
  if (pair->kind != CoefficientKind::ExpOsc)
    throw Unsplittable("split_for_thm28: no canonical split for " +
                       pair->describe());
  const double beta = pair->beta, gamma = pair->gamma;
  CoefficientSplit s;
  s.parent = pair;
  s.matches_oscillation_hint = true;
  s.q1_eval = [beta](double x) { return std::exp(beta * std::fabs(x)); };
  s.q2_eval = [beta, gamma](double x) {
    double a = std::fabs(x);
    return std::exp(beta * a) * std::cos(std::exp(gamma * a));
  };
  return s;
}

CoefficientSplit split_for_thm28(const PairPtr& pair, Fn q1, Fn q2) {
  CoefficientSplit s;
  s.parent = pair;
  s.q1_eval = std::move(q1);
  s.q2_eval = std::move(q2);
  return s;
}

}  // namespace solvq
