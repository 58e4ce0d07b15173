#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solvq/coefficients.hpp"
#include "solvq/covering.hpp"
#include "solvq/dfunc.hpp"

namespace solvq {

enum class Finiteness { FiniteStable, GrowingUnbounded, Inconclusive };
enum class LimitKind { Zero, Infinity, NonzeroFinite, Inconclusive };

const char* to_string(Finiteness f);
const char* to_string(LimitKind k);
const char* to_string(Trend t);
const char* to_string(SideVerdict v);

struct GridPolicy {
  double x_max = 1024;         // scan reach (octave doubling from 1)
  int samples_per_level = 8;   // per side per octave
  double tol_criteria = 1e-10;
  double tol_green = 1e-8;
  double stabilization_rel = 0.01;  // running-sup change over last two octaves
  double zero_threshold = 1e-6;
  double inf_threshold = 1e6;
  double s_probe_reach = 64;  // X for the one-sided mass divergence probe

  /// Oscillation-hinted pairs get a short reach: their coefficients
  /// overflow doubles long before x_max = 1024, and the criterion
  /// functionals stabilize within a few octaves anyway.
  static GridPolicy for_pair(const PairPtr& pair);
};

/// Point value of a criterion functional with certified truncation. When a
/// one-sided covering cannot exist (window mass never reaches 2), the
/// evaluator probes partial integrals over doubling spans: `diverging` set
/// means the partials kept growing, and `value` is then a lower bound.
struct FunctionalValue {
  double value = 0;
  double err = 0;
  bool diverging = false;
  bool certified = true;  // false when the tail closure is heuristic
};

/// int_x^inf (Rightward) or int_-inf^x (Leftward) of
///   w(t) * exp(-nu * |int between x and t of q/r|),
/// truncated through an R(x, d)-covering chain per the geometric tail bound.
FunctionalValue exp_kernel_integral(const PairPtr& pair, double x,
                                    Direction side, double nu, const Fn& w,
                                    double tol);

FunctionalValue M_p_at(const PairPtr& pair, double p, double x, double tol);
FunctionalValue A_pprime_at(const PairPtr& pair, double p, double x, double d_x,
                            double tol);
FunctionalValue M_1_at(const PairPtr& pair, double x, double tol);
FunctionalValue A_at(const PairPtr& pair, double x, double tol);
FunctionalValue A_tilde_at(const PairPtr& pair, double x, double d_x, double tol);
FunctionalValue I_p_at(const PairPtr& pair, double p, double x, double tol);
FunctionalValue J_nu_at(const PairPtr& pair, double nu, double pprime, double x,
                        double tol);
FunctionalValue K_p_at(const PairPtr& pair, double pprime, double x, double tol);

/// Generic two-factor product (int_{-inf}^x w)^{1/p} (int_x^inf v^{-p'/p})^{1/p'}
/// for user weights; improper pieces are truncated by doubling increments
/// with a geometric closure. Throws TailNotDecaying when increments do not
/// decay.
double hardy_H(const Fn& w, const Fn& v, double p, double x, double tol);

struct InfimaTriplet {
  WindowInfimum r0, q0, sigma;  // inf r, inf q, inf r^{1/p} q^{1/p'}
};

InfimaTriplet infima_triplet(const PairPtr& pair, double p,
                             const GridPolicy& policy);

/// Side limits of the coefficient q itself (for the vanishing-q and
/// q -> infinity routes).
struct CoefficientLimits {
  LimitKind q_left = LimitKind::Inconclusive;
  LimitKind q_right = LimitKind::Inconclusive;
  bool q_to_infinity = false;
};

CoefficientLimits coefficient_limits(const PairPtr& pair,
                                     const GridPolicy& policy);

enum class Functional { Mp, Apprime, M1, A, Atilde, Ip, Jnu, Kp };

struct FunctionalSpec {
  Functional kind = Functional::Mp;
  double p = 2;   // for Mp/Apprime/Ip/Kp
  double nu = 1;  // for Jnu
};

struct CriterionReport {
  std::string name;
  double p = 0;
  std::vector<double> grid;     // |x|-ascending
  std::vector<double> values;
  std::vector<double> running_sup;
  Finiteness finiteness = Finiteness::Inconclusive;
  std::optional<LimitKind> limit_at_infinity;
  double confidence = 0;
  double sup_value = 0;
  std::size_t n_failures = 0;
  bool has_divergent_points = false;
  std::vector<std::string> notes;
};

/// Doubling-grid sup scan with the stabilization/limit heuristics.
CriterionReport sup_scan(const FunctionalSpec& spec, const PairPtr& pair,
                         const GridPolicy& policy);

}  // namespace solvq
