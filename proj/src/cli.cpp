#include "solvq/cli.hpp"

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "solvq/errors.hpp"
#include "solvq/expression.hpp"
#include "solvq/green.hpp"
#include "solvq/report.hpp"

namespace solvq {

namespace {

constexpr const char* kSchema = "solvq/1";

void emit(const std::string& out_path, const Json& j) {
  std::string text = j.dump(1) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

void emit_csv(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i)
    xs[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0);
  return xs;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"solvq: correct-solvability criteria and the explicit "
               "solution operator for -r y' + q y = f with vanishing "
               "boundary values"};
  app.require_subcommand(1);

  std::string config_path, out_path, space_str = "L2", functional = "Mp";
  std::string f_expr = "exp(-x*x)", direction = "right";
  double p = 2.0, alpha = 0.0, beta = 1.0, gamma = 2.0;
  double xmin = -20.0, xmax = 20.0, at_x = 0.0;
  double tol_criteria = 0.0, tol_green = 0.0;
  double policy_x_max = 0.0;
  int n_points = 401, n_segments = 20, n_samples = 200;
  std::uint64_t seed = 0;
  bool strict = false, cross_check = false;

  app.add_flag("--strict", strict,
               "exit 2 when the only verdicts are Inconclusive");

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config)
      sub->add_option("--config", config_path, "coefficient config (JSON)")
          ->required();
    sub->add_option("--out", out_path, "output path (default: stdout)");
    sub->add_option("--tol-criteria", tol_criteria,
                    "absolute tolerance for criterion functionals");
    sub->add_option("--tol-green", tol_green,
                    "absolute tolerance for solution-operator quadrature");
    sub->add_option("--x-max", policy_x_max, "scan reach override");
  };

  CLI::App* c_classify = app.add_subcommand("classify", "numeric verdict");
  add_common(c_classify, true);
  c_classify->add_option("--space", space_str, "L1, L<p>, or C")->required();

  CLI::App* c_ex8 = app.add_subcommand(
      "example8", "closed-form verdict for r=e^{a|x|}, q=e^{b|x|}(1+cos e^{g|x|})");
  c_ex8->add_option("--alpha", alpha)->required();
  c_ex8->add_option("--beta", beta)->required();
  c_ex8->add_option("--gamma", gamma)->required();
  c_ex8->add_option("--space", space_str)->required();
  c_ex8->add_option("--p", p, "exponent for Lp spaces");
  c_ex8->add_flag("--cross-check", cross_check,
                  "also run the numeric classifier and compare");
  c_ex8->add_option("--out", out_path);
  c_ex8->add_option("--x-max", policy_x_max);

  CLI::App* c_dscan = app.add_subcommand("d-scan", "localization scan (CSV)");
  add_common(c_dscan, true);
  c_dscan->add_option("--xmin", xmin);
  c_dscan->add_option("--xmax", xmax);
  c_dscan->add_option("--n", n_points);

  CLI::App* c_criteria =
      app.add_subcommand("criteria", "sup scan of one criterion functional");
  add_common(c_criteria, true);
  c_criteria->add_option("--p", p);
  c_criteria->add_option("--functional", functional,
                         "Mp|Apprime|M1|A|Atilde|Ip|Jnu|Kp");

  CLI::App* c_covering = app.add_subcommand("covering", "build and verify a chain");
  add_common(c_covering, true);
  c_covering->add_option("--x", at_x, "origin");
  c_covering->add_option("--n", n_segments, "segments");
  c_covering->add_option("--direction", direction, "right|left");

  CLI::App* c_solve = app.add_subcommand("solve", "apply the solution operator");
  add_common(c_solve, true);
  c_solve->add_option("--f", f_expr, "forcing as an expression in x");
  c_solve->add_option("--xmin", xmin);
  c_solve->add_option("--xmax", xmax);
  c_solve->add_option("--n", n_points);

  CLI::App* c_norms = app.add_subcommand("norms", "empirical norm bracket");
  add_common(c_norms, true);
  c_norms->add_option("--p", p, "1 <= p < inf, or 0 for the sup norm");
  c_norms->add_option("--samples", n_samples);
  c_norms->add_option("--seed", seed);

  std::vector<std::string> argv(args);
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunConfig cfg;
    PairPtr pair;
    if (!config_path.empty()) {
      cfg = RunConfig::from_file(config_path);
      if (tol_criteria > 0) cfg.tol_criteria = tol_criteria;
      if (tol_green > 0) cfg.tol_green = tol_green;
      if (policy_x_max > 0) cfg.x_max = policy_x_max;
      pair = cfg.make_pair();
    }

    if (*c_classify) {
      Space space = parse_space(space_str);
      SolvabilityVerdict v = classify(pair, space, cfg.policy(pair));
      Json j = Json::object();
      j["schema"] = kSchema;
      j["command"] = "classify";
      j["config"] = cfg.to_json();
      Json jv = to_json(v);
      for (auto& [key, val] : jv.items()) j[key] = val;
      emit(out_path, j);
      return strict && v.decision == Decision::Inconclusive ? 2 : 0;
    }

    if (*c_ex8) {
      Space space = space_str == "C" ? Space::C()
                    : space_str == "L1" ? Space::L1()
                                        : Space::Lp(space_str == "L2" ? 2.0 : p);
      if (space_str != "C" && space_str != "L1" && space_str != "L2")
        space = parse_space(space_str);
      SolvabilityVerdict v = classify_example8(alpha, beta, gamma, space);
      Json j = Json::object();
      j["schema"] = kSchema;
      j["command"] = "example8";
      j["alpha"] = json_num(alpha);
      j["beta"] = json_num(beta);
      j["gamma"] = json_num(gamma);
      j["space"] = space.label();
      j["decision"] = to_string(v.decision);
      j["route"] = v.route;
      j["mode"] = to_string(v.mode);
      j["caveats"] = v.caveats;
      bool inconclusive_only = v.decision == Decision::Inconclusive;
      if (cross_check) {
        PairPtr ex_pair = make_exp_osc(alpha, beta, gamma);
        GridPolicy policy = GridPolicy::for_pair(ex_pair);
        if (policy_x_max > 0) policy.x_max = policy_x_max;
        CrossCheckReport rep =
            cross_check_example8(alpha, beta, gamma, space, policy);
        j["numeric"] = to_json(rep.numeric);
        j["agree"] = rep.agree;
        j["conflict"] = rep.conflict;
      }
      emit(out_path, j);
      return strict && inconclusive_only ? 2 : 0;
    }

    if (*c_dscan) {
      LocalizationProfile prof =
          scan_d(pair, linspace(xmin, xmax, n_points), cfg.tol_criteria);
      std::ostringstream csv;
      csv << "x,d,residual\n";
      for (const auto& s : prof.samples)
        csv << csv_num(s.x) << "," << csv_num(s.d) << "," << csv_num(s.residual)
            << "\n";
      emit_csv(out_path, csv.str());
      return 0;
    }

    if (*c_criteria) {
      FunctionalSpec spec;
      spec.p = p;
      if (functional == "Mp") spec.kind = Functional::Mp;
      else if (functional == "Apprime") spec.kind = Functional::Apprime;
      else if (functional == "M1") spec.kind = Functional::M1;
      else if (functional == "A") spec.kind = Functional::A;
      else if (functional == "Atilde") spec.kind = Functional::Atilde;
      else if (functional == "Ip") spec.kind = Functional::Ip;
      else if (functional == "Jnu") spec.kind = Functional::Jnu;
      else if (functional == "Kp") spec.kind = Functional::Kp;
      else throw ConfigError("unknown functional \"" + functional + "\"");
      CriterionReport rep = sup_scan(spec, pair, cfg.policy(pair));
      Json j = Json::object();
      j["schema"] = kSchema;
      j["command"] = "criteria";
      j["config"] = cfg.to_json();
      j["report"] = to_json(rep);
      emit(out_path, j);
      return 0;
    }

    if (*c_covering) {
      Direction dir =
          direction == "left" ? Direction::Leftward : Direction::Rightward;
      CoveringChain chain =
          build_d_covering(pair, at_x, dir, n_segments, cfg.tol_criteria);
      CoveringReport verify = verify_covering(chain);
      Json j = Json::object();
      j["schema"] = kSchema;
      j["command"] = "covering";
      j["config"] = cfg.to_json();
      Json jc = to_json(chain, verify);
      for (auto& [key, val] : jc.items()) j[key] = val;
      emit(out_path, j);
      return 0;
    }

    if (*c_solve) {
      Fn f = parse_expression(f_expr);
      SolutionCurve curve = solve_on_grid(pair, f, linspace(xmin, xmax, n_points),
                                          cfg.tol_green, f_expr);
      std::ostringstream csv;
      csv << "x,y,err\n";
      for (std::size_t i = 0; i < curve.xs.size(); ++i)
        csv << csv_num(curve.xs[i]) << "," << csv_num(curve.ys[i]) << ","
            << csv_num(curve.per_point_error[i]) << "\n";
      emit_csv(out_path, csv.str());
      return 0;
    }

    if (*c_norms) {
      NormBracket nb = norm_bracket(pair, p, n_samples, seed, cfg.tol_green,
                                    cfg.policy(pair));
      Json j = Json::object();
      j["schema"] = kSchema;
      j["command"] = "norms";
      j["config"] = cfg.to_json();
      j["p"] = json_num(p);
      j["samples"] = n_samples;
      j["seed"] = seed;
      j["lower_empirical"] = json_num(nb.lower_empirical);
      j["upper_bound"] = json_num(nb.upper_bound);
      j["M_value"] = json_num(nb.M_value);
      j["kappa"] = json_num(nb.kappa);
      j["contained"] = nb.contained;
      emit(out_path, j);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "solvq: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "solvq: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace solvq
