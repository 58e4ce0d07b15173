#include "solvq/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "solvq/errors.hpp"

namespace solvq {

double round_sig(double v, int digits) {
  if (!std::isfinite(v)) return v;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

Json json_num(double v) {
  if (!std::isfinite(v)) return Json();  // null for non-finite
  return Json(round_sig(v));
}

std::string csv_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

RunConfig RunConfig::from_json(const Json& j) {
  RunConfig cfg;
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("config: expected an object with a \"kind\" field");
  cfg.coefficient = Json::object();
  cfg.coefficient["kind"] = j.at("kind");
  for (const char* key : {"r", "q", "alpha", "beta", "gamma", "theta"})
    if (j.contains(key)) cfg.coefficient[key] = j.at(key);
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    if (t.contains("criteria")) cfg.tol_criteria = t.at("criteria").get<double>();
    if (t.contains("green")) cfg.tol_green = t.at("green").get<double>();
  }
  if (j.contains("grid")) {
    const Json& g = j.at("grid");
    if (g.contains("x_max")) cfg.x_max = g.at("x_max").get<double>();
    if (g.contains("samples_per_level"))
      cfg.samples_per_level = g.at("samples_per_level").get<int>();
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (!(cfg.tol_criteria > 0) || !(cfg.tol_green > 0))
    throw ConfigError("config: tolerances must be > 0");
  if (cfg.x_max != 0 && cfg.x_max < 8)
    throw ConfigError("config: grid.x_max must be >= 8");
  if (cfg.samples_per_level < 2)
    throw ConfigError("config: grid.samples_per_level must be >= 2");
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config: bad JSON in " + path + ": " + e.what());
  }
  return from_json(j);
}

Json RunConfig::to_json() const {
  Json j = coefficient;
  j["tolerances"] = {{"criteria", json_num(tol_criteria)},
                     {"green", json_num(tol_green)}};
  Json g = Json::object();
  if (x_max != 0) g["x_max"] = json_num(x_max);
  g["samples_per_level"] = samples_per_level;
  j["grid"] = g;
  j["seed"] = seed;
  return j;
}

PairPtr RunConfig::make_pair() const {
  const std::string kind = coefficient.at("kind").get<std::string>();
  if (kind == "constant")
    return make_constant(coefficient.at("r").get<double>(),
                         coefficient.at("q").get<double>());
  if (kind == "sine_power")
    return make_sine_power(coefficient.at("theta").get<double>());
  if (kind == "exp_osc")
    return make_exp_osc(coefficient.at("alpha").get<double>(),
                        coefficient.at("beta").get<double>(),
                        coefficient.at("gamma").get<double>());
  if (kind == "expr")
    return make_expr(coefficient.at("r").get<std::string>(),
                     coefficient.at("q").get<std::string>());
  throw ConfigError("config: unknown coefficient kind \"" + kind + "\"");
}

GridPolicy RunConfig::policy(const PairPtr& pair) const {
  GridPolicy p = GridPolicy::for_pair(pair);
  if (x_max != 0) p.x_max = x_max;
  p.samples_per_level = samples_per_level;
  p.tol_criteria = tol_criteria;
  p.tol_green = tol_green;
  return p;
}

Json to_json(const SolvabilityVerdict& v) {
  Json j = Json::object();
  j["space"] = v.space.label();
  j["decision"] = to_string(v.decision);
  j["route"] = v.route;
  j["mode"] = to_string(v.mode);
  Json ev = Json::array();
  for (const auto& e : v.evidence) {
    Json je = Json::object();
    je["name"] = e.name;
    je["status"] = e.status;
    je["value"] = json_num(e.value);
    je["confidence"] = json_num(e.confidence);
    ev.push_back(je);
  }
  j["evidence"] = ev;
  j["caveats"] = v.caveats;
  return j;
}

Json to_json(const CriterionReport& r) {
  Json j = Json::object();
  j["name"] = r.name;
  j["p"] = json_num(r.p);
  j["sup"] = json_num(r.sup_value);
  j["finiteness"] = to_string(r.finiteness);
  j["limit_at_infinity"] =
      r.limit_at_infinity ? Json(to_string(*r.limit_at_infinity)) : Json();
  j["confidence"] = json_num(r.confidence);
  j["n_failures"] = r.n_failures;
  j["has_divergent_points"] = r.has_divergent_points;
  Json grid = Json::array(), values = Json::array(), sups = Json::array();
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    grid.push_back(json_num(r.grid[i]));
    values.push_back(json_num(r.values[i]));
    sups.push_back(json_num(r.running_sup[i]));
  }
  j["grid"] = grid;
  j["values"] = values;
  j["running_sup"] = sups;
  j["notes"] = r.notes;
  return j;
}

Json to_json(const CoveringChain& chain, const CoveringReport& verify) {
  Json j = Json::object();
  j["origin"] = json_num(chain.origin);
  j["direction"] =
      chain.direction == Direction::Rightward ? "rightward" : "leftward";
  j["kappa"] = chain.kappa_is_d ? "d" : "user";
  Json segs = Json::array();
  for (const auto& s : chain.segments) {
    Json js = Json::object();
    js["center"] = json_num(s.center);
    js["half_width"] = json_num(s.half_width);
    js["lo"] = json_num(s.lo);
    js["hi"] = json_num(s.hi);
    js["mass"] = json_num(s.mass);
    js["mass_err"] = json_num(s.mass_err);
    segs.push_back(js);
  }
  j["segments"] = segs;
  Json v = Json::object();
  v["n_segments"] = verify.n_segments;
  v["max_mass_deviation"] = json_num(verify.max_mass_deviation);
  v["max_accum_violation"] = json_num(verify.max_accum_violation);
  v["max_abutment_gap"] = json_num(verify.max_abutment_gap);
  j["verify"] = v;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

}  // namespace solvq
