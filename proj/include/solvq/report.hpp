#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "solvq/classifier.hpp"
#include "solvq/coefficients.hpp"
#include "solvq/covering.hpp"
#include "solvq/criteria.hpp"

namespace solvq {

/// Reports use insertion-ordered JSON and doubles snapped to 12 significant
/// digits so identical runs emit identical bytes.
using Json = nlohmann::ordered_json;

double round_sig(double v, int digits = 12);
Json json_num(double v);
std::string csv_num(double v);

/// Coefficient spec plus run knobs, as read from a config file.
struct RunConfig {
  Json coefficient;  // {"kind": ...} object, kept verbatim for echoes
  double tol_criteria = 1e-10;
  double tol_green = 1e-8;
  double x_max = 0;  // 0: pick per pair
  int samples_per_level = 8;
  std::uint64_t seed = 0;

  static RunConfig from_json(const Json& j);
  static RunConfig from_file(const std::string& path);
  Json to_json() const;

  PairPtr make_pair() const;
  GridPolicy policy(const PairPtr& pair) const;
};

Json to_json(const SolvabilityVerdict& v);
Json to_json(const CriterionReport& r);
Json to_json(const CoveringChain& chain, const CoveringReport& verify);

void write_file(const std::string& path, const std::string& content);

}  // namespace solvq
