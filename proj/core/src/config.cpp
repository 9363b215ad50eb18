#include "splittree/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "splittree/errors.hpp"

namespace splittree {

namespace {

using nlohmann::json;

double require_positive(const json& obj, const std::string& key) {
  if (!obj.contains(key))
    throw InvalidConfig("measure config: missing key \"" + key + "\"");
  if (!obj[key].is_number())
    throw InvalidConfig("measure config: key \"" + key + "\" must be a number");
  double v = obj[key].get<double>();
  if (!(v > 0.0))
    throw InvalidConfig("measure config: key \"" + key +
                        "\" must be strictly positive");
  return v;
}

LifespanMeasure measure_from_json(const json& obj) {
  if (!obj.is_object())
    throw InvalidConfig("measure config must be a JSON object");
  if (!obj.contains("family"))
    throw InvalidConfig("measure config: missing key \"family\"");
  std::string family = obj["family"].get<std::string>();
  double b = require_positive(obj, "b");
  if (family == "exponential")
    return LifespanMeasure::exponential(require_positive(obj, "d"), b);
  if (family == "pure_birth") return LifespanMeasure::pure_birth(b);
  if (family == "gamma")
    return LifespanMeasure::gamma(require_positive(obj, "k"),
                                  require_positive(obj, "r"), b);
  if (family == "uniform")
    return LifespanMeasure::uniform_life(require_positive(obj, "c"), b);
  throw InvalidConfig("measure config: unknown family \"" + family + "\"");
}

}  // namespace

MutationContext RunConfig::context() const {
  if (!mutation_prob)
    throw InvalidConfig("mutation probability p is required (flag --p)");
  return MutationContext(require_measure(), *mutation_prob);
}

const LifespanMeasure& RunConfig::require_measure() const {
  if (!measure)
    throw InvalidConfig(
        "a lifespan measure is required (--family/--b flags or --config)");
  return *measure;
}

LifespanMeasure parse_measure_json(const std::string& json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidConfig(std::string("measure config: invalid JSON: ") +
                        e.what());
  }
  return measure_from_json(obj);
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config file: " + path);
  json obj;
  try {
    in >> obj;
  } catch (const json::parse_error& e) {
    throw InvalidConfig(std::string("config file: invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw InvalidConfig("config file must hold an object");

  if (obj.contains("measure")) cfg.measure = measure_from_json(obj["measure"]);
  if (obj.contains("p")) {
    double p = obj["p"].get<double>();
    if (!(p > 0.0 && p < 1.0))
      throw InvalidConfig("config key \"p\" must lie in (0,1)");
    cfg.mutation_prob = p;
  }
  if (obj.contains("horizon")) cfg.horizon = obj["horizon"].get<double>();
  if (obj.contains("step")) cfg.step = obj["step"].get<double>();
  if (obj.contains("seed")) cfg.seed = obj["seed"].get<std::uint64_t>();
  if (obj.contains("replicates"))
    cfg.replicates = obj["replicates"].get<std::uint64_t>();
  if (obj.contains("cap")) cfg.cap = obj["cap"].get<std::uint64_t>();
  if (obj.contains("tolerance")) cfg.tolerance = obj["tolerance"].get<double>();
  if (obj.contains("out")) cfg.output = obj["out"].get<std::string>();
}

}  // namespace splittree
