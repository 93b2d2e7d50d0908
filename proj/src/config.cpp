#include "kantorovich/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include "json.hpp"
#include <sstream>

#include "kantorovich/errors.hpp"
#include "kantorovich/potential.hpp"

namespace kantorovich {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& expected) {
  throw Error(ErrorCode::Config, "config key '" + key + "': expected " + expected);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) {
      std::string list;
      for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
      throw Error(ErrorCode::Config, "unknown config key '" + where + it.key() + "' (allowed: " + list + ")");
    }
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw Error(ErrorCode::Config, "missing config key '" + where + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(key, "a finite number");
  return x;
}

std::vector<double> number_list(const json& v, const std::string& key) {
  if (!v.is_array()) fail(key, "an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

bool boolean(const json& v, const std::string& key) {
  if (!v.is_boolean()) fail(key, "true or false");
  return v.get<bool>();
}

DensitySpec parse_side(const json& obj, const std::string& name, bool& normalize) {
  if (!obj.is_object()) fail(name, "an object {lo, hi, density}");
  const std::string where = name + ".";
  reject_unknown(obj, where, {"lo", "hi", "density"});
  const double lo = number(require(obj, where, "lo"), where + "lo");
  const double hi = number(require(obj, where, "hi"), where + "hi");
  if (!(lo < hi)) fail(where + "hi", "a value greater than " + where + "lo");

  const json& d = require(obj, where, "density");
  const std::string dw = where + "density.";
  if (!d.is_object()) fail(where + "density", "an object with a 'kind' field");
  const json& kind = require(d, dw, "kind");
  if (!kind.is_string()) fail(dw + "kind", "one of uniform, polynomial, tabulated");
  const std::string k = kind.get<std::string>();
  normalize = d.contains("normalize") && boolean(d.at("normalize"), dw + "normalize");

  if (k == "uniform") {
    reject_unknown(d, dw, {"kind", "height", "normalize"});
    const double height = d.contains("height") ? number(d.at("height"), dw + "height") : 1.0;
    return DensitySpec::uniform(lo, hi, height);
  }
  if (k == "polynomial") {
    reject_unknown(d, dw, {"kind", "coefficients", "normalize"});
    auto coeffs = number_list(require(d, dw, "coefficients"), dw + "coefficients");
    if (coeffs.empty()) fail(dw + "coefficients", "a non-empty array in increasing degree");
    return DensitySpec::polynomial(lo, hi, std::move(coeffs));
  }
  if (k == "tabulated") {
    reject_unknown(d, dw, {"kind", "nodes", "values", "normalize"});
    auto nodes = number_list(require(d, dw, "nodes"), dw + "nodes");
    auto values = number_list(require(d, dw, "values"), dw + "values");
    if (nodes.size() < 2 || nodes.size() != values.size())
      fail(dw + "values", "one value per node and at least two nodes");
    if (nodes.front() != lo || nodes.back() != hi)
      fail(dw + "nodes", "first and last node equal to " + where + "lo and " + where + "hi");
    return DensitySpec::tabulated(std::move(nodes), std::move(values));
  }
  fail(dw + "kind", "one of uniform, polynomial, tabulated (got '" + k + "')");
}

Tolerances parse_tolerances(const json& obj) {
  if (!obj.is_object()) fail("tolerances", "an object");
  reject_unknown(obj, "tolerances.", {"quad_abs_tol", "root_abs_tol", "max_quad_depth", "max_root_iters"});
  Tolerances t;
  if (obj.contains("quad_abs_tol")) t.quad_abs_tol = number(obj.at("quad_abs_tol"), "tolerances.quad_abs_tol");
  if (obj.contains("root_abs_tol")) t.root_abs_tol = number(obj.at("root_abs_tol"), "tolerances.root_abs_tol");
  auto integer = [&](const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(std::string("tolerances.") + key, "an integer");
    return v.get<int>();
  };
  if (obj.contains("max_quad_depth")) t.max_quad_depth = integer("max_quad_depth");
  if (obj.contains("max_root_iters")) t.max_root_iters = integer("max_root_iters");
  try {
    t.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, std::string("config key 'tolerances': ") + e.what());
  }
  return t;
}

RunMode parse_mode(const json& v) {
  if (v.is_string()) {
    const std::string m = v.get<std::string>();
    if (m == "solve") return RunMode::Solve;
    if (m == "sweep") return RunMode::Sweep;
    if (m == "verify") return RunMode::Verify;
    if (m == "oracle") return RunMode::Oracle;
  }
  fail("mode", "one of solve, sweep, verify, oracle");
}

}  // namespace

const char* to_string(RunMode mode) noexcept {
  switch (mode) {
    case RunMode::Solve: return "solve";
    case RunMode::Sweep: return "sweep";
    case RunMode::Verify: return "verify";
    case RunMode::Oracle: return "oracle";
  }
  return "unknown";
}

TransportProblem RunConfig::problem() const {
  Density source = make_density(omega);
  Density sink = make_density(omega_star);
  if (normalize_omega) source = normalize(source);
  if (normalize_omega_star) sink = normalize(sink);
  return make_problem(std::move(source), std::move(sink));
}

RunConfig parse_config(std::string_view text, bool allow_experimental) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Config, "config document must be a JSON object");
  reject_unknown(doc, "", {"omega", "omega_star", "k_values", "tolerances", "output", "mode", "experimental_overlap"});

  RunConfig cfg;
  cfg.omega = parse_side(require(doc, "", "omega"), "omega", cfg.normalize_omega);
  cfg.omega_star = parse_side(require(doc, "", "omega_star"), "omega_star", cfg.normalize_omega_star);
  if (doc.contains("k_values")) {
    cfg.k_values = number_list(doc.at("k_values"), "k_values");
    if (cfg.k_values.empty()) fail("k_values", "a non-empty array");
    for (std::size_t i = 0; i < cfg.k_values.size(); ++i) {
      const double k = cfg.k_values[i];
      if (k < 1.0 || k > kMaxCertifiedK) {
        std::ostringstream msg;
        msg << "values in [1, " << kMaxCertifiedK << "] (got " << k << ")";
        fail("k_values", msg.str());
      }
      if (i > 0 && !(k > cfg.k_values[i - 1]))
        throw Error(ErrorCode::Config, "config key 'k_values': k_values must be ascending");
    }
  }
  if (doc.contains("tolerances")) cfg.tolerances = parse_tolerances(doc.at("tolerances"));
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) fail("output", "a file path string");
    cfg.output = doc.at("output").get<std::string>();
  }
  if (doc.contains("mode")) cfg.mode = parse_mode(doc.at("mode"));
  cfg.experimental_overlap = allow_experimental;
  if (doc.contains("experimental_overlap"))
    cfg.experimental_overlap = boolean(doc.at("experimental_overlap"), "experimental_overlap") || allow_experimental;

  // Layout is decided by the intervals alone; catch it here so a bad config
  // fails before any density work.
  const Interval s = cfg.omega.interval;
  const Interval t = cfg.omega_star.interval;
  const bool disjoint = s.hi < t.lo || t.hi < s.lo;
  if (!disjoint && !cfg.experimental_overlap)
    throw Error(ErrorCode::Config,
                "config keys 'omega'/'omega_star': supports touch or overlap; set experimental_overlap "
                "(or pass --experimental-overlap) to run the uncertified path");
  return cfg;
}

RunConfig load_config(const std::string& path, bool allow_experimental) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), allow_experimental);
}

}  // namespace kantorovich
