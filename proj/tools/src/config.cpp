#include "jetphase_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace jetphase::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void only_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [k, _] : j.items())
    if (!allowed.count(k)) fail(path + "." + k, "unknown field");
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "not finite");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) fail(path, "must be positive");
  return v;
}

std::uint64_t count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != N) fail(path, "expected an array of " + std::to_string(N) + " numbers");
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v[i] = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string() || j.get<std::string>().empty()) fail(path, "expected a non-empty string");
  return j.get<std::string>();
}

SpacetimeSelector parse_spacetime(const json& j) {
  const std::string p = "spacetime";
  only_keys(j, p, {"model", "k_s", "k_q", "q0", "with_potential"});
  SpacetimeSelector s;
  if (!j.contains("model")) fail(p + ".model", "required");
  s.model = text(j["model"], p + ".model");
  if (s.model == "minkowski") {
    for (const char* k : {"k_s", "k_q", "q0", "with_potential"})
      if (j.contains(k)) fail(p + "." + k, "not a minkowski parameter");
  } else if (s.model == "reissner_nordstrom") {
    if (j.contains("k_s")) s.k_s = number(j["k_s"], p + ".k_s");
    if (j.contains("k_q")) s.k_q = number(j["k_q"], p + ".k_q");
    if (j.contains("q0")) s.q0 = number(j["q0"], p + ".q0");
    if (s.k_s < 0.0) fail(p + ".k_s", "must be >= 0");
    if (s.k_q < 0.0) fail(p + ".k_q", "must be >= 0");
    if (j.contains("with_potential")) {
      if (!j["with_potential"].is_boolean()) fail(p + ".with_potential", "expected a boolean");
      s.with_potential = j["with_potential"].get<bool>();
    }
  } else {
    fail(p + ".model", "unknown spacetime '" + s.model + "' (minkowski, reissner_nordstrom)");
  }
  return s;
}

Constants parse_constants(const json& j) {
  only_keys(j, "constants", {"m", "q", "c", "hbar"});
  Constants k;
  if (j.contains("m")) k.m = positive(j["m"], "constants.m");
  if (j.contains("q")) k.q = number(j["q"], "constants.q");
  if (j.contains("c")) k.c = positive(j["c"], "constants.c");
  if (j.contains("hbar")) k.hbar = positive(j["hbar"], "constants.hbar");
  return k;
}

IntegratorOptions parse_integrator(const json& j) {
  const std::string p = "integrator";
  only_keys(j, p, {"method", "step", "atol", "rtol", "max_steps"});
  IntegratorOptions o;
  if (j.contains("method")) {
    const std::string m = text(j["method"], p + ".method");
    if (m == "rk4") o.method = Method::rk4;
    else if (m == "rkf45") o.method = Method::rkf45;
    else fail(p + ".method", "unknown method '" + m + "' (rk4, rkf45)");
  }
  if (j.contains("step")) o.step = positive(j["step"], p + ".step");
  if (j.contains("atol")) o.atol = positive(j["atol"], p + ".atol");
  if (j.contains("rtol")) o.rtol = positive(j["rtol"], p + ".rtol");
  if (j.contains("max_steps")) {
    o.max_steps = count(j["max_steps"], p + ".max_steps");
    if (o.max_steps == 0) fail(p + ".max_steps", "must be positive");
  }
  return o;
}

SymmetryEntry parse_symmetry(const json& j, const std::string& p) {
  SymmetryEntry e;
  if (j.is_string()) {
    e.catalog_name = text(j, p);
    return e;
  }
  only_keys(j, p, {"name", "field", "f_breve"});
  InlineSymmetry s;
  if (!j.contains("name")) fail(p + ".name", "required");
  s.name = text(j["name"], p + ".name");
  if (!j.contains("field")) fail(p + ".field", "required");
  const json& f = j["field"];
  if (!f.is_array() || f.size() != 4) fail(p + ".field", "expected 4 rows of 5 coefficients");
  for (int l = 0; l < 4; ++l)
    s.field.row(l) = vec<5>(f[l], p + ".field[" + std::to_string(l) + "]").transpose();
  if (j.contains("f_breve")) s.f_breve = vec<5>(j["f_breve"], p + ".f_breve");
  e.inline_field = s;
  return e;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t = {
      {"duality", 1e-9},       {"closure", 1e-6},  {"nondegeneracy", 1e-6}, {"killing", 1e-12},
      {"em_symmetry", 1e-12},  {"lift", 1e-9},     {"self_holonomy", 1e-8}, {"homomorphism", 1e-6},
      {"momentum", 1e-8},      {"drift", 1e-8},
  };
  return t;
}

RunConfig parse_config(const std::string& txt) {
  json j;
  try {
    j = json::parse(txt);
  } catch (const json::parse_error& e) {
    throw ConfigError("line " + std::to_string(line_of(txt, e.byte)) + ": " + e.what());
  }
  only_keys(j, "config", {"spacetime", "constants", "initial_points", "x0_end", "integrator", "symmetries",
                          "probes", "tolerances", "output"});
  RunConfig cfg;
  cfg.tolerances = default_tolerances();
  if (!j.contains("spacetime")) fail("spacetime", "required");
  cfg.spacetime = parse_spacetime(j["spacetime"]);
  if (j.contains("constants")) cfg.constants = parse_constants(j["constants"]);
  if (j.contains("initial_points")) {
    const json& pts = j["initial_points"];
    if (!pts.is_array()) fail("initial_points", "expected an array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string p = "initial_points[" + std::to_string(i) + "]";
      only_keys(pts[i], p, {"x", "v"});
      if (!pts[i].contains("x")) fail(p + ".x", "required");
      if (!pts[i].contains("v")) fail(p + ".v", "required");
      cfg.initial_points.push_back({vec<4>(pts[i]["x"], p + ".x"), vec<3>(pts[i]["v"], p + ".v")});
    }
  }
  if (j.contains("x0_end")) {
    cfg.x0_end = number(j["x0_end"], "x0_end");
    cfg.has_x0_end = true;
  }
  if (j.contains("integrator")) cfg.integrator = parse_integrator(j["integrator"]);
  if (j.contains("symmetries")) {
    const json& s = j["symmetries"];
    if (!s.is_array()) fail("symmetries", "expected an array");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string p = "symmetries[" + std::to_string(i) + "]";
      SymmetryEntry e = parse_symmetry(s[i], p);
      const std::string name = e.inline_field ? e.inline_field->name : e.catalog_name;
      if (!seen.insert(name).second) fail(p, "duplicate symmetry name '" + name + "'");
      cfg.symmetries.push_back(std::move(e));
    }
  }
  if (j.contains("probes")) {
    only_keys(j["probes"], "probes", {"count", "seed"});
    if (j["probes"].contains("count")) {
      cfg.probe_count = count(j["probes"]["count"], "probes.count");
      if (cfg.probe_count == 0) fail("probes.count", "must be positive");
    }
    if (j["probes"].contains("seed")) cfg.seed = count(j["probes"]["seed"], "probes.seed");
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) fail("tolerances", "expected an object");
    for (const auto& [k, v] : t.items()) {
      if (!cfg.tolerances.count(k)) fail("tolerances." + k, "unknown tolerance");
      cfg.tolerances[k] = positive(v, "tolerances." + k);
    }
  }
  if (j.contains("output")) {
    only_keys(j["output"], "output", {"trajectory_prefix"});
    if (j["output"].contains("trajectory_prefix")) {
      cfg.trajectory_prefix = text(j["output"]["trajectory_prefix"], "output.trajectory_prefix");
      if (cfg.trajectory_prefix.find('/') != std::string::npos)
        fail("output.trajectory_prefix", "must be a plain file name prefix");
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void apply_tolerance_override(RunConfig& cfg, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("--tol " + text + ": expected name=value");
  const std::string name = text.substr(0, eq);
  if (!cfg.tolerances.count(name)) throw ConfigError("--tol " + text + ": unknown tolerance '" + name + "'");
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(text.substr(eq + 1), &used);
    if (used != text.size() - eq - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw ConfigError("--tol " + text + ": value is not a number");
  }
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("--tol " + text + ": value must be positive");
  cfg.tolerances[name] = v;
}

CatalogModel build_model(const RunConfig& cfg) {
  try {
    if (cfg.spacetime.model == "minkowski") return minkowski(cfg.constants);
    const auto& s = cfg.spacetime;
    return reissner_nordstrom(cfg.constants, s.k_s, s.k_q, s.q0, s.with_potential);
  } catch (const Error& e) {
    throw ConfigError(std::string("spacetime: ") + e.what());
  }
}

std::vector<SpecialPhaseFunction> resolve_symmetries(const RunConfig& cfg, const CatalogModel& cm) {
  if (cfg.symmetries.empty()) return cm.killing.basis;
  std::vector<SpecialPhaseFunction> out;
  for (std::size_t i = 0; i < cfg.symmetries.size(); ++i) {
    const auto& e = cfg.symmetries[i];
    if (!e.inline_field) {
      const SpecialPhaseFunction* f = cm.find_symmetry(e.catalog_name);
      if (!f) {
        std::string known;
        for (const auto& n : cm.killing.names()) known += (known.empty() ? "" : ", ") + n;
        fail("symmetries[" + std::to_string(i) + "]",
             "no symmetry '" + e.catalog_name + "' in " + cm.name + " (" + known + ")");
      }
      out.push_back(*f);
      continue;
    }
    const InlineSymmetry& s = *e.inline_field;
    SpecialPhaseFunction f;
    f.name = s.name;
    f.field = affine_field(s.name, s.field);
    const Eigen::Matrix<double, 5, 1> b = s.f_breve;
    f.f_breve.value = [b](const Vec4& x) { return b[0] + b.tail<4>().dot(x); };
    f.f_breve.gradient = [b](const Vec4&) { return Vec4(b.tail<4>()); };
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace jetphase::cli
