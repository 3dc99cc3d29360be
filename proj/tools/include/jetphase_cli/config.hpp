#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jetphase/catalog.hpp"

namespace jetphase::cli {

// Exit code 2. The message names the offending field or line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exit code 3.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpacetimeSelector {
  std::string model = "minkowski";
  double k_s = 0.0;
  double k_q = 0.0;
  double q0 = 0.0;
  bool with_potential = true;
};

// X^λ = field(λ, 0) + Σ_μ field(λ, 1 + μ) x^μ, f̆ = f_breve[0] + Σ_μ f_breve[1 + μ] x^μ.
struct InlineSymmetry {
  std::string name;
  Eigen::Matrix<double, 4, 5> field = Eigen::Matrix<double, 4, 5>::Zero();
  Eigen::Matrix<double, 5, 1> f_breve = Eigen::Matrix<double, 5, 1>::Zero();
};

struct SymmetryEntry {
  std::string catalog_name;              // empty for inline entries
  std::optional<InlineSymmetry> inline_field;
};

struct InitialPoint {
  Vec4 x;
  Vec3 v;
};

struct RunConfig {
  SpacetimeSelector spacetime;
  Constants constants;
  std::vector<InitialPoint> initial_points;
  double x0_end = 0.0;
  bool has_x0_end = false;
  IntegratorOptions integrator;
  std::vector<SymmetryEntry> symmetries;  // empty means the whole catalog basis
  std::size_t probe_count = 20;
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerances;
  std::string trajectory_prefix = "trajectory";
};

// Default tolerances by name; overrides must use one of these names.
const std::map<std::string, double>& default_tolerances();

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// "name=value"
void apply_tolerance_override(RunConfig& cfg, const std::string& text);

CatalogModel build_model(const RunConfig& cfg);
std::vector<SpecialPhaseFunction> resolve_symmetries(const RunConfig& cfg, const CatalogModel& cm);

}  // namespace jetphase::cli
