#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tricav/analysis.hpp"
#include "tricav/atom.hpp"

namespace tricav::config {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A material is either a preset name / table path, or an inline model:
//   {"model": "constant", "eps_re": 1e6, "eps_im": 0}
//   {"model": "drude", "omega_p_rad_per_s": ..., "gamma_rad_per_s": ...}
//   {"model": "phonon_lorentz", "eps_inf": ..., "omega_l_rad_per_s": ...,
//    "omega_t_rad_per_s": ..., "gamma_rad_per_s": ...}
struct MaterialSpec {
  json spec = "vacuum";

  Material build() const;
  static MaterialSpec parse(const json& j, const std::string& where);
};

struct SystemSpec {
  std::array<MaterialSpec, 3> materials{};
  CavityGeometry geometry{};
  double T1 = 300.0, T2 = 300.0, T3 = 300.0, Te = 300.0;

  ThreeSlabSystem build() const;
};

struct AtomModelSpec {
  std::string model = "rubidium";  // rubidium, static, lorentz
  double alpha0 = 0.0;
  double omega0 = 0.0;
  double gamma0 = 0.0;
  double scale = 1.0;

  AtomModel build() const;
};

struct AtomCavitySpec {
  MaterialSpec material1, material3;
  double delta1 = 0.0, delta3 = 0.0;
  double D = 0.0;
  double T1 = 300.0, T3 = 300.0, Te = 300.0;
  std::optional<double> T2;
  AtomModelSpec atom;

  AtomCavity build() const;
};

struct MapSpec {
  analysis::Grid d12, d23;
  std::optional<double> T;  // defaults to the system T1
  bool find_max = false;
  analysis::MaxSearch search{};
};

struct TeqSpec {
  analysis::Grid z2{0.0, 0.0, 1, false};
  double tol = 1e-3;
  std::optional<std::pair<double, double>> bracket;
};

struct AtomRunSpec {
  int points = 401;
  std::vector<double> D_scan;  // empty: use the cavity's D only
};

struct OutputSpec {
  std::string path;  // empty: stdout
  std::string format = "csv";  // csv or structured-text
  bool magnitude = false;       // |value| in force and pressure columns
};

struct RunConfig {
  std::optional<SystemSpec> system;
  std::optional<AtomCavitySpec> atom_cavity;
  Accuracy accuracy = default_accuracy();
  std::optional<analysis::SweepSpec> sweep;
  std::optional<MapSpec> map;
  std::optional<TeqSpec> teq;
  AtomRunSpec atom;
  OutputSpec output;

  static Accuracy default_accuracy();
};

// Parses and validates; unknown keys are errors.
RunConfig parse(const json& j);
RunConfig parse_text(const std::string& text);
RunConfig load(const std::string& path);

// Canonical form: every field written out, defaults included.
json to_json(const RunConfig& c);

// Throws ConfigError if `command` lacks the sections it needs.
void require_for(const RunConfig& c, const std::string& command);

}  // namespace tricav::config
