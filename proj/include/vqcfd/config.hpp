#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "vqcfd/evolve.hpp"
#include "vqcfd/grid.hpp"

namespace vqcfd {

/// Schema violation in a run configuration. Carries every problem found.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string> &problems() const { return problems_; }

private:
  std::vector<std::string> problems_;
};

/// Initial, terminal or source field description.
struct FieldSpec {
  /// hump | sine | constant | csv
  std::string type = "hump";
  double amplitude = 1.0;
  double position = 0.5;
  double t0 = 1.0;
  /// Viscosity used by the hump profile; the physics viscosity when absent.
  std::optional<double> nu;
  int mode = 1;
  double value = 0.0;
  std::string path;
};

GridFunction make_field(const FieldSpec &spec, const Grid &grid, double physics_nu,
                        const std::string &tag = {});

struct RunConfig {
  double length = 1.0;
  int n_qubits = 5;
  EvolutionConfig evolution;
  FieldSpec initial;
  std::optional<FieldSpec> terminal;
  std::optional<FieldSpec> source;
  AdjointDiscretization discretization = AdjointDiscretization::consistent;
  std::string out_dir = "out";
  bool write_fields = true;
  /// Config with every default filled in, embedded in run manifests.
  nlohmann::json resolved;
};

/// Validates against the schema (unknown keys, types, ranges) and throws
/// ConfigError listing all violations.
RunConfig parse_run_config(const std::string &text);
RunConfig load_run_config(const std::string &path);

/// Schema description printed by the CLI.
std::string config_schema_text();

} // namespace vqcfd
