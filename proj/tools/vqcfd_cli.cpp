// vqcfd: batch front end for evolution runs, adjoint sweeps, field analysis,
// operator decomposition and the acceptance suite.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vqcfd/config.hpp"
#include "vqcfd/encoding.hpp"
#include "vqcfd/evolve.hpp"
#include "vqcfd/operators.hpp"
#include "vqcfd/oracle.hpp"
#include "vqcfd/validation.hpp"

#ifndef VQCFD_VERSION
#define VQCFD_VERSION "dev"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vqcfd;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;
constexpr int kValidationError = 4;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> backend;
  std::optional<std::int64_t> shots;
  bool oracle_only = false;
};

void write_text(const fs::path &path, const std::string &text) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw std::runtime_error("cannot write " + path.string());
  os << text;
}

std::string classical_csv(const std::vector<GridFunction> &traj, double tau, bool fields) {
  std::vector<TrajectoryFrame> frames;
  for (std::size_t s = 0; s < traj.size(); ++s) {
    double norm = 0.0;
    for (double v : traj[s].values())
      norm += v * v;
    frames.push_back(TrajectoryFrame{static_cast<int>(s), static_cast<double>(s) * tau,
                                     ParameterVector{std::sqrt(norm), {}}, traj[s], 0.0, 0, {}});
  }
  return trajectory_csv(frames, fields);
}

// Applies command-line overrides, re-validating the touched values.
void apply_overrides(RunConfig &c, const Overrides &o) {
  std::vector<std::string> problems;
  if (o.seed) {
    c.evolution.seed = *o.seed;
    c.evolution.shots.seed = *o.seed;
    c.resolved["seed"] = *o.seed;
  }
  if (o.out_dir) {
    c.out_dir = *o.out_dir;
    c.resolved["output"]["dir"] = *o.out_dir;
  }
  if (o.backend) {
    try {
      c.evolution.backend = parse_backend(*o.backend);
      c.resolved["backend"]["type"] = *o.backend;
    } catch (const std::exception &e) {
      problems.push_back(e.what());
    }
  }
  if (o.shots) {
    if (*o.shots < 0)
      problems.push_back("--shots must be >= 0");
    else {
      c.evolution.shots = *o.shots > 0
                              ? ShotModel{ShotModel::Mode::sampled, *o.shots, c.evolution.seed}
                              : ShotModel::exact();
      c.resolved["backend"]["shots"] = *o.shots;
    }
  }
  if (!problems.empty())
    throw ConfigError(problems);
}

struct Prepared {
  RunConfig config;
  Grid grid;
  GridFunction initial;
};

// Everything that can fail for configuration reasons happens here, before any
// output is written.
Prepared prepare_run(const std::string &path, const Overrides &o) {
  RunConfig c = load_run_config(path);
  apply_overrides(c, o);
  const Grid grid(c.length, c.n_qubits);
  try {
    GridFunction initial = make_field(c.initial, grid, c.evolution.nu, "velocity");
    c.evolution.validate();
    check_stability(grid, c.evolution);
    if (c.terminal)
      (void)make_field(*c.terminal, grid, c.evolution.nu);
    if (c.source)
      (void)make_field(*c.source, grid, c.evolution.nu);
    return {std::move(c), grid, std::move(initial)};
  } catch (const ConfigError &) {
    throw;
  } catch (const std::exception &e) {
    throw ConfigError({e.what()});
  }
}

json base_manifest(const std::string &command, const RunConfig &c, bool oracle_only) {
  return json{{"command", command},
              {"version", VQCFD_VERSION},
              {"config", c.resolved},
              {"seeds", {{"run", c.evolution.seed}, {"shots", c.evolution.shots.seed}}},
              {"backend",
               {{"variational", oracle_only ? "none" : to_string(c.evolution.backend)},
                {"shots", c.evolution.shots.mode == ShotModel::Mode::sampled
                              ? c.evolution.shots.shots
                              : 0},
                {"oracle_only", oracle_only}}},
              {"artifacts", json::object()}};
}

json checkpoint(const EvolutionResult &r) {
  json j{{"circuit", json::parse(r.circuit.to_json())}};
  if (!r.frames.empty())
    j["final_params"] = json::parse(to_json(r.frames.back().params));
  return j;
}

void write_traces(const fs::path &dir, const std::string &prefix, const EvolutionResult &r,
                  json &manifest) {
  for (const auto &f : r.frames) {
    if (f.trace.empty())
      continue;
    const std::string name = prefix + "_trace_step_" + std::to_string(f.step) + ".csv";
    write_text(dir / name, trace_csv(f.trace));
    manifest["artifacts"][name] = {{"kind", "optimizer_trace"}, {"step", f.step}};
  }
}

int cmd_evolve(const std::string &config_path, const Overrides &o) {
  Prepared p = prepare_run(config_path, o);
  const auto &c = p.config;
  const fs::path dir = c.out_dir;
  fs::create_directories(dir);
  json manifest = base_manifest("evolve", c, o.oracle_only);

  const DenseStepper stepper(p.grid, c.evolution.nu, c.evolution.tau);
  const auto oracle = fd_trajectory(p.initial, stepper, c.evolution.steps, c.evolution.nonlinear);
  write_text(dir / "trajectory_classical.csv",
             classical_csv(oracle, c.evolution.tau, c.write_fields));
  manifest["artifacts"]["trajectory_classical.csv"] = {{"backend", "classical"}};

  int rc = kOk;
  if (!o.oracle_only) {
    const EvolutionResult run = euler_evolve(p.initial, c.evolution);
    write_text(dir / "trajectory_variational.csv", trajectory_csv(run.frames, c.write_fields));
    manifest["artifacts"]["trajectory_variational.csv"] = {
        {"backend", to_string(c.evolution.backend)}};
    write_traces(dir, "variational", run, manifest);
    json comparison = json::array();
    double max_l2 = 0.0;
    for (const auto &f : run.frames) {
      const double l2 = l2_distance(f.field, oracle[static_cast<std::size_t>(f.step)]);
      max_l2 = std::max(max_l2, l2);
      comparison.push_back({{"step", f.step}, {"time", f.time}, {"l2", l2},
                            {"residual", f.residual}});
    }
    manifest["comparison"] = {{"per_step", comparison}, {"max_l2", max_l2}};
    manifest["checkpoint"] = checkpoint(run);
    manifest["completed"] = run.completed;
    if (!run.completed) {
      manifest["failure"] = run.failure;
      std::cerr << "vqcfd: " << run.failure << "\n";
      rc = kNumericalError;
    }
    std::cout << "steps " << (run.frames.empty() ? 0 : run.frames.size() - 1) << ", max L2 vs oracle "
              << max_l2 << "\n";
  }
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  return rc;
}

int cmd_adjoint(const std::string &config_path, const Overrides &o) {
  Prepared p = prepare_run(config_path, o);
  const auto &c = p.config;
  std::optional<GridFunction> terminal, source;
  if (c.terminal)
    terminal = make_field(*c.terminal, p.grid, c.evolution.nu, "adjoint");
  if (c.source)
    source = make_field(*c.source, p.grid, c.evolution.nu, "source");
  const fs::path dir = c.out_dir;
  fs::create_directories(dir);
  json manifest = base_manifest("adjoint", c, o.oracle_only);
  manifest["adjoint"] = {{"discretization", to_string(c.discretization)}};

  const int steps = c.evolution.steps;
  const DenseStepper stepper(p.grid, c.evolution.nu, c.evolution.tau);
  const auto fwd_oracle = fd_trajectory(p.initial, stepper, steps, c.evolution.nonlinear);
  std::vector<GridFunction> adj_oracle(static_cast<std::size_t>(steps) + 1,
                                       terminal ? *terminal
                                                : GridFunction(p.grid,
                                                               std::vector<double>(p.grid.size())));
  for (int n = steps - 1; n >= 0; --n)
    adj_oracle[static_cast<std::size_t>(n)] =
        fd_adjoint_step(adj_oracle[static_cast<std::size_t>(n) + 1],
                        fwd_oracle[static_cast<std::size_t>(n)], stepper, source, c.discretization,
                        c.evolution.nonlinear);
  write_text(dir / "trajectory_classical.csv",
             classical_csv(fwd_oracle, c.evolution.tau, c.write_fields));
  write_text(dir / "adjoint_classical.csv",
             classical_csv(adj_oracle, c.evolution.tau, c.write_fields));
  manifest["artifacts"]["trajectory_classical.csv"] = {{"backend", "classical"}};
  manifest["artifacts"]["adjoint_classical.csv"] = {{"backend", "classical"}};

  int rc = kOk;
  if (!o.oracle_only) {
    const EvolutionResult fwd = euler_evolve(p.initial, c.evolution);
    write_text(dir / "trajectory_variational.csv", trajectory_csv(fwd.frames, c.write_fields));
    manifest["artifacts"]["trajectory_variational.csv"] = {
        {"backend", to_string(c.evolution.backend)}};
    manifest["checkpoint"] = {{"forward", checkpoint(fwd)}};
    if (!fwd.completed) {
      manifest["completed"] = false;
      manifest["failure"] = fwd.failure;
      std::cerr << "vqcfd: " << fwd.failure << "\n";
      write_text(dir / "manifest.json", manifest.dump(2) + "\n");
      return kNumericalError;
    }
    AdjointConfig adj{&fwd, {}, terminal, c.discretization};
    if (source)
      adj.source.push_back(*source);
    const EvolutionResult back = adjoint_euler_evolve(adj, c.evolution);
    write_text(dir / "adjoint_variational.csv", trajectory_csv(back.frames, c.write_fields));
    manifest["artifacts"]["adjoint_variational.csv"] = {
        {"backend", to_string(c.evolution.backend)}};
    write_traces(dir, "forward", fwd, manifest);
    write_traces(dir, "adjoint", back, manifest);
    json comparison = json::array();
    double max_l2 = 0.0;
    for (const auto &f : back.frames) {
      const double l2 = l2_distance(f.field, adj_oracle[static_cast<std::size_t>(f.step)]);
      max_l2 = std::max(max_l2, l2);
      comparison.push_back({{"step", f.step}, {"time", f.time}, {"l2", l2},
                            {"residual", f.residual}});
    }
    manifest["comparison"] = {{"per_step", comparison}, {"max_l2", max_l2}};
    manifest["checkpoint"]["adjoint"] = checkpoint(back);
    manifest["completed"] = back.completed;
    if (!back.completed) {
      manifest["failure"] = back.failure;
      std::cerr << "vqcfd: " << back.failure << "\n";
      rc = kNumericalError;
    }
    std::cout << "adjoint steps " << steps << ", max L2 vs oracle " << max_l2 << "\n";
  }
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  return rc;
}

int cmd_analyze(const std::string &field_path, const std::string &out_dir,
                const std::string &metric_name) {
  AccuracyMetric metric = AccuracyMetric::fidelity;
  if (metric_name == "relative_l2")
    metric = AccuracyMetric::relative_l2;
  else if (metric_name != "fidelity")
    throw ConfigError({"--metric must be fidelity or relative_l2"});
  std::optional<GridFunction> f;
  try {
    f = read_csv(field_path);
  } catch (const std::exception &e) {
    throw ConfigError({e.what()});
  }
  const EncodedField e = encode(*f);
  const int chi = chi_99(e.state, metric);
  const auto rows = chi_spectrum(e.state, Truncation{chi, 0.0});
  const fs::path dir = out_dir;
  fs::create_directories(dir);
  write_text(dir / "spectrum.csv", chi_spectrum_csv(rows));
  std::string schmidt = "bond,index,value\n";
  for (const auto &r : rows)
    for (std::size_t a = 0; a < r.schmidt.size(); ++a) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", r.schmidt[a]);
      schmidt += std::to_string(r.bond) + "," + std::to_string(a) + "," + buf + "\n";
    }
  write_text(dir / "schmidt.csv", schmidt);
  json report{{"field", field_path},
              {"n_qubits", e.state.n_qubits()},
              {"lambda0", e.lambda0},
              {"metric", metric_name},
              {"chi_99", chi},
              {"artifacts", {"spectrum.csv", "schmidt.csv"}}};
  json bonds = json::array();
  for (const auto &r : rows)
    bonds.push_back({{"bond", r.bond}, {"chi", r.chi}, {"entropy_bits", r.entropy_bits}});
  report["bonds"] = bonds;
  write_text(dir / "analysis.json", report.dump(2) + "\n");
  std::cout << "chi_99 " << chi << " over " << rows.size() << " bonds\n";
  return kOk;
}

int cmd_decompose(const std::string &name, int n, double length, const std::string &out) {
  if (n < 1 || n > kMaxPauliQubits)
    throw ConfigError({"--qubits must be in [1, " + std::to_string(kMaxPauliQubits) + "]"});
  if (!(length > 0.0))
    throw ConfigError({"--length must be > 0"});
  const double h = length / static_cast<double>(std::size_t{1} << n);
  std::optional<OperatorSpec> op;
  if (name == "identity")
    op = identity_op(n);
  else if (name == "shift_plus")
    op = shift_plus(n);
  else if (name == "nabla")
    op = nabla(n, h);
  else if (name == "laplacian")
    op = laplacian(n, h);
  else
    throw ConfigError({"--operator must be identity, shift_plus, nabla or laplacian"});
  const std::string text = pauli_sum_text(pauli_decompose(*op));
  if (out.empty())
    std::cout << text;
  else
    write_text(out, text);
  return kOk;
}

int cmd_validate(std::uint64_t seed) {
  AcceptanceOptions opts;
  opts.seed = seed;
  opts.on_result = [](const CriterionResult &r) {
    std::cout << "criterion " << r.id << (r.pass ? " PASS " : " FAIL ") << r.title << ": "
              << r.detail << " [" << r.seconds << " s]" << std::endl;
  };
  const AcceptanceReport report = run_acceptance(opts);
  std::cout << (report.passed() ? "all criteria passed" : "acceptance FAILED") << "\n";
  return report.passed() ? kOk : kValidationError;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Variational quantum CFD emulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", VQCFD_VERSION);

  Overrides o;
  std::string config_path;
  std::uint64_t seed_value = 0;
  std::string out_dir, backend;
  std::int64_t shots = 0;

  auto add_run_flags = [&](CLI::App *cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration")->required();
    cmd->add_option("--seed", seed_value, "Override the configured seed");
    cmd->add_option("--out-dir", out_dir, "Override the output directory");
    cmd->add_flag("--oracle-only", o.oracle_only, "Run the classical oracle only");
    cmd->add_option("--backend", backend, "direct or circuit")
        ->check(CLI::IsMember({"direct", "circuit"}));
    cmd->add_option("--shots", shots, "Shots per Hadamard test (0 = exact)");
  };
  auto *evolve = app.add_subcommand("evolve", "Variational Euler trajectory plus oracle");
  add_run_flags(evolve);
  auto *adjoint = app.add_subcommand("adjoint", "Forward run and backward adjoint sweep");
  add_run_flags(adjoint);

  auto *analyze = app.add_subcommand("analyze", "Schmidt spectrum and chi_99 of a field CSV");
  std::string field_path, metric = "fidelity";
  analyze->add_option("field", field_path, "CSV with header x,f")->required();
  analyze->add_option("--out-dir", out_dir, "Output directory")->default_val("analysis");
  analyze->add_option("--metric", metric, "fidelity or relative_l2");

  auto *validate = app.add_subcommand("validate", "Run the acceptance suite");
  std::uint64_t validate_seed = 7;
  validate->add_option("--seed", validate_seed, "Seed for randomized checks");

  auto *decompose = app.add_subcommand("decompose", "Pauli decomposition of an operator");
  std::string op_name = "shift_plus", out_file;
  int n_qubits = 2;
  double length = 1.0;
  decompose->add_option("--operator", op_name, "identity, shift_plus, nabla or laplacian");
  decompose->add_option("--qubits", n_qubits, "Register size");
  decompose->add_option("--length", length, "Domain length for nabla/laplacian");
  decompose->add_option("--out", out_file, "Output file (default stdout)");

  auto *schema = app.add_subcommand("schema", "Print the run configuration schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  for (auto *cmd : {evolve, adjoint}) {
    if (!cmd->parsed())
      continue;
    if (cmd->count("--seed"))
      o.seed = seed_value;
    if (cmd->count("--out-dir"))
      o.out_dir = out_dir;
    if (cmd->count("--backend"))
      o.backend = backend;
    if (cmd->count("--shots"))
      o.shots = shots;
  }

  try {
    if (evolve->parsed())
      return cmd_evolve(config_path, o);
    if (adjoint->parsed())
      return cmd_adjoint(config_path, o);
    if (analyze->parsed())
      return cmd_analyze(field_path, out_dir, metric);
    if (validate->parsed())
      return cmd_validate(validate_seed);
    if (decompose->parsed())
      return cmd_decompose(op_name, n_qubits, length, out_file);
    if (schema->parsed()) {
      std::cout << config_schema_text();
      return kOk;
    }
  } catch (const ConfigError &e) {
    std::cerr << "vqcfd: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception &e) {
    std::cerr << "vqcfd: " << e.what() << "\n";
    return kNumericalError;
  }
  return kOk;
}
