#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqcfd/ansatz.hpp"
#include "vqcfd/grid.hpp"
#include "vqcfd/optimizer.hpp"
#include "vqcfd/qnpu.hpp"

namespace vqcfd {

struct EvolutionConfig {
  double nu = 0.0;
  double tau = 0.0;
  int steps = 0;
  /// Ansatz depth; 0 selects full_expressivity_depth(N).
  int depth = 0;
  OptimizerOptions optimizer;
  /// Extra random restarts tried when a start ends above the ceiling.
  int restarts = 3;
  bool warm_start = true;
  /// Largest accepted per-step residual ||lambda0 psi - g||^2.
  double acceptance_ceiling = 1e-8;
  bool nonlinear = true;
  Backend backend = Backend::direct;
  ShotModel shots;
  std::uint64_t seed = 1;
  /// Skip the hard error for tau more than 10x above the diffusion limit.
  bool allow_unstable = false;
  bool record_trace = false;

  void validate() const;
};

struct TrajectoryFrame {
  int step = 0;
  double time = 0.0;
  ParameterVector params;
  GridFunction field;
  double residual = 0.0;
  int iterations = 0;
  std::vector<TraceRow> trace;
};

struct EvolutionResult {
  AnsatzCircuit circuit;
  std::vector<TrajectoryFrame> frames;
  bool completed = true;
  std::string failure;
};

/// Raised when no start brings a step's residual under the ceiling.
class StepRejected : public std::runtime_error {
public:
  StepRejected(int step, double residual, const std::string &what);
  int step() const { return step_; }
  double residual() const { return residual_; }

private:
  int step_;
  double residual_;
};

/// Warns when tau > h^2/(2 nu) and throws when it exceeds that by 10x
/// (unless allow_unstable is set).
void check_stability(const Grid &grid, const EvolutionConfig &cfg);

AnsatzCircuit evolution_circuit(int n_qubits, const EvolutionConfig &cfg);

/// Fits lambda0 U(lambda)|0> to `f` by maximizing the overlap; frame 0.
TrajectoryFrame project_field(const AnsatzCircuit &circuit, const GridFunction &f,
                              const EvolutionConfig &cfg, int step = 0,
                              const std::vector<double> *warm = nullptr);

/// One variational Euler step from `prev`.
TrajectoryFrame optimize_step(const AnsatzCircuit &circuit, const TrajectoryFrame &prev,
                              const EvolutionConfig &cfg);

EvolutionResult euler_evolve(const GridFunction &initial, const EvolutionConfig &cfg);

struct AdjointConfig {
  /// Stored forward frames 0..K and the circuit that produced them.
  const EvolutionResult *forward = nullptr;
  /// Source S: empty (zero), one field (constant in time) or one per step
  /// 0..K-1.
  std::vector<GridFunction> source;
  /// Adjoint state at the final time; zero when absent.
  std::optional<GridFunction> terminal;
  AdjointDiscretization discretization = AdjointDiscretization::consistent;
};

/// Backward sweep phi_n = (I + tau O_adj(f_n)) phi_{n+1} + tau S_n from
/// phi_K = terminal, with f_n the stored forward frames. Frames are returned
/// in ascending step order.
EvolutionResult adjoint_euler_evolve(const AdjointConfig &adj, const EvolutionConfig &cfg);

/// `step,time,residual,iters,lambda0` plus f_0.. columns when requested.
std::string trajectory_csv(const std::vector<TrajectoryFrame> &frames, bool with_fields);

} // namespace vqcfd
