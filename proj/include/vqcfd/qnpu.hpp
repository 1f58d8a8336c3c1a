#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vqcfd/ansatz.hpp"
#include "vqcfd/encoding.hpp"
#include "vqcfd/operators.hpp"

namespace vqcfd {

/// A fixed input state produced by an ansatz with frozen angles.
struct AnsatzSource {
  AnsatzCircuit circuit;
  std::vector<double> angles;
};

/// A fixed input state loaded from explicit (normalized) amplitudes. The
/// circuit backend loads it with a directly constructed reflection unitary.
struct AmplitudeSource {
  Amplitudes amplitudes;
};

using StateSource = std::variant<AnsatzSource, AmplitudeSource>;

Amplitudes materialize(const StateSource &source);
int source_qubits(const StateSource &source);

/// O_j f^(j): one multiplicative factor of a cost-function term.
struct Factor {
  StateSource source;
  OperatorSpec op;
};

/// weight * sum_k Re{ conj((conj_op psi)_k) * prod_j (O_j f^(j))_k }, with
/// psi the trial state U(lambda)|0>. One term of the general product form.
struct ChainTerm {
  double weight;
  OperatorSpec conj_op;
  std::vector<Factor> factors;
};

/// Everything needed to evaluate the bracket W(lambda) = sum of chain terms
/// for the trial state prepared by `circuit` at `angles`.
struct CostTerm {
  AnsatzCircuit circuit;
  std::vector<double> angles;
  std::vector<ChainTerm> chain;
};

enum class Backend { direct, circuit };

struct ShotModel {
  enum class Mode { exact, sampled };
  Mode mode = Mode::exact;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;

  static ShotModel exact() { return {}; }
  static ShotModel sampled(std::int64_t shots, std::uint64_t seed);
};

Backend parse_backend(const std::string &name);
std::string to_string(Backend b);

/// W = sum of chain terms. The direct backend does explicit vector algebra;
/// the circuit backend runs one ancilla Hadamard test per combination of
/// unitary parts (on m*N + 1 qubits for m factor registers) and combines the
/// ancilla <Z> readings with the weights.
double overlap_bracket(const CostTerm &term, Backend backend = Backend::direct,
                       const ShotModel &shots = {});

/// C = lambda0^2 - 2 lambda0 W.
double cost(double lambda0, const CostTerm &term, Backend backend = Backend::direct,
            const ShotModel &shots = {});

struct Lambda0Optimum {
  double lambda0;
  double cost_min;
};

/// Exact minimizer of lambda0^2 - 2 lambda0 W.
Lambda0Optimum optimal_lambda0(double w);

/// The vector g with W(psi) = Re<psi|g>, i.e. the right-hand side the trial
/// field lambda0 |psi> is fitted to. Direct evaluation.
Amplitudes target_vector(const CostTerm &term);

/// ||lambda0 |psi> - g||^2, computed directly.
double residual_norm(const CostTerm &term, double lambda0);

/// Squared norm of the target, the constant dropped from `cost`.
double target_norm_sq(const CostTerm &term);

/// Settings for one explicit Euler step of Burgers' equation.
struct StepPhysics {
  double nu;
  double tau;
  double h;
  bool nonlinear = true;
};

/// Chain for g = lambda~0 (I + tau (nu Lap - lambda~0 D_psi~ Grad)) psi~, where
/// psi~ is `previous` and the trial state is U(angles)|0>.
CostTerm burgers_cost_term(const AnsatzCircuit &circuit, std::vector<double> angles,
                           const StateSource &previous, double previous_lambda0,
                           const StepPhysics &physics);

enum class AdjointDiscretization {
  /// nu Lap + Grad D_f - D_{Grad f}: the exact transpose of the linearized
  /// forward Euler step, consistent with f d/dx + nu d2/dx2.
  consistent,
  /// nu Lap + D_f Grad, the literal stencil of the adjoint operator.
  literal,
};

AdjointDiscretization parse_adjoint_discretization(const std::string &name);
std::string to_string(AdjointDiscretization d);

/// Chain for one backward adjoint step
/// g = mu (I + tau O_adj(f)) phi + tau S, with phi/mu the later adjoint state,
/// f = forward_lambda0 * forward the stored primal state and S the source.
/// Either the adjoint state or the source may be absent (zero).
CostTerm adjoint_cost_term(const AnsatzCircuit &circuit, std::vector<double> angles,
                           const std::optional<StateSource> &adjoint_state,
                           double adjoint_lambda0, const StateSource &forward,
                           double forward_lambda0, const std::optional<GridFunction> &source,
                           const StepPhysics &physics, AdjointDiscretization disc);

/// F = f^(c)* (O_0 .) prod_j (O_j f^(j)) over encoded fields, summed over
/// grid points.
struct Observable {
  int conj_field = 0;
  OperatorSpec conj_op;
  std::vector<std::pair<int, OperatorSpec>> factors;
  double weight = 1.0;
};

/// Sum over k of Re F_k, including the fields' lambda0 scales. `region` is a
/// string of '0'/'1' fixing the most significant qubits; only grid indices
/// whose leading bits match contribute.
double measure_observable(const std::vector<EncodedField> &fields, const Observable &obs,
                          const std::string &region = {}, Backend backend = Backend::direct,
                          const ShotModel &shots = {});

/// One row of the optimizer trace CSV `iter,W,lambda0,cost,residual,shots`.
struct TraceRow {
  int iter;
  double w;
  double lambda0;
  double cost;
  double residual;
  std::int64_t shots;
};

std::string trace_csv(const std::vector<TraceRow> &rows);

} // namespace vqcfd
