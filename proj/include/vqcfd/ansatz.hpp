#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vqcfd/statevector.hpp"

namespace vqcfd {

/// One two-qubit box of the brick wall: CZ(lower, upper) followed by
/// Ry(theta[param_lower]) on `lower` and Ry(theta[param_upper]) on `upper`.
struct AnsatzBlock {
  int layer; ///< 1-based
  int lower;
  int upper;
  int param_lower;
  int param_upper;
  bool operator==(const AnsatzBlock &) const = default;
};

/// Brick-wall circuit U(theta): an initial Ry layer on every qubit (parameters
/// 0..N-1), then `depth` layers alternating pairs (0,1),(2,3),... and
/// (1,2),(3,4),...
class AnsatzCircuit {
public:
  AnsatzCircuit(int n_qubits, int depth, std::vector<AnsatzBlock> blocks);

  int n_qubits() const { return n_qubits_; }
  int depth() const { return depth_; }
  int n_params() const { return n_params_; }
  const std::vector<AnsatzBlock> &blocks() const { return blocks_; }

  /// Gate list in application order, with qubits shifted by `offset`.
  std::vector<Gate> gates(std::span<const double> angles, int offset = 0) const;

  std::string to_json() const;
  static AnsatzCircuit from_json(const std::string &text);

  bool operator==(const AnsatzCircuit &) const = default;

private:
  int n_qubits_;
  int depth_;
  std::vector<AnsatzBlock> blocks_;
  int n_params_;
};

struct ParameterVector {
  double lambda0 = 1.0;
  std::vector<double> angles;
};

std::string to_json(const ParameterVector &p);
ParameterVector parameters_from_json(const std::string &text);

AnsatzCircuit build_ansatz(int n_qubits, int depth);

/// Depth 2^N, used for runs that must be able to reach any real target state.
int full_expressivity_depth(int n_qubits);

/// U(theta)|0...0>.
QuantumState prepare(const AnsatzCircuit &circuit, std::span<const double> angles);
QuantumState prepare(const AnsatzCircuit &circuit, const ParameterVector &p);

enum class ShiftRule {
  /// [L(t + pi/2) - L(t - pi/2)] / 2. Exact for expectation-value losses
  /// (quadratic forms in the amplitudes).
  two_term,
  /// Combines shifts pi/2 and pi; exact for any loss that is a polynomial of
  /// degree <= 2 in the amplitudes, including plain overlaps.
  four_term,
};

using StateLoss = std::function<double(const QuantumState &)>;
using AngleLoss = std::function<double(std::span<const double>)>;

/// Shift-rule gradient of a loss given directly as a function of the angles,
/// e.g. one evaluated by Hadamard tests.
std::vector<double> parameter_shift_grad(std::span<const double> angles, const AngleLoss &loss,
                                         ShiftRule rule = ShiftRule::two_term);

std::vector<double> parameter_shift_grad(const AnsatzCircuit &circuit,
                                         std::span<const double> angles,
                                         const StateLoss &loss,
                                         ShiftRule rule = ShiftRule::two_term);

} // namespace vqcfd
