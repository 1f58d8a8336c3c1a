#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vqcfd/grid.hpp"
#include "vqcfd/statevector.hpp"

namespace vqcfd {

/// A field stored as lambda0 * |psi>, with |psi> normalized.
struct EncodedField {
  double lambda0;
  QuantumState state;
  Grid grid;
  std::string tag;
};

/// lambda0 = ||f||_2, a_j = f_j / lambda0. Throws on an all-zero field.
EncodedField encode(const GridFunction &f);

/// f_j = lambda0 * Re(a_j). Warns when the discarded imaginary parts exceed
/// 1e-8.
GridFunction decode(const EncodedField &e);

/// Bond truncation policy for `to_mps`. chi_max == 0 means no cap; eps is the
/// largest normalized Schmidt weight sum that may be discarded at one bond.
struct Truncation {
  int chi_max = 0;
  double eps = 0.0;
};

/// Left-canonical matrix product state. tensors[n][s] is the chi_n x chi_{n+1}
/// matrix for qubit n in local state s.
struct MpsState {
  int n_qubits = 0;
  std::vector<std::array<Eigen::MatrixXcd, 2>> tensors;
  /// Normalized Schmidt values (sum of squares 1, descending) kept at bonds
  /// 1..N-1; entry b-1 belongs to bond b.
  std::vector<std::vector<double>> schmidt;
  /// Normalized Schmidt values before truncation, same layout.
  std::vector<std::vector<double>> full_schmidt;
  /// Squared singular weight dropped at each bond, in units of the input
  /// state's norm.
  std::vector<double> discarded;

  /// chi_0 .. chi_N, with chi_0 = chi_N = 1.
  std::vector<int> bond_dims() const;
  int max_bond() const;
};

MpsState to_mps(const QuantumState &state, Truncation truncation = {});

struct MpsContraction {
  QuantumState state;
  /// 1 - ||psi||^2 of the contracted vector before renormalization.
  double norm_deficit;
};

MpsContraction mps_to_state(const MpsState &mps);

/// |<a|b>|^2 for normalized states.
double fidelity(const QuantumState &a, const QuantumState &b);

enum class AccuracyMetric {
  fidelity,    ///< |<psi_chi|psi>|^2 >= 0.99
  relative_l2, ///< ||psi - psi_chi|| <= 0.01
};

/// Smallest uniform bond cap giving a 99%-accurate truncated MPS.
int chi_99(const QuantumState &state, AccuracyMetric metric = AccuracyMetric::fidelity);
int chi_99(const GridFunction &f, AccuracyMetric metric = AccuracyMetric::fidelity);

/// Schmidt values across the cut between qubits [0, cut) and [cut, N).
std::vector<double> schmidt_values(const QuantumState &state, int cut);

/// Entanglement entropy in bits across `cut`, 1 <= cut <= N-1.
double interscale_entropy(const QuantumState &state, int cut);
double entropy_bits(const std::vector<double> &schmidt);

struct BondReport {
  int bond;
  int chi;
  double entropy_bits;
  double discarded_weight;
  std::vector<double> schmidt;
};

std::vector<BondReport> chi_spectrum(const QuantumState &state, Truncation truncation = {});

/// CSV `bond,chi,entropy_bits,discarded_weight`.
std::string chi_spectrum_csv(const std::vector<BondReport> &rows);

} // namespace vqcfd
