#include "vqcfd/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace vqcfd {

namespace {

using json = nlohmann::ordered_json;

void ry_inplace(Amplitudes &a, std::size_t bit, double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const std::size_t n = a.size();
  for (std::size_t base = 0; base < n; base += 2 * bit) {
    for (std::size_t j = base; j < base + bit; ++j) {
      const Complex a0 = a[j], a1 = a[j + bit];
      a[j] = c * a0 - s * a1;
      a[j + bit] = s * a0 + c * a1;
    }
  }
}

void cz_inplace(Amplitudes &a, std::size_t mask) {
  for (std::size_t j = 0; j < a.size(); ++j)
    if ((j & mask) == mask)
      a[j] = -a[j];
}

} // namespace

AnsatzCircuit::AnsatzCircuit(int n_qubits, int depth, std::vector<AnsatzBlock> blocks)
    : n_qubits_(n_qubits), depth_(depth), blocks_(std::move(blocks)) {
  if (n_qubits < 2 || n_qubits > kMaxQubits)
    throw std::invalid_argument("ansatz needs 2 <= N <= 24 qubits");
  if (depth < 1)
    throw std::invalid_argument("ansatz depth must be >= 1");
  n_params_ = n_qubits + 2 * static_cast<int>(blocks_.size());
  std::vector<int> seen(static_cast<std::size_t>(n_params_), 0);
  for (int q = 0; q < n_qubits; ++q)
    seen[static_cast<std::size_t>(q)]++;
  for (const auto &b : blocks_) {
    if (b.lower < 0 || b.upper >= n_qubits || b.lower >= b.upper)
      throw std::invalid_argument("ansatz block has an invalid qubit pair");
    if (b.layer < 1 || b.layer > depth)
      throw std::invalid_argument("ansatz block layer out of range");
    for (int p : {b.param_lower, b.param_upper}) {
      if (p < 0 || p >= n_params_)
        throw std::invalid_argument("ansatz parameter index out of range");
      seen[static_cast<std::size_t>(p)]++;
    }
  }
  for (int c : seen)
    if (c != 1)
      throw std::invalid_argument("every ansatz parameter slot must be used exactly once");
}

std::vector<Gate> AnsatzCircuit::gates(std::span<const double> angles, int offset) const {
  if (static_cast<int>(angles.size()) != n_params_)
    throw std::invalid_argument("parameter vector length does not match the ansatz");
  std::vector<Gate> out;
  out.reserve(static_cast<std::size_t>(n_qubits_) + 3 * blocks_.size());
  for (int q = 0; q < n_qubits_; ++q)
    out.push_back(gates::ry(q + offset, angles[static_cast<std::size_t>(q)]));
  for (const auto &b : blocks_) {
    out.push_back(gates::cz(b.lower + offset, b.upper + offset));
    out.push_back(gates::ry(b.lower + offset, angles[static_cast<std::size_t>(b.param_lower)]));
    out.push_back(gates::ry(b.upper + offset, angles[static_cast<std::size_t>(b.param_upper)]));
  }
  return out;
}

std::string AnsatzCircuit::to_json() const {
  json j;
  j["n_qubits"] = n_qubits_;
  j["depth"] = depth_;
  j["n_params"] = n_params_;
  json initial = json::array();
  for (int q = 0; q < n_qubits_; ++q)
    initial.push_back({{"qubit", q}, {"param", q}});
  j["initial_layer"] = initial;
  json blocks = json::array();
  for (const auto &b : blocks_)
    blocks.push_back({{"layer", b.layer},
                      {"pair", {b.lower, b.upper}},
                      {"params", {b.param_lower, b.param_upper}}});
  j["blocks"] = blocks;
  return j.dump(2);
}

AnsatzCircuit AnsatzCircuit::from_json(const std::string &text) {
  const json j = json::parse(text);
  std::vector<AnsatzBlock> blocks;
  for (const auto &b : j.at("blocks"))
    blocks.push_back({b.at("layer").get<int>(), b.at("pair").at(0).get<int>(),
                      b.at("pair").at(1).get<int>(), b.at("params").at(0).get<int>(),
                      b.at("params").at(1).get<int>()});
  AnsatzCircuit c(j.at("n_qubits").get<int>(), j.at("depth").get<int>(), std::move(blocks));
  if (j.contains("n_params") && j.at("n_params").get<int>() != c.n_params())
    throw std::invalid_argument("ansatz JSON: n_params inconsistent with blocks");
  return c;
}

std::string to_json(const ParameterVector &p) {
  json j;
  j["lambda0"] = p.lambda0;
  j["angles"] = p.angles;
  return j.dump(2);
}

ParameterVector parameters_from_json(const std::string &text) {
  const json j = json::parse(text);
  ParameterVector p;
  p.lambda0 = j.at("lambda0").get<double>();
  p.angles = j.at("angles").get<std::vector<double>>();
  for (double a : p.angles)
    if (!std::isfinite(a))
      throw std::invalid_argument("parameter JSON: non-finite angle");
  return p;
}

AnsatzCircuit build_ansatz(int n_qubits, int depth) {
  if (n_qubits < 2)
    throw std::invalid_argument("build_ansatz: N must be >= 2");
  if (depth < 1)
    throw std::invalid_argument("build_ansatz: depth must be >= 1");
  std::vector<AnsatzBlock> blocks;
  int next = n_qubits;
  for (int layer = 1; layer <= depth; ++layer) {
    const int first = (layer % 2 == 1) ? 0 : 1;
    for (int q = first; q + 1 < n_qubits; q += 2) {
      blocks.push_back({layer, q, q + 1, next, next + 1});
      next += 2;
    }
  }
  return AnsatzCircuit(n_qubits, depth, std::move(blocks));
}

int full_expressivity_depth(int n_qubits) { return 1 << n_qubits; }

QuantumState prepare(const AnsatzCircuit &circuit, std::span<const double> angles) {
  if (static_cast<int>(angles.size()) != circuit.n_params())
    throw std::invalid_argument("prepare: parameter vector length does not match the ansatz");
  const int n = circuit.n_qubits();
  QuantumState psi(n);
  auto &a = psi.mutable_amplitudes();
  for (int q = 0; q < n; ++q)
    ry_inplace(a, bit_of(n, q), angles[static_cast<std::size_t>(q)]);
  for (const auto &b : circuit.blocks()) {
    const std::size_t lo = bit_of(n, b.lower), hi = bit_of(n, b.upper);
    cz_inplace(a, lo | hi);
    ry_inplace(a, lo, angles[static_cast<std::size_t>(b.param_lower)]);
    ry_inplace(a, hi, angles[static_cast<std::size_t>(b.param_upper)]);
  }
  return psi;
}

QuantumState prepare(const AnsatzCircuit &circuit, const ParameterVector &p) {
  return prepare(circuit, std::span<const double>(p.angles));
}

std::vector<double> parameter_shift_grad(std::span<const double> angles, const AngleLoss &loss,
                                         ShiftRule rule) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  constexpr double pi = std::numbers::pi;
  const double c_pi = (1.0 - std::numbers::sqrt2) / 4.0;

  std::vector<double> theta(angles.begin(), angles.end());
  auto eval_shift = [&](std::size_t i, double s) {
    const double keep = theta[i];
    theta[i] = keep + s;
    const double up = loss(theta);
    theta[i] = keep - s;
    const double down = loss(theta);
    theta[i] = keep;
    return up - down;
  };

  std::vector<double> grad(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    grad[i] = 0.5 * eval_shift(i, half_pi);
    if (rule == ShiftRule::four_term)
      grad[i] += c_pi * eval_shift(i, pi);
  }
  return grad;
}

std::vector<double> parameter_shift_grad(const AnsatzCircuit &circuit,
                                         std::span<const double> angles,
                                         const StateLoss &loss, ShiftRule rule) {
  if (static_cast<int>(angles.size()) != circuit.n_params())
    throw std::invalid_argument("parameter_shift_grad: parameter length mismatch");
  return parameter_shift_grad(
      angles, [&](std::span<const double> t) { return loss(prepare(circuit, t)); }, rule);
}

} // namespace vqcfd
