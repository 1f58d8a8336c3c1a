#include "vqcfd/qnpu.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "text_util.hpp"

namespace vqcfd {

namespace {

struct UnitaryPart {
  Complex coeff;
  std::vector<Gate> gates; // register-local qubit indices
};

std::vector<UnitaryPart> unitary_parts(const OperatorSpec &op) {
  std::vector<UnitaryPart> out;
  for (auto &t : unitary_terms(op)) {
    if (const int *p = std::get_if<int>(&t.unitary))
      out.push_back({t.coeff, shift_power_gates(op.n_qubits(), *p)});
    else
      out.push_back({t.coeff, pauli_string_gates(std::get<std::string>(t.unitary))});
  }
  return out;
}

// Unitary with first column b: a phase times a Householder reflection.
std::function<void(std::vector<Complex> &)> loader(const Amplitudes &b) {
  const double phi = std::abs(b[0]) > 0.0 ? std::arg(b[0]) : 0.0;
  const Complex phase = std::polar(1.0, phi);
  Amplitudes w(b.size());
  double wn = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    w[k] = (k == 0 ? 1.0 : 0.0) - b[k] / phase;
    wn += std::norm(w[k]);
  }
  return [w = std::move(w), wn, phase](std::vector<Complex> &v) {
    if (wn > 1e-30) {
      Complex d = 0.0;
      for (std::size_t k = 0; k < v.size(); ++k)
        d += std::conj(w[k]) * v[k];
      const Complex f = 2.0 * d / wn;
      for (std::size_t k = 0; k < v.size(); ++k)
        v[k] -= f * w[k];
    }
    for (auto &x : v)
      x *= phase;
  };
}

// Register layout for Hadamard tests: qubit 0 is the ancilla, register r
// occupies qubits [1 + r*n, 1 + (r+1)*n).
class HadamardTest {
public:
  HadamardTest(int n, int registers) : n_(n), state_(1 + registers * n) {}

  void prepare(int reg, const StateSource &src) {
    const int off = offset(reg);
    if (const auto *a = std::get_if<AnsatzSource>(&src)) {
      for (const auto &g : a->circuit.gates(a->angles, off))
        state_.apply(g.controlled_by({0}));
    } else {
      state_.apply_on_register(off, n_, {0}, loader(std::get<AmplitudeSource>(src).amplitudes));
    }
  }

  void apply_local(int reg, const std::vector<Gate> &gates) {
    const int off = offset(reg);
    for (const auto &g : gates)
      state_.apply(g.shifted(off).controlled_by({0}));
  }

  void copy_ladder(int registers) {
    for (int r = 1; r < registers; ++r)
      for (int q = 0; q < n_; ++q)
        state_.apply(gates::cnot(1 + q, offset(r) + q).controlled_by({0}));
  }

  QuantumState &state() { return state_; }

private:
  int offset(int reg) const { return 1 + reg * n_; }
  int n_;
  QuantumState state_;
};

struct CircuitChain {
  StateSource conj_source;
  std::vector<UnitaryPart> conj_parts;
  std::vector<std::vector<UnitaryPart>> factor_parts;
  std::vector<StateSource> factor_sources;
};

double read_ancilla(QuantumState &s, const ShotModel &shots, std::mt19937_64 &rng) {
  s.apply(gates::h(0));
  const double z = expectation_z(s, 0);
  if (shots.mode == ShotModel::Mode::exact)
    return z;
  const double p0 = std::clamp((1.0 + z) / 2.0, 0.0, 1.0);
  std::binomial_distribution<std::int64_t> draw(shots.shots, p0);
  const auto zeros = draw(rng);
  return 2.0 * static_cast<double>(zeros) / static_cast<double>(shots.shots) - 1.0;
}

// Returns Re or Im of <L|R> for the given unitary-part selection.
double run_test(const CircuitChain &c, int n, const std::vector<std::size_t> &pick, bool imaginary,
                const ShotModel &shots, std::mt19937_64 &rng) {
  const int m = static_cast<int>(c.factor_sources.size());
  HadamardTest t(n, m);
  auto &s = t.state();
  s.apply(gates::h(0));
  // Branch |0>: trial state and conj-side unitary on register 0.
  s.apply(gates::x(0));
  t.prepare(0, c.conj_source);
  t.apply_local(0, c.conj_parts[pick[0]].gates);
  s.apply(gates::x(0));
  // Branch |1>: factor states, their unitaries, then the CNOT copy ladder.
  for (int j = 0; j < m; ++j) {
    t.prepare(j, c.factor_sources[static_cast<std::size_t>(j)]);
    t.apply_local(j, c.factor_parts[static_cast<std::size_t>(j)][pick[static_cast<std::size_t>(j) + 1]].gates);
  }
  t.copy_ladder(m);
  if (imaginary)
    s.apply(Gate("sdg", {0}, {1.0, 0.0, 0.0, Complex{0.0, -1.0}}));
  return read_ancilla(s, shots, rng);
}

double circuit_chain_value(const CircuitChain &c, int n, const ShotModel &shots,
                           std::mt19937_64 &rng) {
  const std::size_t m = c.factor_sources.size();
  if (m == 0)
    throw std::invalid_argument("circuit backend: chain term needs at least one factor");
  if (1 + static_cast<int>(m) * n > kMaxQubits)
    throw std::invalid_argument("circuit backend: register count exceeds the statevector cap");
  std::vector<std::size_t> radix{c.conj_parts.size()};
  for (const auto &f : c.factor_parts)
    radix.push_back(f.size());
  std::vector<std::size_t> pick(radix.size(), 0);
  double total = 0.0;
  for (;;) {
    Complex coeff = std::conj(c.conj_parts[pick[0]].coeff);
    for (std::size_t j = 0; j < m; ++j)
      coeff *= c.factor_parts[j][pick[j + 1]].coeff;
    if (coeff != Complex{0.0}) {
      total += coeff.real() * run_test(c, n, pick, false, shots, rng);
      if (std::abs(coeff.imag()) > 0.0)
        total -= coeff.imag() * run_test(c, n, pick, true, shots, rng);
    }
    std::size_t d = 0;
    while (d < radix.size() && ++pick[d] == radix[d])
      pick[d++] = 0;
    if (d == radix.size())
      break;
  }
  return total;
}

void check_shots(const ShotModel &shots) {
  if (shots.mode == ShotModel::Mode::sampled && shots.shots < 1)
    throw std::invalid_argument("sampled shot model needs M >= 1");
}

void check_term(const CostTerm &term) {
  const int n = term.circuit.n_qubits();
  for (const auto &c : term.chain) {
    if (c.conj_op.n_qubits() != n)
      throw std::invalid_argument("cost term: operator register size mismatch");
    for (const auto &f : c.factors)
      if (f.op.n_qubits() != n || source_qubits(f.source) != n)
        throw std::invalid_argument("cost term: factor register size mismatch");
    if (!std::isfinite(c.weight))
      throw std::invalid_argument("cost term: non-finite weight");
  }
}

Amplitudes product_of_factors(const std::vector<Factor> &factors, std::size_t dim) {
  Amplitudes g(dim, Complex{1.0});
  for (const auto &f : factors) {
    const Amplitudes v = vqcfd::apply(f.op, materialize(f.source));
    for (std::size_t k = 0; k < dim; ++k)
      g[k] *= v[k];
  }
  return g;
}

AmplitudeSource normalized_source(const std::vector<double> &v, double &norm) {
  double sq = 0.0;
  for (double x : v)
    sq += x * x;
  norm = std::sqrt(sq);
  Amplitudes a(v.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    a[k] = v[k] / norm;
  return {std::move(a)};
}

} // namespace

Amplitudes materialize(const StateSource &source) {
  if (const auto *a = std::get_if<AnsatzSource>(&source))
    return prepare(a->circuit, a->angles).amplitudes();
  return std::get<AmplitudeSource>(source).amplitudes;
}

int source_qubits(const StateSource &source) {
  if (const auto *a = std::get_if<AnsatzSource>(&source))
    return a->circuit.n_qubits();
  const auto n = std::get<AmplitudeSource>(source).amplitudes.size();
  int q = 0;
  while ((std::size_t{1} << q) < n)
    ++q;
  if ((std::size_t{1} << q) != n)
    throw std::invalid_argument("amplitude source length must be a power of two");
  return q;
}

ShotModel ShotModel::sampled(std::int64_t shots, std::uint64_t seed) {
  if (shots < 1)
    throw std::invalid_argument("sampled shot model needs M >= 1");
  return {Mode::sampled, shots, seed};
}

Backend parse_backend(const std::string &name) {
  if (name == "direct")
    return Backend::direct;
  if (name == "circuit")
    return Backend::circuit;
  throw std::invalid_argument("unknown backend '" + name + "' (expected direct or circuit)");
}

std::string to_string(Backend b) { return b == Backend::direct ? "direct" : "circuit"; }

double overlap_bracket(const CostTerm &term, Backend backend, const ShotModel &shots) {
  check_shots(shots);
  check_term(term);
  const int n = term.circuit.n_qubits();
  if (backend == Backend::direct) {
    const QuantumState psi = prepare(term.circuit, term.angles);
    double w = 0.0;
    for (const auto &c : term.chain) {
      const Amplitudes x = vqcfd::apply(c.conj_op, psi);
      const Amplitudes g = product_of_factors(c.factors, psi.size());
      double s = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k)
        s += (std::conj(x[k]) * g[k]).real();
      w += c.weight * s;
    }
    return w;
  }

  std::mt19937_64 rng(shots.seed);
  const StateSource trial = AnsatzSource{term.circuit, term.angles};
  double w = 0.0;
  for (const auto &c : term.chain) {
    CircuitChain cc{trial, unitary_parts(c.conj_op), {}, {}};
    for (const auto &f : c.factors) {
      cc.factor_parts.push_back(unitary_parts(f.op));
      cc.factor_sources.push_back(f.source);
    }
    w += c.weight * circuit_chain_value(cc, n, shots, rng);
  }
  return w;
}

double cost(double lambda0, const CostTerm &term, Backend backend, const ShotModel &shots) {
  const double w = overlap_bracket(term, backend, shots);
  return lambda0 * lambda0 - 2.0 * lambda0 * w;
}

Lambda0Optimum optimal_lambda0(double w) { return {w, -w * w}; }

Amplitudes target_vector(const CostTerm &term) {
  check_term(term);
  const std::size_t dim = std::size_t{1} << term.circuit.n_qubits();
  Amplitudes g(dim, Complex{0.0});
  for (const auto &c : term.chain) {
    const Amplitudes prod = product_of_factors(c.factors, dim);
    const Amplitudes back = vqcfd::apply(adjoint(c.conj_op), prod);
    for (std::size_t k = 0; k < dim; ++k)
      g[k] += c.weight * back[k];
  }
  return g;
}

double residual_norm(const CostTerm &term, double lambda0) {
  const Amplitudes g = target_vector(term);
  const QuantumState psi = prepare(term.circuit, term.angles);
  double r = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    r += std::norm(lambda0 * psi[k] - g[k]);
  return r;
}

double target_norm_sq(const CostTerm &term) {
  double s = 0.0;
  for (const auto &v : target_vector(term))
    s += std::norm(v);
  return s;
}

CostTerm burgers_cost_term(const AnsatzCircuit &circuit, std::vector<double> angles,
                           const StateSource &previous, double previous_lambda0,
                           const StepPhysics &p) {
  const int n = circuit.n_qubits();
  if (source_qubits(previous) != n)
    throw std::invalid_argument("burgers_cost_term: previous state register size mismatch");
  const double l0 = previous_lambda0;
  CostTerm t{circuit, std::move(angles), {}};
  t.chain.push_back({l0, identity_op(n), {{previous, identity_op(n)}}});
  if (p.nu != 0.0)
    t.chain.push_back({l0 * p.tau * p.nu, identity_op(n), {{previous, laplacian(n, p.h)}}});
  if (p.nonlinear)
    t.chain.push_back({-l0 * l0 * p.tau,
                       identity_op(n),
                       {{previous, identity_op(n)}, {previous, nabla(n, p.h)}}});
  return t;
}

AdjointDiscretization parse_adjoint_discretization(const std::string &name) {
  if (name == "consistent")
    return AdjointDiscretization::consistent;
  if (name == "literal")
    return AdjointDiscretization::literal;
  throw std::invalid_argument("unknown adjoint discretization '" + name + "'");
}

std::string to_string(AdjointDiscretization d) {
  return d == AdjointDiscretization::consistent ? "consistent" : "literal";
}

CostTerm adjoint_cost_term(const AnsatzCircuit &circuit, std::vector<double> angles,
                           const std::optional<StateSource> &adjoint_state, double mu,
                           const StateSource &forward, double lf,
                           const std::optional<GridFunction> &source, const StepPhysics &p,
                           AdjointDiscretization disc) {
  const int n = circuit.n_qubits();
  if (source_qubits(forward) != n)
    throw std::invalid_argument("adjoint_cost_term: forward state register size mismatch");
  CostTerm t{circuit, std::move(angles), {}};
  if (adjoint_state && mu != 0.0) {
    const auto &phi = *adjoint_state;
    if (source_qubits(phi) != n)
      throw std::invalid_argument("adjoint_cost_term: adjoint state register size mismatch");
    t.chain.push_back({mu, identity_op(n), {{phi, identity_op(n)}}});
    if (p.nu != 0.0)
      t.chain.push_back({mu * p.tau * p.nu, identity_op(n), {{phi, laplacian(n, p.h)}}});
    if (p.nonlinear && lf != 0.0) {
      if (disc == AdjointDiscretization::consistent) {
        // <psi| Grad (f . phi)> = <Grad^dagger psi | f . phi>
        t.chain.push_back({mu * p.tau * lf,
                           adjoint(nabla(n, p.h)),
                           {{forward, identity_op(n)}, {phi, identity_op(n)}}});
        t.chain.push_back({-mu * p.tau * lf,
                           identity_op(n),
                           {{forward, nabla(n, p.h)}, {phi, identity_op(n)}}});
      } else {
        t.chain.push_back({mu * p.tau * lf,
                           identity_op(n),
                           {{forward, identity_op(n)}, {phi, nabla(n, p.h)}}});
      }
    }
  }
  if (source) {
    if (source->grid().n_qubits() != n)
      throw std::invalid_argument("adjoint_cost_term: source grid mismatch");
    double s_norm = 0.0;
    auto s = normalized_source(source->values(), s_norm);
    if (s_norm > 0.0)
      t.chain.push_back({p.tau * s_norm, identity_op(n), {{std::move(s), identity_op(n)}}});
  }
  return t;
}

double measure_observable(const std::vector<EncodedField> &fields, const Observable &obs,
                          const std::string &region, Backend backend, const ShotModel &shots) {
  check_shots(shots);
  if (fields.empty())
    throw std::invalid_argument("measure_observable: no fields");
  const int n = fields.front().state.n_qubits();
  for (const auto &f : fields)
    if (f.state.n_qubits() != n)
      throw std::invalid_argument("measure_observable: incompatible registers");
  auto field_at = [&](int i) -> const EncodedField & {
    if (i < 0 || i >= static_cast<int>(fields.size()))
      throw std::out_of_range("measure_observable: field index out of range");
    return fields[static_cast<std::size_t>(i)];
  };
  if (static_cast<int>(region.size()) > n)
    throw std::invalid_argument("measure_observable: region mask longer than N");
  std::size_t mask_value = 0;
  for (char ch : region) {
    if (ch != '0' && ch != '1')
      throw std::invalid_argument("measure_observable: region mask must be 0/1 characters");
    mask_value = (mask_value << 1) | static_cast<std::size_t>(ch == '1');
  }
  const int r = static_cast<int>(region.size());

  double scale = obs.weight * field_at(obs.conj_field).lambda0;
  for (const auto &[i, op] : obs.factors)
    scale *= field_at(i).lambda0;

  if (backend == Backend::direct) {
    const Amplitudes x = vqcfd::apply(obs.conj_op, field_at(obs.conj_field).state);
    Amplitudes g(x.size(), Complex{1.0});
    for (const auto &[i, op] : obs.factors) {
      const Amplitudes v = vqcfd::apply(op, field_at(i).state);
      for (std::size_t k = 0; k < g.size(); ++k)
        g[k] *= v[k];
    }
    double s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (r == 0 || (k >> (n - r)) == mask_value)
        s += (std::conj(x[k]) * g[k]).real();
    return scale * s;
  }

  // Region projector as a sum of Z strings on the masked qubits, applied on
  // the conjugated side after O_0.
  std::vector<UnitaryPart> conj_parts;
  for (const auto &base : unitary_parts(obs.conj_op)) {
    for (std::size_t subset = 0; subset < (std::size_t{1} << r); ++subset) {
      UnitaryPart part = base;
      double c = 1.0 / static_cast<double>(std::size_t{1} << r);
      for (int q = 0; q < r; ++q) {
        if (subset & (std::size_t{1} << q)) {
          part.gates.push_back(gates::z(q));
          if (region[static_cast<std::size_t>(q)] == '1')
            c = -c;
        }
      }
      part.coeff *= c;
      conj_parts.push_back(std::move(part));
    }
  }
  CircuitChain cc{AmplitudeSource{field_at(obs.conj_field).state.amplitudes()},
                  std::move(conj_parts), {}, {}};
  for (const auto &[i, op] : obs.factors) {
    cc.factor_parts.push_back(unitary_parts(op));
    cc.factor_sources.push_back(AmplitudeSource{field_at(i).state.amplitudes()});
  }
  std::mt19937_64 rng(shots.seed);
  return scale * circuit_chain_value(cc, n, shots, rng);
}

std::string trace_csv(const std::vector<TraceRow> &rows) {
  std::string out = "iter,W,lambda0,cost,residual,shots\n";
  for (const auto &r : rows)
    out += std::to_string(r.iter) + ',' + detail::fmt_double(r.w) + ',' +
           detail::fmt_double(r.lambda0) + ',' + detail::fmt_double(r.cost) + ',' +
           detail::fmt_double(r.residual) + ',' + std::to_string(r.shots) + '\n';
  return out;
}

} // namespace vqcfd
