#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vqcfd/ansatz.hpp"
#include "vqcfd/config.hpp"
#include "vqcfd/encoding.hpp"
#include "vqcfd/evolve.hpp"
#include "vqcfd/operators.hpp"
#include "vqcfd/oracle.hpp"
#include "vqcfd/validation.hpp"

namespace py = pybind11;
using namespace vqcfd;

namespace {

GridFunction field(const Grid &g, const std::vector<double> &v) { return GridFunction(g, v); }

AccuracyMetric metric_of(const std::string &name) {
  if (name == "fidelity")
    return AccuracyMetric::fidelity;
  if (name == "relative_l2")
    return AccuracyMetric::relative_l2;
  throw std::invalid_argument("metric must be fidelity or relative_l2");
}

OperatorSpec named_operator(const std::string &name, int n, double h) {
  if (name == "identity")
    return identity_op(n);
  if (name == "shift_plus")
    return shift_plus(n);
  if (name == "nabla")
    return nabla(n, h);
  if (name == "laplacian")
    return laplacian(n, h);
  throw std::invalid_argument("operator must be identity, shift_plus, nabla or laplacian");
}

EvolutionConfig make_config(double nu, double tau, int steps, int depth, std::uint64_t seed,
                            bool nonlinear, const std::string &backend, std::int64_t shots,
                            const std::string &optimizer) {
  EvolutionConfig c;
  c.nu = nu;
  c.tau = tau;
  c.steps = steps;
  c.depth = depth;
  c.seed = seed;
  c.nonlinear = nonlinear;
  c.backend = parse_backend(backend);
  c.optimizer.kind = parse_optimizer(optimizer);
  if (shots > 0)
    c.shots = ShotModel::sampled(shots, seed);
  return c;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Statevector emulator for variational Burgers solvers";

  py::class_<Grid>(m, "Grid")
      .def(py::init<double, int>(), py::arg("length"), py::arg("n_qubits"))
      .def_property_readonly("length", &Grid::length)
      .def_property_readonly("n_qubits", &Grid::n_qubits)
      .def_property_readonly("size", &Grid::size)
      .def_property_readonly("spacing", &Grid::spacing)
      .def("points", &Grid::points)
      .def("__repr__", [](const Grid &g) {
        return "Grid(length=" + std::to_string(g.length()) +
               ", n_qubits=" + std::to_string(g.n_qubits()) + ")";
      });

  m.def(
      "analytic_hump",
      [](double z, double x0, double nu, double t, const Grid &g) {
        return analytic_hump(z, x0, nu, t, g).values();
      },
      py::arg("amplitude"), py::arg("position"), py::arg("nu"), py::arg("t"), py::arg("grid"));

  m.def(
      "encode",
      [](const Grid &g, const std::vector<double> &v) {
        const EncodedField e = encode(field(g, v));
        return py::make_tuple(e.lambda0, e.state.amplitudes());
      },
      py::arg("grid"), py::arg("values"), "Returns (lambda0, amplitudes).");
  m.def(
      "chi_99",
      [](const Grid &g, const std::vector<double> &v, const std::string &metric) {
        return chi_99(field(g, v), metric_of(metric));
      },
      py::arg("grid"), py::arg("values"), py::arg("metric") = "fidelity");
  m.def(
      "interscale_entropy",
      [](const Grid &g, const std::vector<double> &v, int cut) {
        return interscale_entropy(encode(field(g, v)).state, cut);
      },
      py::arg("grid"), py::arg("values"), py::arg("cut"));
  m.def(
      "schmidt_values",
      [](const Grid &g, const std::vector<double> &v, int cut) {
        return schmidt_values(encode(field(g, v)).state, cut);
      },
      py::arg("grid"), py::arg("values"), py::arg("cut"));

  py::class_<AnsatzCircuit>(m, "AnsatzCircuit")
      .def_property_readonly("n_qubits", &AnsatzCircuit::n_qubits)
      .def_property_readonly("depth", &AnsatzCircuit::depth)
      .def_property_readonly("n_params", &AnsatzCircuit::n_params)
      .def("to_json", &AnsatzCircuit::to_json);
  m.def("build_ansatz", &build_ansatz, py::arg("n_qubits"), py::arg("depth"));
  m.def("full_expressivity_depth", &full_expressivity_depth, py::arg("n_qubits"));
  m.def(
      "prepare",
      [](const AnsatzCircuit &c, const std::vector<double> &angles) {
        return prepare(c, angles).amplitudes();
      },
      py::arg("circuit"), py::arg("angles"));

  m.def(
      "operator_matrix",
      [](const std::string &name, int n, double h) {
        return Eigen::MatrixXcd(to_dense(named_operator(name, n, h)));
      },
      py::arg("name"), py::arg("n_qubits"), py::arg("h") = 1.0);
  m.def(
      "pauli_decompose",
      [](const std::string &name, int n, double h) {
        return pauli_sum_text(pauli_decompose(named_operator(name, n, h)));
      },
      py::arg("name"), py::arg("n_qubits"), py::arg("h") = 1.0,
      "Lines 'coeff_re coeff_im STRING'.");

  m.def(
      "fd_trajectory",
      [](const Grid &g, const std::vector<double> &v, double nu, double tau, int steps,
         bool nonlinear) {
        std::vector<std::vector<double>> out;
        for (const auto &f : fd_trajectory(field(g, v), DenseStepper(g, nu, tau), steps, nonlinear))
          out.push_back(f.values());
        return out;
      },
      py::arg("grid"), py::arg("values"), py::arg("nu"), py::arg("tau"), py::arg("steps"),
      py::arg("nonlinear") = true);

  py::class_<TrajectoryFrame>(m, "Frame")
      .def_readonly("step", &TrajectoryFrame::step)
      .def_readonly("time", &TrajectoryFrame::time)
      .def_readonly("residual", &TrajectoryFrame::residual)
      .def_readonly("iterations", &TrajectoryFrame::iterations)
      .def_property_readonly("lambda0", [](const TrajectoryFrame &f) { return f.params.lambda0; })
      .def_property_readonly("angles", [](const TrajectoryFrame &f) { return f.params.angles; })
      .def_property_readonly("field", [](const TrajectoryFrame &f) { return f.field.values(); });

  py::class_<EvolutionResult>(m, "Trajectory")
      .def_readonly("frames", &EvolutionResult::frames)
      .def_readonly("completed", &EvolutionResult::completed)
      .def_readonly("failure", &EvolutionResult::failure)
      .def_readonly("circuit", &EvolutionResult::circuit)
      .def("to_csv", [](const EvolutionResult &r) { return trajectory_csv(r.frames, true); });

  m.def(
      "evolve",
      [](const Grid &g, const std::vector<double> &v, double nu, double tau, int steps, int depth,
         std::uint64_t seed, bool nonlinear, const std::string &backend, std::int64_t shots,
         const std::string &optimizer) {
        const auto cfg =
            make_config(nu, tau, steps, depth, seed, nonlinear, backend, shots, optimizer);
        py::gil_scoped_release release;
        return euler_evolve(field(g, v), cfg);
      },
      py::arg("grid"), py::arg("values"), py::arg("nu"), py::arg("tau"), py::arg("steps"),
      py::arg("depth") = 0, py::arg("seed") = 1, py::arg("nonlinear") = true,
      py::arg("backend") = "direct", py::arg("shots") = 0,
      py::arg("optimizer") = "gradient_descent");

  m.def(
      "adjoint",
      [](const EvolutionResult &forward, double nu, double tau,
         std::optional<std::vector<double>> terminal, std::optional<std::vector<double>> source,
         const std::string &discretization, std::uint64_t seed, bool nonlinear) {
        if (forward.frames.empty())
          throw std::invalid_argument("adjoint: forward trajectory is empty");
        const Grid g = forward.frames.front().field.grid();
        AdjointConfig adj;
        adj.forward = &forward;
        adj.discretization = parse_adjoint_discretization(discretization);
        if (terminal)
          adj.terminal = field(g, *terminal);
        if (source)
          adj.source.push_back(field(g, *source));
        const int steps = static_cast<int>(forward.frames.size()) - 1;
        const auto cfg = make_config(nu, tau, steps, forward.circuit.depth(), seed, nonlinear,
                                     "direct", 0, "gradient_descent");
        py::gil_scoped_release release;
        return adjoint_euler_evolve(adj, cfg);
      },
      py::arg("forward"), py::arg("nu"), py::arg("tau"), py::arg("terminal") = py::none(),
      py::arg("source") = py::none(), py::arg("discretization") = "consistent",
      py::arg("seed") = 1, py::arg("nonlinear") = true);

  m.def(
      "resolve_config",
      [](const std::string &text) { return parse_run_config(text).resolved.dump(); },
      py::arg("text"), "Validates a run configuration and returns it with defaults filled in.");

  m.def(
      "run_acceptance",
      [](std::vector<int> only, std::uint64_t seed) {
        AcceptanceOptions o;
        o.only = std::move(only);
        o.seed = seed;
        AcceptanceReport r;
        {
          py::gil_scoped_release release;
          r = run_acceptance(o);
        }
        py::list out;
        for (const auto &c : r.criteria)
          out.append(py::dict(py::arg("id") = c.id, py::arg("title") = c.title,
                              py::arg("pass") = c.pass, py::arg("detail") = c.detail));
        return out;
      },
      py::arg("only") = std::vector<int>{}, py::arg("seed") = 7);

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
