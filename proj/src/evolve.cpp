#include "vqcfd/evolve.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "text_util.hpp"
#include "vqcfd/diagnostics.hpp"

namespace vqcfd {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return splitmix(a ^ splitmix(b)); }

struct FitOutcome {
  std::vector<double> angles;
  double lambda0 = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::vector<TraceRow> trace;
};

GridFunction field_of(const Grid &grid, double lambda0, const QuantumState &psi,
                      const std::string &tag) {
  std::vector<double> v(psi.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = lambda0 * psi[k].real();
  return GridFunction(grid, std::move(v), tag);
}

// Maximizes W(theta)^2 for the bracket of `term` (angles ignored) and returns
// the best fit over the warm start and random restarts.
FitOutcome fit(const CostTerm &term, const EvolutionConfig &cfg, int step,
               const std::vector<double> *warm) {
  const AnsatzCircuit &circuit = term.circuit;
  const std::size_t p = static_cast<std::size_t>(circuit.n_params());
  const Amplitudes g = target_vector(term);
  double g_sq = 0.0;
  for (const auto &v : g)
    g_sq += std::norm(v);

  FitOutcome best;
  if (g_sq == 0.0) {
    best.angles = warm ? *warm : std::vector<double>(p, 0.0);
    return best;
  }

  std::uint64_t evals = 0;
  auto w_of = [&](std::span<const double> theta) -> double {
    if (cfg.backend == Backend::direct) {
      const QuantumState psi = prepare(circuit, theta);
      double s = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k)
        s += (std::conj(psi[k]) * g[k]).real();
      return s;
    }
    CostTerm t = term;
    t.angles.assign(theta.begin(), theta.end());
    ShotModel shots = cfg.shots;
    shots.seed = mix(mix(cfg.seed, static_cast<std::uint64_t>(step)), evals++);
    return overlap_bracket(t, Backend::circuit, shots);
  };
  auto residual_of = [&](std::span<const double> theta, double lambda0) {
    const QuantumState psi = prepare(circuit, theta);
    double r = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
      r += std::norm(lambda0 * psi[k] - g[k]);
    return r;
  };

  const Objective objective = [&](std::span<const double> theta) {
    const double w = w_of(theta);
    return -w * w;
  };
  const GradientFn gradient = [&](std::span<const double> theta) {
    return parameter_shift_grad(theta, objective, ShiftRule::two_term);
  };

  std::mt19937_64 rng(mix(cfg.seed ^ 0x5eedULL, static_cast<std::uint64_t>(step)));
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  auto random_start = [&] {
    std::vector<double> x(p);
    for (auto &v : x)
      v = angle(rng);
    return x;
  };

  best.residual = std::numeric_limits<double>::infinity();
  const int attempts = 1 + std::max(0, cfg.restarts);
  int iter_offset = 0;
  for (int a = 0; a < attempts; ++a) {
    std::vector<double> x0 = (a == 0 && warm && cfg.warm_start) ? *warm : random_start();
    std::vector<TraceRow> trace;
    IterationCallback cb;
    if (cfg.record_trace) {
      cb = [&](int it, std::span<const double> x, double) {
        const double w = w_of(x);
        trace.push_back({iter_offset + it, w, w, -w * w, residual_of(x, w),
                         cfg.shots.mode == ShotModel::Mode::sampled ? cfg.shots.shots : 0});
      };
    }
    const OptimizeResult r = minimize(objective, gradient, std::move(x0), cfg.optimizer, cb);
    iter_offset += r.iterations;
    // lambda0 from the exact bracket so the stored field does not carry shot noise.
    double w = 0.0;
    {
      const QuantumState psi = prepare(circuit, r.x);
      for (std::size_t k = 0; k < g.size(); ++k)
        w += (std::conj(psi[k]) * g[k]).real();
    }
    const double lambda0 = optimal_lambda0(w).lambda0;
    const double res = residual_of(r.x, lambda0);
    best.iterations += r.iterations;
    best.trace.insert(best.trace.end(), trace.begin(), trace.end());
    if (res < best.residual) {
      best.residual = res;
      best.angles = r.x;
      best.lambda0 = lambda0;
    }
    if (best.residual <= cfg.acceptance_ceiling)
      break;
  }
  return best;
}

TrajectoryFrame make_frame(const AnsatzCircuit &circuit, const Grid &grid, int step, double tau,
                           FitOutcome fit, const std::string &tag) {
  const QuantumState psi = prepare(circuit, fit.angles);
  GridFunction field = field_of(grid, fit.lambda0, psi, tag);
  return TrajectoryFrame{step,
                         step * tau,
                         ParameterVector{fit.lambda0, std::move(fit.angles)},
                         std::move(field),
                         fit.residual,
                         fit.iterations,
                         std::move(fit.trace)};
}

void require_accepted(const TrajectoryFrame &frame, const EvolutionConfig &cfg,
                      const std::string &what) {
  if (!(frame.residual <= cfg.acceptance_ceiling)) {
    std::ostringstream msg;
    msg << what << " at step " << frame.step << ": residual " << frame.residual
        << " above acceptance ceiling " << cfg.acceptance_ceiling << " after "
        << 1 + cfg.restarts << " start(s), " << frame.iterations << " iterations";
    throw StepRejected(frame.step, frame.residual, msg.str());
  }
}

StateSource source_of(const AnsatzCircuit &circuit, const ParameterVector &p) {
  return AnsatzSource{circuit, p.angles};
}

} // namespace

StepRejected::StepRejected(int step, double residual, const std::string &what)
    : std::runtime_error(what), step_(step), residual_(residual) {}

void EvolutionConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("evolution: tau must be > 0");
  if (!(nu >= 0.0) || !std::isfinite(nu))
    throw std::invalid_argument("evolution: nu must be >= 0");
  if (steps < 0)
    throw std::invalid_argument("evolution: step count must be >= 0");
  if (depth < 0)
    throw std::invalid_argument("evolution: depth must be >= 0");
  if (!(optimizer.tol > 0.0))
    throw std::invalid_argument("evolution: tolerance must be > 0");
  if (optimizer.max_iters < 1)
    throw std::invalid_argument("evolution: iteration cap must be >= 1");
  if (restarts < 0)
    throw std::invalid_argument("evolution: restarts must be >= 0");
  if (!(acceptance_ceiling > 0.0))
    throw std::invalid_argument("evolution: acceptance ceiling must be > 0");
  if (shots.mode == ShotModel::Mode::sampled && shots.shots < 1)
    throw std::invalid_argument("evolution: sampled shot model needs M >= 1");
}

void check_stability(const Grid &grid, const EvolutionConfig &cfg) {
  if (cfg.nu <= 0.0)
    return;
  const double h = grid.spacing();
  const double limit = h * h / (2.0 * cfg.nu);
  if (cfg.tau <= limit)
    return;
  std::ostringstream msg;
  msg << "tau = " << cfg.tau << " exceeds the explicit diffusion limit h^2/(2 nu) = " << limit;
  if (cfg.tau > 10.0 * limit && !cfg.allow_unstable)
    throw std::invalid_argument(msg.str() + " by more than 10x");
  warn(msg.str());
}

AnsatzCircuit evolution_circuit(int n_qubits, const EvolutionConfig &cfg) {
  return build_ansatz(n_qubits, cfg.depth > 0 ? cfg.depth : full_expressivity_depth(n_qubits));
}

TrajectoryFrame project_field(const AnsatzCircuit &circuit, const GridFunction &f,
                              const EvolutionConfig &cfg, int step,
                              const std::vector<double> *warm) {
  if (f.grid().n_qubits() != circuit.n_qubits())
    throw std::invalid_argument("project_field: grid and circuit sizes differ");
  const int n = circuit.n_qubits();
  CostTerm term{circuit, std::vector<double>(static_cast<std::size_t>(circuit.n_params())), {}};
  double norm = 0.0;
  for (double v : f.values())
    norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    Amplitudes a(f.size());
    for (std::size_t k = 0; k < a.size(); ++k)
      a[k] = f[k] / norm;
    term.chain.push_back({norm, identity_op(n), {{AmplitudeSource{std::move(a)}, identity_op(n)}}});
  }
  return make_frame(circuit, f.grid(), step, cfg.tau, fit(term, cfg, step, warm), f.tag());
}

TrajectoryFrame optimize_step(const AnsatzCircuit &circuit, const TrajectoryFrame &prev,
                              const EvolutionConfig &cfg) {
  const Grid &grid = prev.field.grid();
  if (grid.n_qubits() != circuit.n_qubits())
    throw std::invalid_argument("optimize_step: frame and circuit sizes differ");
  const StepPhysics physics{cfg.nu, cfg.tau, grid.spacing(), cfg.nonlinear};
  const CostTerm term = burgers_cost_term(circuit, prev.params.angles,
                                          source_of(circuit, prev.params), prev.params.lambda0,
                                          physics);
  const int step = prev.step + 1;
  return make_frame(circuit, grid, step, cfg.tau, fit(term, cfg, step, &prev.params.angles),
                    prev.field.tag());
}

EvolutionResult euler_evolve(const GridFunction &initial, const EvolutionConfig &cfg) {
  cfg.validate();
  check_stability(initial.grid(), cfg);
  EvolutionResult out{evolution_circuit(initial.grid().n_qubits(), cfg), {}, true, {}};
  try {
    out.frames.push_back(project_field(out.circuit, initial, cfg, 0));
    require_accepted(out.frames.back(), cfg, "initial projection rejected");
    for (int s = 0; s < cfg.steps; ++s) {
      out.frames.push_back(optimize_step(out.circuit, out.frames.back(), cfg));
      require_accepted(out.frames.back(), cfg, "step rejected");
    }
  } catch (const StepRejected &e) {
    out.completed = false;
    out.failure = e.what();
  }
  return out;
}

EvolutionResult adjoint_euler_evolve(const AdjointConfig &adj, const EvolutionConfig &cfg) {
  cfg.validate();
  if (!adj.forward || adj.forward->frames.empty())
    throw std::invalid_argument("adjoint: forward trajectory is missing");
  const auto &fwd = *adj.forward;
  const AnsatzCircuit &circuit = fwd.circuit;
  const int k_final = cfg.steps;
  if (static_cast<int>(fwd.frames.size()) < k_final + 1)
    throw std::invalid_argument("adjoint: forward trajectory lacks frame " +
                                std::to_string(static_cast<int>(fwd.frames.size())) +
                                " needed for " + std::to_string(k_final) + " steps");
  for (int n = 0; n <= k_final; ++n)
    if (fwd.frames[static_cast<std::size_t>(n)].step != n)
      throw std::invalid_argument("adjoint: forward frame " + std::to_string(n) + " missing");
  const Grid &grid = fwd.frames.front().field.grid();
  if (!adj.source.empty() && adj.source.size() != 1 &&
      static_cast<int>(adj.source.size()) != k_final)
    throw std::invalid_argument("adjoint: source must be empty, constant or one per step");
  for (const auto &s : adj.source)
    if (s.grid() != grid)
      throw std::invalid_argument("adjoint: source grid mismatch");
  if (adj.terminal && adj.terminal->grid() != grid)
    throw std::invalid_argument("adjoint: terminal grid mismatch");
  check_stability(grid, cfg);

  EvolutionResult out{circuit, {}, true, {}};
  std::vector<TrajectoryFrame> backward;
  try {
    if (adj.terminal) {
      backward.push_back(project_field(circuit, *adj.terminal, cfg, k_final));
      backward.back().field = GridFunction(grid, backward.back().field.values(), "adjoint");
    } else {
      backward.push_back(make_frame(circuit, grid, k_final, cfg.tau,
                                    FitOutcome{std::vector<double>(
                                                   static_cast<std::size_t>(circuit.n_params()),
                                                   0.0),
                                               0.0, 0.0, 0, {}},
                                    "adjoint"));
    }
    require_accepted(backward.back(), cfg, "adjoint terminal projection rejected");
    const StepPhysics physics{cfg.nu, cfg.tau, grid.spacing(), cfg.nonlinear};
    for (int n = k_final - 1; n >= 0; --n) {
      const auto &later = backward.back();
      const auto &f_n = fwd.frames[static_cast<std::size_t>(n)];
      std::optional<StateSource> phi;
      if (later.params.lambda0 != 0.0)
        phi = source_of(circuit, later.params);
      std::optional<GridFunction> s;
      if (!adj.source.empty())
        s = adj.source.size() == 1 ? adj.source.front()
                                   : adj.source[static_cast<std::size_t>(n)];
      const CostTerm term = adjoint_cost_term(circuit, later.params.angles, phi,
                                              later.params.lambda0, source_of(circuit, f_n.params),
                                              f_n.params.lambda0, s, physics, adj.discretization);
      backward.push_back(make_frame(circuit, grid, n, cfg.tau,
                                    fit(term, cfg, 1000003 + n, &later.params.angles),
                                    "adjoint"));
      require_accepted(backward.back(), cfg, "adjoint step rejected");
    }
  } catch (const StepRejected &e) {
    out.completed = false;
    out.failure = e.what();
  }
  out.frames.assign(std::make_move_iterator(backward.rbegin()),
                    std::make_move_iterator(backward.rend()));
  return out;
}

std::string trajectory_csv(const std::vector<TrajectoryFrame> &frames, bool with_fields) {
  std::string out = "step,time,residual,iters,lambda0";
  const std::size_t points = frames.empty() ? 0 : frames.front().field.size();
  if (with_fields)
    for (std::size_t k = 0; k < points; ++k)
      out += ",f_" + std::to_string(k);
  out += '\n';
  for (const auto &f : frames) {
    out += std::to_string(f.step) + ',' + detail::fmt_double(f.time) + ',' +
           detail::fmt_double(f.residual) + ',' + std::to_string(f.iterations) + ',' +
           detail::fmt_double(f.params.lambda0);
    if (with_fields)
      for (double v : f.field.values())
        out += ',' + detail::fmt_double(v);
    out += '\n';
  }
  return out;
}

} // namespace vqcfd
