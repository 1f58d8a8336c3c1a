#include "vqcfd/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "vqcfd/ansatz.hpp"
#include "vqcfd/encoding.hpp"
#include "vqcfd/evolve.hpp"
#include "vqcfd/grid.hpp"
#include "vqcfd/operators.hpp"
#include "vqcfd/oracle.hpp"
#include "vqcfd/qnpu.hpp"

namespace vqcfd {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (std::uint64_t{out[0]} << 32) | out[1];
}

// Grid-weighted discrete L2 norm sqrt(h * sum e_k^2).
double h_norm(const GridFunction &a, const GridFunction &b) {
  return l2_distance(a, b) * std::sqrt(a.grid().spacing());
}

std::vector<double> random_angles(std::mt19937_64 &rng, int n) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto &x : v)
    x = u(rng);
  return v;
}

Amplitudes random_state(std::mt19937_64 &rng, int n, bool real) {
  std::normal_distribution<double> g;
  Amplitudes a(std::size_t{1} << n);
  double s = 0.0;
  for (auto &x : a) {
    x = real ? Complex{g(rng), 0.0} : Complex{g(rng), g(rng)};
    s += std::norm(x);
  }
  for (auto &x : a)
    x /= std::sqrt(s);
  return a;
}

GridFunction random_smooth(std::mt19937_64 &rng, const Grid &grid, int modes) {
  std::normal_distribution<double> g;
  std::vector<double> v(grid.size(), 0.0);
  const double c0 = g(rng);
  std::vector<double> a(static_cast<std::size_t>(modes)), b(static_cast<std::size_t>(modes));
  for (int m = 0; m < modes; ++m) {
    a[static_cast<std::size_t>(m)] = g(rng);
    b[static_cast<std::size_t>(m)] = g(rng);
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double x = 2.0 * std::numbers::pi * grid.point(k) / grid.length();
    v[k] = c0;
    for (int m = 1; m <= modes; ++m)
      v[k] += a[static_cast<std::size_t>(m - 1)] * std::cos(m * x) +
              b[static_cast<std::size_t>(m - 1)] * std::sin(m * x);
  }
  return GridFunction(grid, std::move(v));
}

GridFunction random_field(std::mt19937_64 &rng, const Grid &grid) {
  std::normal_distribution<double> g;
  std::vector<double> v(grid.size());
  for (auto &x : v)
    x = g(rng);
  return GridFunction(grid, std::move(v));
}

// Settings shared by the trajectory criteria: a moderately nonlinear hump.
struct BurgersCase {
  double length = 1.0;
  double nu = 0.01;
  double tau = 0.01;
  double amplitude = 0.1;
  double position = 0.5;
  double t0 = 0.5;
};

EvolutionConfig case_config(const BurgersCase &c, int steps, std::uint64_t seed) {
  EvolutionConfig cfg;
  cfg.nu = c.nu;
  cfg.tau = c.tau;
  cfg.steps = steps;
  cfg.seed = seed;
  return cfg;
}

// 1: oracle trajectories against the analytic hump in the diffusion limit.
CriterionResult analytic_validation(std::uint64_t) {
  const double nu = 1.0, z = 1e-6, x0 = 0.5, length = 1.0, t0 = 0.002, span = 0.001;
  std::vector<double> hs, errs;
  const double h_fine = length / 256.0;
  const int fine_steps = static_cast<int>(std::ceil(span / (0.005 * h_fine * h_fine / nu)));
  const double tau_fine = span / fine_steps;
  std::string detail = "spatial errors";
  for (int n : {6, 7, 8}) {
    const Grid grid(length, n);
    const DenseStepper stepper(grid, nu, tau_fine);
    const auto traj = fd_trajectory(analytic_hump(z, x0, nu, t0, grid), stepper, fine_steps);
    const double e = h_norm(traj.back(), analytic_hump(z, x0, nu, t0 + span, grid)) / z;
    hs.push_back(grid.spacing());
    errs.push_back(e);
    detail += " " + sci(e);
  }
  const double spatial = loglog_slope(hs, errs);

  // Temporal order from successive differences of the tau-halved runs; the
  // spatial error they share cancels.
  const Grid grid(length, 6);
  const GridFunction start = analytic_hump(z, x0, nu, t0, grid);
  std::vector<double> taus, diffs;
  std::vector<GridFunction> finals;
  for (int steps : {10, 20, 40, 80}) {
    const double tau = span / steps;
    finals.push_back(fd_trajectory(start, DenseStepper(grid, nu, tau), steps).back());
    taus.push_back(tau);
  }
  for (std::size_t i = 0; i + 1 < finals.size(); ++i)
    diffs.push_back(h_norm(finals[i], finals[i + 1]) / z);
  taus.pop_back();
  const double temporal = loglog_slope(taus, diffs);
  const bool pass = std::abs(spatial - 2.0) <= 0.2 && std::abs(temporal - 1.0) <= 0.2;
  detail = "spatial slope " + fmt("%.3f", spatial) + " (N=6,7,8), temporal slope " +
           fmt("%.3f", temporal) + " (tau halvings); " + detail;
  return {1, "analytic validation", pass, detail, 0.0};
}

// 2: variational trajectory against the oracle trajectory.
CriterionResult variational_vs_oracle(std::uint64_t seed) {
  const BurgersCase c;
  const Grid grid(c.length, 5);
  const GridFunction f0 = analytic_hump(c.amplitude, c.position, c.nu, c.t0, grid);
  const EvolutionConfig cfg = case_config(c, 50, sub_seed(seed, 2));
  const EvolutionResult run = euler_evolve(f0, cfg);
  const DenseStepper stepper(grid, c.nu, c.tau);
  const auto oracle = fd_trajectory(f0, stepper, 50);
  double max_l2 = 0.0, max_res = 0.0, max_mismatch = 0.0;
  for (const auto &fr : run.frames) {
    max_l2 = std::max(max_l2, l2_distance(fr.field, oracle[static_cast<std::size_t>(fr.step)]));
    if (fr.step > 0) {
      max_res = std::max(max_res, fr.residual);
      const auto &prev = run.frames[static_cast<std::size_t>(fr.step - 1)].field;
      max_mismatch = std::max(max_mismatch,
                              std::abs(fr.residual - dense_residual(fr.field, prev, stepper)));
    }
  }
  const bool pass = run.completed && run.frames.size() == 51 && max_l2 <= 1e-3 && max_res <= 1e-8;
  std::string detail = "N=5 d=" + std::to_string(run.circuit.depth()) + " P=" +
                       std::to_string(run.circuit.n_params()) + ", 50 steps: max L2 " +
                       sci(max_l2) + ", max residual " + sci(max_res) +
                       ", residual vs dense oracle " + sci(max_mismatch);
  if (!run.completed)
    detail += "; " + run.failure;
  return {2, "variational vs oracle", pass, detail, 0.0};
}

CostTerm random_cost_term(std::mt19937_64 &rng, int n, int kind) {
  std::uniform_int_distribution<int> depth_d(1, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const AnsatzCircuit trial = build_ansatz(n, depth_d(rng));
  const AnsatzCircuit other = build_ansatz(n, depth_d(rng));
  const auto angles = random_angles(rng, trial.n_params());
  const StateSource prev = AnsatzSource{other, random_angles(rng, other.n_params())};
  const double h = 1.0 / static_cast<double>(std::size_t{1} << n);
  const StepPhysics physics{0.1 * u(rng), 1e-3 + 1e-2 * u(rng), h, true};
  const double lambda = 0.5 + 1.5 * u(rng);
  if (kind < 2)
    return burgers_cost_term(trial, angles, prev, lambda, physics);
  const Grid grid(1.0, n);
  const StateSource fwd = AmplitudeSource{random_state(rng, n, true)};
  return adjoint_cost_term(trial, angles, prev, lambda, fwd, 0.5 + u(rng), random_field(rng, grid),
                           physics,
                           kind == 2 ? AdjointDiscretization::consistent
                                     : AdjointDiscretization::literal);
}

// 3: direct and circuit-exact brackets agree.
CriterionResult backend_equivalence(std::uint64_t seed) {
  std::mt19937_64 rng(sub_seed(seed, 3));
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 5;
    const CostTerm term = random_cost_term(rng, n, (i / 5) % 4);
    const double d = overlap_bracket(term, Backend::direct);
    const double c = overlap_bracket(term, Backend::circuit);
    const double diff = std::abs(d - c);
    worst = std::max(worst, diff);
    failures += diff > 1e-10;
  }
  return {3, "backend equivalence", failures == 0,
          "100 instances N=2..6: max |W_direct - W_circuit| " + sci(worst) + ", failures " +
              std::to_string(failures),
          0.0};
}

// 4: sampled bracket standard deviation against shot count.
CriterionResult shot_scaling(std::uint64_t seed) {
  std::mt19937_64 rng(sub_seed(seed, 4));
  const CostTerm term = random_cost_term(rng, 3, 0);
  const double exact = overlap_bracket(term, Backend::circuit);
  std::vector<double> ms, sds;
  std::string detail;
  for (std::int64_t m : {100, 1000, 10000, 100000}) {
    std::vector<double> w;
    for (int rep = 0; rep < 200; ++rep)
      w.push_back(overlap_bracket(
          term, Backend::circuit,
          ShotModel::sampled(m, sub_seed(seed, 4000 + static_cast<std::uint64_t>(m) * 1000 +
                                                   static_cast<std::uint64_t>(rep)))));
    double mean = 0.0;
    for (double x : w)
      mean += x;
    mean /= static_cast<double>(w.size());
    double var = 0.0;
    for (double x : w)
      var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / static_cast<double>(w.size() - 1));
    ms.push_back(static_cast<double>(m));
    sds.push_back(sd);
    detail += " M=" + std::to_string(m) + ":" + sci(sd);
  }
  const double slope = loglog_slope(ms, sds);
  return {4, "shot-noise scaling", std::abs(slope + 0.5) <= 0.1,
          "log-log slope " + fmt("%.4f", slope) + " (200 reps, exact W " + fmt("%.6f", exact) +
              "); sd" + detail,
          0.0};
}

// 5: shift-rule gradients against central differences.
CriterionResult gradient_correctness(std::uint64_t seed) {
  std::mt19937_64 rng(sub_seed(seed, 5));
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  double worst_reduced = 0.0, worst_full = 0.0, two_term_on_full = 0.0;
  for (int i = 0; i < 20; ++i) {
    const CostTerm base = random_cost_term(rng, 2 + i % 4, 0);
    const double lambda0 = u(rng);
    auto w_at = [&](std::span<const double> th) {
      CostTerm t = base;
      t.angles.assign(th.begin(), th.end());
      return overlap_bracket(t);
    };
    const AngleLoss reduced = [&](std::span<const double> th) {
      const double w = w_at(th);
      return -w * w;
    };
    const AngleLoss full = [&](std::span<const double> th) {
      return lambda0 * lambda0 - 2.0 * lambda0 * w_at(th);
    };
    auto central = [&](const AngleLoss &f) {
      std::vector<double> th = base.angles, g(th.size());
      const double eps = 1e-5;
      for (std::size_t k = 0; k < th.size(); ++k) {
        const double keep = th[k];
        th[k] = keep + eps;
        const double up = f(th);
        th[k] = keep - eps;
        const double down = f(th);
        th[k] = keep;
        g[k] = (up - down) / (2.0 * eps);
      }
      return g;
    };
    auto max_diff = [](const std::vector<double> &a, const std::vector<double> &b) {
      double m = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a[k] - b[k]));
      return m;
    };
    const auto fd_reduced = central(reduced);
    const auto fd_full = central(full);
    worst_reduced = std::max(
        worst_reduced,
        max_diff(parameter_shift_grad(base.angles, reduced, ShiftRule::two_term), fd_reduced));
    worst_full = std::max(
        worst_full, max_diff(parameter_shift_grad(base.angles, full, ShiftRule::four_term), fd_full));
    two_term_on_full = std::max(
        two_term_on_full,
        max_diff(parameter_shift_grad(base.angles, full, ShiftRule::two_term), fd_full));
  }
  const bool pass = worst_reduced <= 1e-6 && worst_full <= 1e-6;
  return {5, "gradient correctness", pass,
          "20 instances: -W^2 two-term " + sci(worst_reduced) + ", C(lambda0) four-term " +
              sci(worst_full) + " (two-term on C, not exact: " + sci(two_term_on_full) + ")",
          0.0};
}

// 6: operator algebra.
CriterionResult operator_algebra(std::uint64_t seed) {
  std::mt19937_64 rng(sub_seed(seed, 6));
  bool shift_ok = true;
  double antisym = 0.0, sym = 0.0, max_eig = -1e300, variants = 0.0, recon = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const Eigen::MatrixXcd s = to_dense(shift_plus(n));
    const auto dim = s.rows();
    for (Eigen::Index r = 0; r < dim; ++r) {
      int ones = 0;
      for (Eigen::Index c = 0; c < dim; ++c) {
        const Complex v = s(r, c);
        if (v == Complex{1.0})
          ++ones;
        else if (v != Complex{0.0})
          shift_ok = false;
      }
      shift_ok = shift_ok && ones == 1 && s.col(r).sum() == Complex{1.0};
    }
    shift_ok = shift_ok && (s.adjoint() * s).isIdentity(0.0);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k)
      p = s * p;
    shift_ok = shift_ok && p == Eigen::MatrixXcd::Identity(dim, dim);
    // Gate cascade maps |k> to |k+1> exactly.
    for (std::size_t k = 0; k < static_cast<std::size_t>(dim); ++k) {
      Amplitudes a(static_cast<std::size_t>(dim), Complex{0.0});
      a[k] = 1.0;
      QuantumState st(n, a);
      for (const auto &g : shift_plus_gates(n))
        st.apply(g);
      shift_ok = shift_ok && st[(k + 1) % static_cast<std::size_t>(dim)] == Complex{1.0};
    }

    const double h = 1.0;
    const Eigen::MatrixXcd d = to_dense(nabla(n, h));
    const Eigen::MatrixXcd l = to_dense(laplacian(n, h));
    antisym = std::max(antisym, (d + d.transpose()).cwiseAbs().maxCoeff());
    sym = std::max(sym, (l - l.adjoint()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(l.real());
    max_eig = std::max(max_eig, eig.eigenvalues().maxCoeff());

    const Grid grid(static_cast<double>(std::size_t{1} << n), n);
    const std::vector<OperatorSpec> ops{shift_plus(n), nabla(n, h), laplacian(n, h),
                                        diagonal_of(random_field(rng, grid)),
                                        adjoint(nabla(n, h))};
    for (const auto &op : ops) {
      const OperatorSpec pauli = pauli_decompose(op);
      const OperatorSpec dense(n, Dense{to_dense(op)});
      if (n <= 4)
        recon = std::max(recon, (to_dense(pauli) - to_dense(op)).cwiseAbs().maxCoeff());
      for (int trial = 0; trial < 3; ++trial) {
        const Amplitudes v = random_state(rng, n, false);
        const Amplitudes a = vqcfd::apply(op, v);
        const Amplitudes b = vqcfd::apply(pauli, v);
        const Amplitudes c = vqcfd::apply(dense, v);
        for (std::size_t k = 0; k < a.size(); ++k)
          variants = std::max({variants, std::abs(a[k] - b[k]), std::abs(a[k] - c[k])});
      }
    }
  }
  const bool pass = shift_ok && antisym <= 1e-12 && sym <= 1e-12 && max_eig <= 1e-12 &&
                    variants <= 1e-12 && recon <= 1e-12;
  return {6, "operator algebra", pass,
          std::string("S+ permutation/unitary/cascade ") + (shift_ok ? "exact" : "FAILED") +
              ", |Grad+Grad^T| " + sci(antisym) + ", |Lap-Lap^T| " + sci(sym) +
              ", max eig(Lap) " + sci(max_eig) + ", variants " + sci(variants) +
              ", Pauli reconstruction (N<=4) " + sci(recon),
          0.0};
}

// Upper bound on chi_99 from independent full SVDs: the smallest chi whose
// summed per-bond tails stay within 1%.
int svd_oracle_chi99(const QuantumState &state) {
  const int n = state.n_qubits();
  std::vector<Eigen::VectorXd> spectra;
  for (int cut = 1; cut < n; ++cut) {
    const auto rows = Eigen::Index{1} << cut, cols = Eigen::Index{1} << (n - cut);
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c)
        m(r, c) = state[static_cast<std::size_t>(r * cols + c)];
    spectra.push_back(Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues());
  }
  for (int chi = 1;; ++chi) {
    double tail = 0.0;
    for (const auto &s : spectra)
      for (Eigen::Index a = chi; a < s.size(); ++a)
        tail += s(a) * s(a);
    if (tail <= 0.01)
      return chi;
  }
}

// 7: encoding suite.
CriterionResult encoding_suite(std::uint64_t seed) {
  std::mt19937_64 rng(sub_seed(seed, 7));
  double roundtrip = 0.0, mps = 0.0, entropy = 0.0;
  bool basis_ok = true;
  for (int n = 1; n <= 10; ++n) {
    const GridFunction f = random_field(rng, Grid(1.0, n));
    const GridFunction back = decode(encode(f));
    for (std::size_t k = 0; k < f.size(); ++k)
      roundtrip = std::max(roundtrip, std::abs(back[k] - f[k]));
    if (n >= 2) {
      const QuantumState s(n, random_state(rng, n, false));
      const QuantumState r = mps_to_state(to_mps(s)).state;
      for (std::size_t k = 0; k < s.size(); ++k)
        mps = std::max(mps, std::abs(r[k] - s[k]));
      for (std::size_t k : {std::size_t{0}, s.size() / 3, s.size() - 1}) {
        Amplitudes a(s.size(), Complex{0.0});
        a[k] = 1.0;
        basis_ok = basis_ok && chi_99(QuantumState(n, a)) == 1;
      }
      // Random product state.
      Amplitudes prod{1.0};
      for (int q = 0; q < n; ++q) {
        const Amplitudes one = random_state(rng, 1, false);
        Amplitudes next;
        for (const auto &x : prod)
          for (const auto &y : one)
            next.push_back(x * y);
        prod = std::move(next);
      }
      const QuantumState p(n, prod);
      for (int cut = 1; cut < n; ++cut)
        entropy = std::max(entropy, std::abs(interscale_entropy(p, cut)));
    }
  }
  const Grid grid(1.0, 10);
  const double nu = 0.01, t = 1.0; // nu t = 0.01 L^2
  const GridFunction hump = analytic_hump(1.0, 0.5, nu, t, grid);
  const int chi = chi_99(hump);
  const int oracle = svd_oracle_chi99(encode(hump).state);
  const bool pass = roundtrip <= 1e-12 && mps <= 1e-12 && basis_ok && chi <= 4 && oracle <= 4 &&
                    chi <= oracle && entropy <= 1e-10;
  return {7, "encoding suite", pass,
          "encode/decode " + sci(roundtrip) + ", MPS round trip " + sci(mps) +
              ", chi99(basis) " + (basis_ok ? "1" : "FAILED") + ", chi99(hump N=10) " +
              std::to_string(chi) + " (SVD oracle bound " + std::to_string(oracle) +
              "), product-state entropy " + sci(entropy),
          0.0};
}

// 8: variational adjoint sensitivity against forward finite differences.
CriterionResult adjoint_duality(std::uint64_t seed) {
  const BurgersCase c;
  const int steps = 20;
  const Grid grid(c.length, 5);
  const GridFunction f0 = analytic_hump(c.amplitude, c.position, c.nu, c.t0, grid);
  const EvolutionConfig cfg = case_config(c, steps, sub_seed(seed, 8));
  const EvolutionResult fwd = euler_evolve(f0, cfg);
  if (!fwd.completed)
    return {8, "adjoint duality", false, "forward run failed: " + fwd.failure, 0.0};
  const DenseStepper stepper(grid, c.nu, c.tau);
  const GridFunction &base = fwd.frames.front().field;
  std::mt19937_64 rng(sub_seed(seed, 80));
  double worst = 0.0;
  std::string values;
  for (int i = 0; i < 5; ++i) {
    const GridFunction g = random_smooth(rng, grid, 3);
    const GridFunction df = random_smooth(rng, grid, 3);
    AdjointConfig adj{&fwd, {}, g, AdjointDiscretization::consistent};
    EvolutionConfig acfg = cfg;
    acfg.seed = sub_seed(seed, 81 + static_cast<std::uint64_t>(i));
    const EvolutionResult back = adjoint_euler_evolve(adj, acfg);
    if (!back.completed)
      return {8, "adjoint duality", false, "adjoint run failed: " + back.failure, 0.0};
    double sens = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
      sens += back.frames.front().field[k] * df[k];
    auto objective = [&](const GridFunction &start) {
      const GridFunction end = fd_trajectory(start, stepper, steps).back();
      double j = 0.0;
      for (std::size_t k = 0; k < grid.size(); ++k)
        j += g[k] * end[k];
      return j;
    };
    const double eps = 1e-6;
    std::vector<double> pert = base.values();
    for (std::size_t k = 0; k < pert.size(); ++k)
      pert[k] += eps * df[k];
    const double fd = (objective(GridFunction(grid, pert)) - objective(base)) / eps;
    const double rel = std::abs(sens - fd) / std::max(std::abs(fd), 1e-300);
    worst = std::max(worst, rel);
    values += " " + sci(rel);
  }
  return {8, "adjoint duality", worst <= 1e-4,
          "N=5, 20 steps, 5 weightings: max relative difference " + sci(worst) + ";" + values,
          0.0};
}

using Runner = CriterionResult (*)(std::uint64_t);

constexpr Runner kRunners[] = {analytic_validation, variational_vs_oracle, backend_equivalence,
                               shot_scaling,        gradient_correctness,  operator_algebra,
                               encoding_suite,      adjoint_duality};

CriterionResult timed(int id, std::uint64_t seed) {
  const auto t0 = Clock::now();
  CriterionResult r;
  try {
    r = kRunners[id - 1](seed);
  } catch (const std::exception &e) {
    r = {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what(), 0.0};
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (id == 1 && r.seconds > 60.0) {
    r.pass = false;
    r.detail += "; runtime over 1 minute";
  }
  if (id == 2 && r.seconds > 600.0) {
    r.pass = false;
    r.detail += "; runtime over 10 minutes";
  }
  return r;
}

} // namespace

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope: need at least two matched points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool AcceptanceReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const auto &c) { return c.pass; });
}

std::string AcceptanceReport::text(bool timings) const {
  std::string out;
  for (const auto &c : criteria) {
    out += "criterion " + std::to_string(c.id) + (c.pass ? " PASS " : " FAIL ") + c.title +
           ": " + c.detail;
    if (timings)
      out += " [" + fmt("%.1f", c.seconds) + " s]";
    out += '\n';
  }
  return out;
}

AcceptanceReport run_acceptance(const AcceptanceOptions &options) {
  auto wanted = [&](int id) {
    return options.only.empty() ||
           std::find(options.only.begin(), options.only.end(), id) != options.only.end();
  };
  const bool determinism = wanted(9);
  AcceptanceReport report, first, second;
  for (int id = 1; id <= 8; ++id) {
    if (!wanted(id) && !determinism)
      continue;
    CriterionResult r = timed(id, options.seed);
    first.criteria.push_back(r);
    if (wanted(id)) {
      report.criteria.push_back(r);
      if (options.on_result)
        options.on_result(r);
    }
  }
  if (determinism) {
    const auto t0 = Clock::now();
    for (int id = 1; id <= 8; ++id)
      second.criteria.push_back(timed(id, options.seed));
    const bool same = first.text(false) == second.text(false);
    CriterionResult r{9, "determinism", same,
                      same ? "two runs of criteria 1-8 with seed " +
                                 std::to_string(options.seed) + " gave identical reports"
                           : "reports differ between two runs with seed " +
                                 std::to_string(options.seed),
                      std::chrono::duration<double>(Clock::now() - t0).count()};
    report.criteria.push_back(r);
    if (options.on_result)
      options.on_result(r);
  }
  return report;
}

} // namespace vqcfd
