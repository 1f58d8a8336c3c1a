#include "vqcfd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace vqcfd {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v)
    m = std::max(m, std::abs(x));
  return m;
}

struct Counter {
  const Objective &f;
  int evaluations = 0;
  double operator()(std::span<const double> x) {
    ++evaluations;
    const double v = f(x);
    if (!std::isfinite(v))
      throw std::runtime_error("optimizer: objective returned a non-finite value");
    return v;
  }
};

// Tracks the "improvement below tol for `patience` iterations" rule.
struct Stall {
  double tol;
  int patience;
  int count = 0;
  bool update(double before, double after) {
    count = (before - after < tol) ? count + 1 : 0;
    return count >= patience;
  }
};

// Backtracking along `dir`; returns the accepted step or 0 when none of the
// trial steps gives sufficient decrease.
double armijo(Counter &f, std::span<const double> x, double fx, std::span<const double> g,
              std::span<const double> dir, double alpha, std::vector<double> &x_new,
              double &f_new) {
  const double slope = dot(g, dir);
  if (slope >= 0.0)
    return 0.0;
  constexpr double c1 = 1e-4;
  x_new.resize(x.size());
  for (int k = 0; k < 60; ++k) {
    for (std::size_t i = 0; i < x.size(); ++i)
      x_new[i] = x[i] + alpha * dir[i];
    f_new = f(x_new);
    if (f_new <= fx + c1 * alpha * slope)
      return alpha;
    alpha *= 0.5;
  }
  return 0.0;
}

OptimizeResult gradient_descent(Counter &f, const GradientFn &grad, std::vector<double> x,
                                const OptimizerOptions &o, const IterationCallback &cb) {
  OptimizeResult r;
  double fx = f(x);
  double alpha = o.step;
  Stall stall{o.tol, o.patience};
  std::vector<double> x_new, dir(x.size());
  for (int it = 1; it <= o.max_iters; ++it) {
    const auto g = grad(x);
    if (inf_norm(g) <= o.grad_tol) {
      r.converged = true;
      break;
    }
    for (std::size_t i = 0; i < x.size(); ++i)
      dir[i] = -g[i];
    double f_new = fx;
    const double step = armijo(f, x, fx, g, dir, alpha * 2.0, x_new, f_new);
    r.iterations = it;
    if (step == 0.0) {
      r.converged = true;
      break;
    }
    alpha = step;
    const double before = fx;
    x.swap(x_new);
    fx = f_new;
    if (cb)
      cb(it, x, fx);
    if (stall.update(before, fx)) {
      r.converged = true;
      break;
    }
  }
  r.x = std::move(x);
  r.value = fx;
  return r;
}

OptimizeResult lbfgs(Counter &f, const GradientFn &grad, std::vector<double> x,
                     const OptimizerOptions &o, const IterationCallback &cb) {
  OptimizeResult r;
  const std::size_t n = x.size();
  double fx = f(x);
  auto g = grad(x);
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  Stall stall{o.tol, o.patience};
  std::vector<double> dir(n), x_new;
  for (int it = 1; it <= o.max_iters; ++it) {
    if (inf_norm(g) <= o.grad_tol) {
      r.converged = true;
      break;
    }
    // Two-loop recursion.
    std::vector<double> q(g.begin(), g.end());
    std::vector<double> a(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      a[k] = rho_hist[k] * dot(s_hist[k], q);
      for (std::size_t i = 0; i < n; ++i)
        q[i] -= a[k] * y_hist[k][i];
    }
    double gamma = 1.0;
    if (!s_hist.empty())
      gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
    for (auto &v : q)
      v *= gamma;
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double b = rho_hist[k] * dot(y_hist[k], q);
      for (std::size_t i = 0; i < n; ++i)
        q[i] += s_hist[k][i] * (a[k] - b);
    }
    for (std::size_t i = 0; i < n; ++i)
      dir[i] = -q[i];
    double trial = s_hist.empty() ? std::min(1.0, o.step / std::max(inf_norm(g), 1e-300)) : 1.0;
    double f_new = fx;
    double step = armijo(f, x, fx, g, dir, trial, x_new, f_new);
    if (step == 0.0 && !s_hist.empty()) {
      // Curvature memory went stale: restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i)
        dir[i] = -g[i];
      step = armijo(f, x, fx, g, dir, std::min(1.0, o.step / inf_norm(g)), x_new, f_new);
    }
    r.iterations = it;
    if (step == 0.0) {
      r.converged = true;
      break;
    }
    auto g_new = grad(x_new);
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-300) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > o.lbfgs_memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double before = fx;
    x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    if (cb)
      cb(it, x, fx);
    if (stall.update(before, fx)) {
      r.converged = true;
      break;
    }
  }
  r.x = std::move(x);
  r.value = fx;
  return r;
}

OptimizeResult compass(Counter &f, std::vector<double> x, const OptimizerOptions &o,
                       const IterationCallback &cb) {
  OptimizeResult r;
  double fx = f(x);
  double delta = o.step;
  const double min_delta = 1e-10;
  Stall stall{o.tol, o.patience};
  for (int it = 1; it <= o.max_iters; ++it) {
    const double before = fx;
    bool moved = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double sign : {1.0, -1.0}) {
        const double keep = x[i];
        x[i] = keep + sign * delta;
        const double v = f(x);
        if (v < fx) {
          fx = v;
          moved = true;
          break;
        }
        x[i] = keep;
      }
    }
    r.iterations = it;
    if (!moved)
      delta *= 0.5;
    if (cb)
      cb(it, x, fx);
    if (delta < min_delta || (moved && stall.update(before, fx))) {
      r.converged = true;
      break;
    }
  }
  r.x = std::move(x);
  r.value = fx;
  return r;
}

} // namespace

OptimizerKind parse_optimizer(const std::string &name) {
  if (name == "gradient_descent")
    return OptimizerKind::gradient_descent;
  if (name == "lbfgs")
    return OptimizerKind::lbfgs;
  if (name == "compass")
    return OptimizerKind::compass;
  throw std::invalid_argument("unknown optimizer '" + name +
                              "' (expected gradient_descent, lbfgs or compass)");
}

std::string to_string(OptimizerKind kind) {
  switch (kind) {
  case OptimizerKind::gradient_descent:
    return "gradient_descent";
  case OptimizerKind::lbfgs:
    return "lbfgs";
  case OptimizerKind::compass:
    return "compass";
  }
  return "?";
}

OptimizeResult minimize(const Objective &f, const GradientFn &grad, std::vector<double> x0,
                        const OptimizerOptions &options, const IterationCallback &on_iter) {
  if (options.max_iters < 1)
    throw std::invalid_argument("optimizer: iteration cap must be >= 1");
  if (!(options.tol > 0.0))
    throw std::invalid_argument("optimizer: tolerance must be > 0");
  if (options.kind != OptimizerKind::compass && !grad)
    throw std::invalid_argument("optimizer: gradient required");
  Counter counter{f};
  OptimizeResult r;
  switch (options.kind) {
  case OptimizerKind::gradient_descent:
    r = gradient_descent(counter, grad, std::move(x0), options, on_iter);
    break;
  case OptimizerKind::lbfgs:
    r = lbfgs(counter, grad, std::move(x0), options, on_iter);
    break;
  case OptimizerKind::compass:
    r = compass(counter, std::move(x0), options, on_iter);
    break;
  }
  r.evaluations = counter.evaluations;
  return r;
}

} // namespace vqcfd
