#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace vqcfd {

enum class OptimizerKind {
  gradient_descent, ///< steepest descent with Armijo backtracking
  lbfgs,            ///< limited-memory BFGS with Armijo backtracking
  compass,          ///< derivative-free coordinate (compass) search
};

OptimizerKind parse_optimizer(const std::string &name);
std::string to_string(OptimizerKind kind);

struct OptimizerOptions {
  OptimizerKind kind = OptimizerKind::gradient_descent;
  int max_iters = 2000;
  /// Stop once the objective improves by less than this for `patience`
  /// consecutive iterations.
  double tol = 1e-14;
  int patience = 3;
  /// Stop once the gradient infinity norm drops below this.
  double grad_tol = 1e-11;
  /// Initial step length (compass) or trial step (line searches).
  double step = 0.5;
  int lbfgs_memory = 20;
};

using Objective = std::function<double(std::span<const double>)>;
using GradientFn = std::function<std::vector<double>(std::span<const double>)>;
/// Called after every accepted iteration with (iteration, x, value).
using IterationCallback =
    std::function<void(int, std::span<const double>, double)>;

struct OptimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes `f`. `grad` may be empty for the compass search.
OptimizeResult minimize(const Objective &f, const GradientFn &grad, std::vector<double> x0,
                        const OptimizerOptions &options, const IterationCallback &on_iter = {});

} // namespace vqcfd
