#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "vqcfd/grid.hpp"
#include "vqcfd/qnpu.hpp"

namespace vqcfd {

/// Classical finite-difference reference for the periodic Burgers step. Its
/// stencil matrices are assembled by explicit index arithmetic, separately
/// from the operators module.
class DenseStepper {
public:
  DenseStepper(Grid grid, double nu, double tau);

  const Grid &grid() const { return grid_; }
  double nu() const { return nu_; }
  double tau() const { return tau_; }
  const Eigen::MatrixXd &nabla() const { return nabla_; }
  const Eigen::MatrixXd &laplacian() const { return laplacian_; }

  /// d f_{n+1} / d f_n of the Euler step at f.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd &f, bool nonlinear = true) const;

private:
  Grid grid_;
  double nu_;
  double tau_;
  Eigen::MatrixXd nabla_;
  Eigen::MatrixXd laplacian_;
};

/// f + tau (nu Lap f - f . Grad f).
GridFunction fd_burgers_step(const GridFunction &f, const DenseStepper &stepper,
                             bool nonlinear = true);

/// ||candidate - fd_burgers_step(prev)||^2.
double dense_residual(const GridFunction &candidate, const GridFunction &prev,
                      const DenseStepper &stepper, bool nonlinear = true);

/// Frames 0..steps of the finite-difference trajectory.
std::vector<GridFunction> fd_trajectory(const GridFunction &initial, const DenseStepper &stepper,
                                        int steps, bool nonlinear = true);

/// phi_n = A^T phi_{n+1} + tau S with A the step Jacobian at f_n (consistent)
/// or phi_n = (I + tau (nu Lap + D_f Grad)) phi_{n+1} + tau S (literal).
GridFunction fd_adjoint_step(const GridFunction &phi_next, const GridFunction &f_n,
                             const DenseStepper &stepper,
                             const std::optional<GridFunction> &source,
                             AdjointDiscretization disc = AdjointDiscretization::consistent,
                             bool nonlinear = true);

/// Euclidean distance between two fields on the same grid.
double l2_distance(const GridFunction &a, const GridFunction &b);

} // namespace vqcfd
