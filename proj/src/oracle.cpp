#include "vqcfd/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace vqcfd {

namespace {

Eigen::VectorXd as_vector(const GridFunction &f) {
  return Eigen::Map<const Eigen::VectorXd>(f.values().data(),
                                           static_cast<Eigen::Index>(f.size()));
}

GridFunction as_field(const Grid &grid, const Eigen::VectorXd &v, const std::string &tag) {
  return GridFunction(grid, std::vector<double>(v.data(), v.data() + v.size()), tag);
}

void require_grid(const GridFunction &f, const DenseStepper &s, const char *what) {
  if (f.grid() != s.grid())
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

} // namespace

DenseStepper::DenseStepper(Grid grid, double nu, double tau)
    : grid_(grid), nu_(nu), tau_(tau) {
  if (!(nu >= 0.0) || !(tau >= 0.0))
    throw std::invalid_argument("DenseStepper: nu and tau must be >= 0");
  const auto n = static_cast<Eigen::Index>(grid_.size());
  const double h = grid_.spacing();
  nabla_ = Eigen::MatrixXd::Zero(n, n);
  laplacian_ = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index up = (k + 1) % n, down = (k + n - 1) % n;
    nabla_(k, up) += 1.0 / (2.0 * h);
    nabla_(k, down) -= 1.0 / (2.0 * h);
    laplacian_(k, up) += 1.0 / (h * h);
    laplacian_(k, down) += 1.0 / (h * h);
    laplacian_(k, k) -= 2.0 / (h * h);
  }
}

Eigen::MatrixXd DenseStepper::jacobian(const Eigen::VectorXd &f, bool nonlinear) const {
  const auto n = nabla_.rows();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) + tau_ * nu_ * laplacian_;
  if (nonlinear) {
    const Eigen::VectorXd df = nabla_ * f;
    a -= tau_ * Eigen::MatrixXd(df.asDiagonal());
    a -= tau_ * (f.asDiagonal() * nabla_);
  }
  return a;
}

GridFunction fd_burgers_step(const GridFunction &f, const DenseStepper &stepper,
                             bool nonlinear) {
  require_grid(f, stepper, "fd_burgers_step");
  const Eigen::VectorXd v = as_vector(f);
  Eigen::VectorXd rhs = stepper.nu() * (stepper.laplacian() * v);
  if (nonlinear)
    rhs -= v.cwiseProduct(stepper.nabla() * v);
  return as_field(f.grid(), v + stepper.tau() * rhs, f.tag());
}

double dense_residual(const GridFunction &candidate, const GridFunction &prev,
                      const DenseStepper &stepper, bool nonlinear) {
  require_grid(candidate, stepper, "dense_residual");
  const GridFunction next = fd_burgers_step(prev, stepper, nonlinear);
  return (as_vector(candidate) - as_vector(next)).squaredNorm();
}

std::vector<GridFunction> fd_trajectory(const GridFunction &initial, const DenseStepper &stepper,
                                        int steps, bool nonlinear) {
  if (steps < 0)
    throw std::invalid_argument("fd_trajectory: negative step count");
  std::vector<GridFunction> out{initial};
  out.reserve(static_cast<std::size_t>(steps) + 1);
  for (int s = 0; s < steps; ++s)
    out.push_back(fd_burgers_step(out.back(), stepper, nonlinear));
  return out;
}

GridFunction fd_adjoint_step(const GridFunction &phi_next, const GridFunction &f_n,
                             const DenseStepper &stepper,
                             const std::optional<GridFunction> &source,
                             AdjointDiscretization disc, bool nonlinear) {
  require_grid(phi_next, stepper, "fd_adjoint_step");
  require_grid(f_n, stepper, "fd_adjoint_step");
  const Eigen::VectorXd phi = as_vector(phi_next);
  const Eigen::VectorXd f = as_vector(f_n);
  Eigen::VectorXd out;
  if (disc == AdjointDiscretization::consistent) {
    out = stepper.jacobian(f, nonlinear).transpose() * phi;
  } else {
    out = phi + stepper.tau() * stepper.nu() * (stepper.laplacian() * phi);
    if (nonlinear)
      out += stepper.tau() * f.cwiseProduct(stepper.nabla() * phi);
  }
  if (source) {
    require_grid(*source, stepper, "fd_adjoint_step");
    out += stepper.tau() * as_vector(*source);
  }
  return as_field(phi_next.grid(), out, phi_next.tag());
}

double l2_distance(const GridFunction &a, const GridFunction &b) {
  if (a.grid() != b.grid())
    throw std::invalid_argument("l2_distance: grid mismatch");
  return (as_vector(a) - as_vector(b)).norm();
}

} // namespace vqcfd
