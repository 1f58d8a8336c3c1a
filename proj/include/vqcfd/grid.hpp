#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace vqcfd {

/// Uniform periodic 1D grid with 2^N points x_k = k*h on [0, L).
class Grid {
public:
  Grid(double length, int n_qubits);

  double length() const { return length_; }
  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return std::size_t{1} << n_qubits_; }
  double spacing() const { return length_ / static_cast<double>(size()); }
  double point(std::size_t k) const { return static_cast<double>(k) * spacing(); }
  std::vector<double> points() const;

  bool operator==(const Grid &other) const = default;

private:
  double length_;
  int n_qubits_;
};

/// Field samples on a grid. Values are finite and one per grid point.
class GridFunction {
public:
  GridFunction(Grid grid, std::vector<double> values, std::string tag = {});

  const Grid &grid() const { return grid_; }
  const std::vector<double> &values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }
  const std::string &tag() const { return tag_; }

private:
  Grid grid_;
  std::vector<double> values_;
  std::string tag_;
};

Grid make_uniform_grid(double length, int n_qubits);

/// Heat-kernel hump Z/(2 sqrt(pi nu t)) exp(-(x-x0)^2/(4 nu t)), with x-x0
/// taken to the nearest periodic image.
GridFunction analytic_hump(double amplitude, double position, double nu,
                           double t, const Grid &grid);

/// ceil((3K/4) log2 Re).
int qubits_required(double reynolds, int dimensions);

/// Discrete moments of a grid function (h-weighted sums).
double grid_mass(const GridFunction &f);
double grid_variance(const GridFunction &f, double centre);

std::string to_csv(const GridFunction &f);
std::string to_manifest_json(const GridFunction &f);
void write_csv(const GridFunction &f, const std::string &path);

/// Parses the `x,f` CSV layout. The grid length is recovered as count*h with
/// h taken from the first two abscissae.
GridFunction read_csv(const std::string &path);
GridFunction parse_csv(const std::string &text);

} // namespace vqcfd
