#include "vqcfd/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

#include "text_util.hpp"

namespace vqcfd {

namespace {
constexpr int kMaxGridQubits = 30;
}

Grid::Grid(double length, int n_qubits) : length_(length), n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxGridQubits)
    throw std::invalid_argument("grid qubit count must be in [1, 30]");
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("grid length must be positive and finite");
}

std::vector<double> Grid::points() const {
  std::vector<double> x(size());
  for (std::size_t k = 0; k < x.size(); ++k)
    x[k] = point(k);
  return x;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values, std::string tag)
    : grid_(grid), values_(std::move(values)), tag_(std::move(tag)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("grid function needs exactly 2^N values");
  for (double v : values_)
    if (!std::isfinite(v))
      throw std::invalid_argument("grid function values must be finite");
}

Grid make_uniform_grid(double length, int n_qubits) {
  return Grid(length, n_qubits);
}

GridFunction analytic_hump(double amplitude, double position, double nu,
                           double t, const Grid &grid) {
  if (!(nu > 0.0))
    throw std::invalid_argument("analytic_hump: viscosity must be positive");
  if (!(t > 0.0))
    throw std::invalid_argument("analytic_hump: time must be positive");
  const double L = grid.length();
  const double peak = amplitude / (2.0 * std::sqrt(std::numbers::pi * nu * t));
  std::vector<double> f(grid.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    double d = grid.point(k) - position;
    d -= L * std::round(d / L);
    f[k] = peak * std::exp(-d * d / (4.0 * nu * t));
  }
  return GridFunction(grid, std::move(f), "velocity");
}

int qubits_required(double reynolds, int dimensions) {
  if (!(reynolds > 1.0))
    throw std::invalid_argument("qubits_required: Re must exceed 1");
  if (dimensions < 1 || dimensions > 3)
    throw std::invalid_argument("qubits_required: K must be 1, 2 or 3");
  const double n = 0.75 * dimensions * std::log2(reynolds);
  // Guard against log2 rounding pushing an exact integer over the edge.
  return static_cast<int>(std::ceil(n - 1e-12));
}

double grid_mass(const GridFunction &f) {
  double s = 0.0;
  for (double v : f.values())
    s += v;
  return s * f.grid().spacing();
}

double grid_variance(const GridFunction &f, double centre) {
  const auto &g = f.grid();
  const double L = g.length();
  double m0 = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    double d = g.point(k) - centre;
    d -= L * std::round(d / L);
    m0 += f[k];
    m2 += f[k] * d * d;
  }
  return m2 / m0;
}

std::string to_csv(const GridFunction &f) {
  std::string out = "x,f\n";
  const auto &g = f.grid();
  for (std::size_t k = 0; k < f.size(); ++k) {
    out += detail::fmt_double(g.point(k));
    out += ',';
    out += detail::fmt_double(f[k]);
    out += '\n';
  }
  return out;
}

std::string to_manifest_json(const GridFunction &f) {
  nlohmann::ordered_json j;
  j["L"] = f.grid().length();
  j["N"] = f.grid().n_qubits();
  j["h"] = f.grid().spacing();
  j["points"] = f.size();
  j["tags"] = f.tag().empty() ? nlohmann::ordered_json::array()
                              : nlohmann::ordered_json::array({f.tag()});
  return j.dump(2);
}

void write_csv(const GridFunction &f, const std::string &path) {
  detail::write_file(path, to_csv(f));
}

GridFunction parse_csv(const std::string &text) {
  std::vector<double> xs, fs;
  bool header = true;
  for (auto line : detail::split(text, '\n')) {
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (line.empty())
      continue;
    if (header) {
      header = false;
      if (line != "x,f")
        throw std::invalid_argument("field CSV must start with header 'x,f'");
      continue;
    }
    auto cols = detail::split(line, ',');
    if (cols.size() != 2)
      throw std::invalid_argument("field CSV rows need exactly two columns");
    xs.push_back(detail::parse_double(cols[0]));
    fs.push_back(detail::parse_double(cols[1]));
  }
  const std::size_t n = fs.size();
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("field CSV point count must be a power of two >= 2");
  int qubits = 0;
  while ((std::size_t{1} << qubits) < n)
    ++qubits;
  const double h = xs[1] - xs[0];
  return GridFunction(Grid(h * static_cast<double>(n), qubits), std::move(fs));
}

GridFunction read_csv(const std::string &path) {
  return parse_csv(detail::read_file(path));
}

} // namespace vqcfd
