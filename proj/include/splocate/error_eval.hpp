#pragma once

#include "splocate/manufactured.hpp"
#include "splocate/stokes.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace splocate {

/// Uniform n x n (x n) grid over a box; the box defaults to the mesh bounds.
struct GridSpec {
  int n = 0;  // 0: default for the dimension
  std::optional<Point> lo;
  std::optional<Point> hi;

  static GridSpec standard(int dim) { return {dim == 2 ? 301 : 41, {}, {}}; }
  static GridSpec paper(int dim) { return {dim == 2 ? 1501 : 101, {}, {}}; }
  int resolved_n(int dim) const { return n > 0 ? n : standard(dim).n; }
};

/// Grid points failing the filter are skipped; points outside the mesh are
/// always skipped.
using PointFilter = std::function<bool(const Point&)>;

struct ErrorReport {
  double l2_velocity = 0.0;
  double h1_velocity = 0.0;
  double l2_pressure = 0.0;
  double div_sup = 0.0;
  double residual_L = 0.0;
  double wall_time = 0.0;
  int grid_n = 0;
  long points = 0;  // grid points actually evaluated

  static std::string csv_header();
  std::string csv_row() const;
};

/// Values and derivatives of a flow solution at one point.
struct FieldSample {
  Point u;
  Jacobian grad_u;  // (k, l) = d u_k / d x_l
  Point lap_u;
  double p = 0.0;
  Point grad_p;
};

/// Calls `visit(x, sample)` for every included grid point in a fixed order.
void for_each_grid_point(const FlowSolution& solution, const GridSpec& grid, const PointFilter& filter,
                         bool with_laplacian, const std::function<void(const Point&, const FieldSample&)>& visit);

/// l2/h1 velocity errors, mean-aligned pressure error and divergence sup.
ErrorReport grid_errors(const FlowSolution& solution, const ExactSolution& exact, const GridSpec& grid = {},
                        const PointFilter& filter = {});

double div_sup(const FlowSolution& solution, const GridSpec& grid = {}, const PointFilter& filter = {});

/// RMS |-mu Lap u + (u.grad)u + grad p - f| + RMS |div u| over the grid; the
/// convective term only when `convective`.
double residual_L(const FlowSolution& solution, const ViscosityField& mu, const VectorFunction& f,
                  const GridSpec& grid = {}, const PointFilter& filter = {}, bool convective = false);

/// rate_j = log(e_{j-1}/e_j) / log(h_{j-1}/h_j); missing where undefined.
std::vector<std::optional<double>> convergence_rates(const std::vector<double>& errors, const std::vector<double>& hs);

}  // namespace splocate
