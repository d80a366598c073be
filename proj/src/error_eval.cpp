#include "splocate/error_eval.hpp"

#include "splocate/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace splocate {

std::string ErrorReport::csv_header() {
  return "l2_velocity,h1_velocity,l2_pressure,div_sup,residual_L,grid_n,points,wall_time";
}

std::string ErrorReport::csv_row() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.6e,%.6e,%.6e,%.6e,%.6e,%d,%ld,%.3f", l2_velocity, h1_velocity, l2_pressure, div_sup,
                residual_L, grid_n, points, wall_time);
  return buf;
}

namespace {

// Grid points are visited in slabs along the last axis; each slab is
// evaluated in parallel and then handed to the visitor sequentially.
struct GridWalker {
  int dim;
  int n;
  Point lo;
  Point step;

  long slab_size() const { return dim == 2 ? n : static_cast<long>(n) * n; }

  Point at(int slab, long k) const {
    Point x(dim);
    if (dim == 2) {
      x << lo(0) + step(0) * k, lo(1) + step(1) * slab;
    } else {
      x << lo(0) + step(0) * (k % n), lo(1) + step(1) * (k / n), lo(2) + step(2) * slab;
    }
    return x;
  }
};

}  // namespace

void for_each_grid_point(const FlowSolution& solution, const GridSpec& grid, const PointFilter& filter,
                         bool with_laplacian, const std::function<void(const Point&, const FieldSample&)>& visit) {
  const SimplicialMesh& mesh = solution.mesh();
  const int d = mesh.dim();
  const int n = grid.resolved_n(d);
  if (n < 2) throw Error("grid needs at least 2 points per axis");
  GridWalker w{d, n, grid.lo.value_or(mesh.lower_corner()), Point()};
  const Point hi = grid.hi.value_or(mesh.upper_corner());
  w.step = (hi - w.lo) / (n - 1);

  const PointLocator locator(solution.pressure.mesh);
  const int D = solution.pressure.degree;
  const unsigned parts = kValues | kGradients | (with_laplacian ? kLaplacians : 0u);
  const long per_slab = w.slab_size();

  std::vector<FieldSample> samples(per_slab);
  std::vector<char> keep(per_slab);
  for (int slab = 0; slab < n; ++slab) {
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (long k = 0; k < per_slab; ++k) {
      const Point x = w.at(slab, k);
      keep[k] = 0;
      if (filter && !filter(x)) continue;
      const int t = locator.locate(x);
      if (t < 0) continue;
      keep[k] = 1;
      const LocalBasis lb = local_basis(mesh, D, t, x, parts);
      FieldSample& s = samples[k];
      s.u.resize(d);
      s.grad_u.resize(d, d);
      s.lap_u = Point::Zero(d);
      for (int c = 0; c < d; ++c) {
        const auto coef = solution.velocity[c].block(t);
        s.u(c) = lb.value.dot(coef);
        for (int l = 0; l < d; ++l) s.grad_u(c, l) = lb.gradient.col(l).dot(coef);
        if (with_laplacian) s.lap_u(c) = lb.laplacian.dot(coef);
      }
      const auto pc = solution.pressure.block(t);
      s.p = lb.value.dot(pc) + solution.gauge_shift;
      s.grad_p.resize(d);
      for (int l = 0; l < d; ++l) s.grad_p(l) = lb.gradient.col(l).dot(pc);
    }
    for (long k = 0; k < per_slab; ++k) {
      if (keep[k]) visit(w.at(slab, k), samples[k]);
    }
  }
}

ErrorReport grid_errors(const FlowSolution& solution, const ExactSolution& exact, const GridSpec& grid,
                        const PointFilter& filter) {
  const int d = solution.dim();
  if (exact.dim != d) throw Error("exact solution dimension does not match the solution");
  double sum_u = 0.0;
  double sum_h1 = 0.0;
  double div_max = 0.0;
  std::vector<double> p_err;
  for_each_grid_point(solution, grid, filter, false, [&](const Point& x, const FieldSample& s) {
    sum_u += (s.u - exact.velocity(x)).squaredNorm();
    sum_h1 += (s.grad_u - exact.velocity_jacobian(x)).squaredNorm();
    div_max = std::max(div_max, std::abs(s.grad_u.trace()));
    p_err.push_back(s.p - exact.pressure(x));
  });
  if (p_err.empty()) throw Error("no grid points inside the evaluation region");
  const double count = static_cast<double>(p_err.size());
  double mean = 0.0;
  for (double e : p_err) mean += e;
  mean /= count;
  double sum_p = 0.0;
  for (double e : p_err) sum_p += (e - mean) * (e - mean);

  ErrorReport r;
  r.l2_velocity = std::sqrt(sum_u / count);
  r.h1_velocity = std::sqrt(sum_h1 / count);
  r.l2_pressure = std::sqrt(sum_p / count);
  r.div_sup = div_max;
  r.grid_n = grid.resolved_n(d);
  r.points = static_cast<long>(p_err.size());
  return r;
}

double div_sup(const FlowSolution& solution, const GridSpec& grid, const PointFilter& filter) {
  double m = 0.0;
  for_each_grid_point(solution, grid, filter, false,
                      [&](const Point&, const FieldSample& s) { m = std::max(m, std::abs(s.grad_u.trace())); });
  return m;
}

double residual_L(const FlowSolution& solution, const ViscosityField& mu, const VectorFunction& f, const GridSpec& grid,
                  const PointFilter& filter, bool convective) {
  double sum_m = 0.0;
  double sum_d = 0.0;
  long count = 0;
  for_each_grid_point(solution, grid, filter, true, [&](const Point& x, const FieldSample& s) {
    Point r = -mu(x) * s.lap_u + s.grad_p - f(x);
    if (convective) r += s.grad_u * s.u;
    sum_m += r.squaredNorm();
    const double div = s.grad_u.trace();
    sum_d += div * div;
    ++count;
  });
  if (count == 0) throw Error("no grid points inside the evaluation region");
  return std::sqrt(sum_m / count) + std::sqrt(sum_d / count);
}

std::vector<std::optional<double>> convergence_rates(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() != hs.size()) throw Error("need one mesh size per error");
  for (std::size_t j = 1; j < hs.size(); ++j) {
    if (!(hs[j] < hs[j - 1])) throw Error("mesh sizes must be strictly decreasing");
  }
  std::vector<std::optional<double>> rates;
  for (std::size_t j = 1; j < errors.size(); ++j) {
    if (errors[j] > 0.0 && errors[j - 1] > 0.0 && std::isfinite(errors[j]) && std::isfinite(errors[j - 1])) {
      rates.push_back(std::log(errors[j - 1] / errors[j]) / std::log(hs[j - 1] / hs[j]));
    } else {
      rates.push_back(std::nullopt);
    }
  }
  return rates;
}

}  // namespace splocate
