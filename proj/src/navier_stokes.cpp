#include "splocate/navier_stokes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

namespace splocate {

void NewtonTrace::write_csv(std::ostream& out) const {
  out << "stage,iter,nu,diff_norm,residual,seconds\n";
  char line[192];
  for (const NewtonStep& s : steps) {
    std::snprintf(line, sizeof line, "%d,%d,%.6e,%.6e,%.6e,%.4f\n", s.stage, s.iteration, s.nu, s.diff_norm, s.residual,
                  s.seconds);
    out << line;
  }
}

CollocationSystem assemble_newton_step(const FlowProblem& problem, const AssemblyLayout& layout,
                                       const ViscosityField& mu, const FlowSolution& u_n) {
  if (u_n.dim() != problem.dim()) throw Error("Newton iterate has the wrong number of components");
  for (const SplineField& f : u_n.velocity) {
    if (f.mesh.get() != problem.mesh.get() && f.mesh->num_simplices() != problem.mesh->num_simplices()) {
      throw Error("Newton iterate lives on a different mesh");
    }
  }
  return assemble_system(problem, layout, mu, &u_n.velocity);
}

CollocationSystem assemble_newton_step(const FlowProblem& problem, const FlowSolution& u_n) {
  return assemble_newton_step(problem, standard_layout(problem), problem.viscosity, u_n);
}

double nonlinear_residual(const CollocationSystem& sys, const Eigen::VectorXd& c) {
  double r = 0.0;
  if (sys.momentum.rows() > 0) r = (sys.momentum * c - sys.momentum_rhs).cwiseAbs().maxCoeff();
  if (sys.divergence.rows() > 0) r = std::max(r, (sys.divergence * c).cwiseAbs().maxCoeff());
  return r;
}

std::vector<double> continuation_floors(const ContinuationConfig& config, double min_target) {
  if (!(config.decade_factor > 1.0)) throw Error("continuation factor must exceed 1");
  if (!(config.mu0 > 0.0)) throw Error("mu0 must be positive");
  std::vector<double> floors{config.mu0};
  while (floors.back() > min_target) {
    if (static_cast<int>(floors.size()) > config.max_continuation) {
      throw Error("continuation exhausted before reaching the target viscosity");
    }
    floors.push_back(floors.back() / config.decade_factor);
  }
  return floors;
}

namespace {

ViscosityField floored(const ViscosityField& target, double nu) {
  return ViscosityField(target.id(), [target, nu](const Point& x) { return std::max(target(x), nu); });
}

}  // namespace

NavierStokesResult solve_navier_stokes(const FlowProblem& problem, const AssemblyLayout& layout,
                                       const ContinuationConfig& config, const SolverOptions& options) {
  validate(problem);
  if (!(config.epsilon > 0.0)) throw Error("Newton tolerance must be positive");
  if (config.max_newton < 1) throw Error("max_newton must be at least 1");
  const ViscosityField& target = config.mu_target.valid() ? config.mu_target : problem.viscosity;

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i = 0; i < layout.interior.size(); ++i) {
    const double m = target(layout.interior.points.row(i).transpose());
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  if (layout.interior.size() == 0) throw Error("no interior collocation points");
  if (hi > config.mu0 * (1.0 + 1e-12)) throw Error("mu0 must bound the target viscosity from above");
  const std::vector<double> floors = continuation_floors(config, lo);

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  // Step 1: Stokes at the first floor.
  const ViscosityField mu_first = floored(target, floors.front());
  CollocationSystem sys = assemble_system(problem, layout, mu_first);
  LeastSquaresResult ls = solve_least_squares(sys, options);
  FlowSolution u = make_solution(problem, ls.x);

  NewtonTrace trace;
  for (int stage = 0; stage < static_cast<int>(floors.size()); ++stage) {
    const double nu = floors[stage];
    const ViscosityField mu = floored(target, nu);
    bool converged = false;
    for (int it = 1; it <= config.max_newton; ++it) {
      sys = assemble_system(problem, layout, mu, &u.velocity);
      const Eigen::VectorXd c = u.coefficients();
      const double res = nonlinear_residual(sys, c);
      ls = solve_least_squares(sys, options);
      if (!ls.x.allFinite()) throw NonConvergence("Newton step produced non-finite coefficients", trace);
      FlowSolution next = make_solution(problem, ls.x);
      const double diff = (next.velocity_coefficients() - u.velocity_coefficients()).cwiseAbs().maxCoeff();
      trace.steps.push_back({stage, it, nu, diff, res, elapsed()});
      next.residual_norm = ls.residual_norm;
      next.rank = ls.rank;
      u = std::move(next);
      if (diff < config.epsilon) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      char msg[160];
      std::snprintf(msg, sizeof msg, "Newton did not converge in %d steps at continuation floor %.3e", config.max_newton,
                    nu);
      throw NonConvergence(msg, trace);
    }
  }
  u.rows = sys.rows();
  u.cols = sys.cols();
  u.wall_time = elapsed();
  return {std::move(u), std::move(trace)};
}

NavierStokesResult solve_navier_stokes(const FlowProblem& problem, const ContinuationConfig& config,
                                       const SolverOptions& options) {
  return solve_navier_stokes(problem, standard_layout(problem), config, options);
}

Point cavity_lid(const Point& x) {
  Point u = Point::Zero(x.size());
  const double tol = 1e-12;
  if (std::abs(x(1) - 1.0) < tol && x(0) > tol && x(0) < 1.0 - tol) u(0) = 1.0;
  return u;
}

NavierStokesResult driven_cavity(MeshPtr mesh, int degree, int smoothness, const ViscosityField& mu,
                                 const SolverOptions& options) {
  if (!mesh || mesh->dim() != 2) throw Error("driven cavity needs a 2D mesh");
  const Point lo = mesh->lower_corner();
  const Point hi = mesh->upper_corner();
  if ((lo - Point::Zero(2)).norm() > 1e-12 || (hi - Point::Ones(2)).norm() > 1e-12) {
    throw Error("driven cavity needs a unit-square mesh");
  }
  FlowProblem p;
  p.mesh = std::move(mesh);
  p.degree = degree;
  p.collocation_degree = degree;
  p.smoothness = smoothness;
  p.viscosity = mu;
  p.source = [](const Point& x) { return Point::Zero(x.size()); };
  p.boundary = cavity_lid;
  return solve_navier_stokes(p, ContinuationConfig{}, options);
}

}  // namespace splocate
