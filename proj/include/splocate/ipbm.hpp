#pragma once

#include "splocate/navier_stokes.hpp"
#include "splocate/stokes.hpp"

#include <functional>
#include <string>

namespace splocate {

/// Domain {phi <= 0} immersed in a background mesh. `boundary(t)` for t in
/// [0, 1) traces the boundary curve once.
struct ImplicitDomain {
  std::string type;
  ScalarFunction phi;
  std::function<Point(double)> boundary;
  Point lo;
  Point hi;
  bool full_mesh = false;  // the whole background mesh; eta = its boundary domain points

  bool inside(const Point& x) const { return phi(x) <= 0.0; }
};

ImplicitDomain disk_domain(const Point& center, double radius);
ImplicitDomain ellipse_domain(const Point& center, double a, double b);
/// r(theta) = r0 + amplitude cos(lobes theta) around `center`.
ImplicitDomain flower_domain(const Point& center, double r0, double amplitude, int lobes);
ImplicitDomain rounded_square_domain(const Point& center, double half_width, double corner_radius);
/// Simple polygon given counter- or clockwise; phi is the signed distance.
ImplicitDomain polygon_domain(const Eigen::MatrixX2d& loop);
/// phi = -1 everywhere; boundary rows sit on the background mesh boundary.
ImplicitDomain full_mesh_domain(int dim);

/// "disk", "disk:cx=0.5,cy=0.5,r=0.4", "ellipse:a=..,b=..", "flower:r0=..,amp=..,k=..",
/// "rounded_square:half=..,radius=..", "polygon:path", "full".
ImplicitDomain parse_domain(const std::string& spec, int dim = 2);

struct PenaltyConfig {
  double lambda = 1.0;
  double boundary_spacing = 0.0;  // 0: mesh_size / D
  double w_H = 1.0;
  // PDE rows also at the domain points of active simplices that fall outside
  // the domain (f must be defined there). Without them cut simplices leave the
  // least-squares system rank deficient.
  bool exterior_rows = true;
};

struct Classification {
  CollocationPoints interior;
  std::vector<bool> active;
  int active_count = 0;
};

/// Interior collocation points (unique degree-D' domain points with phi <= 0,
/// off the background boundary) and active simplices: those with a domain
/// point or vertex where phi <= 0, plus any listed in `extra_active`.
Classification classify_collocation(const SimplicialMesh& mesh, int collocation_degree, const ImplicitDomain& domain,
                                    const std::vector<int>& extra_active = {});

/// Off-boundary unique domain points owned by or lying in an active simplex.
CollocationPoints active_collocation(const SimplicialMesh& mesh, int collocation_degree,
                                     const std::vector<bool>& active);

/// Arclength-uniform boundary samples, count ceil(perimeter / spacing).
Eigen::MatrixXd sample_boundary(const ImplicitDomain& domain, double spacing);

double boundary_length(const ImplicitDomain& domain);

AssemblyLayout ipbm_layout(const FlowProblem& problem, const ImplicitDomain& domain, const PenaltyConfig& config);

FlowSolution solve_ipbm(const FlowProblem& problem, const ImplicitDomain& domain, const PenaltyConfig& config = {},
                        const SolverOptions& options = {});

NavierStokesResult solve_ipbm_navier_stokes(const FlowProblem& problem, const ImplicitDomain& domain,
                                            const PenaltyConfig& config = {}, const ContinuationConfig& continuation = {},
                                            SolverOptions options = {});

}  // namespace splocate
