#include "splocate/error_eval.hpp"
#include "splocate/manufactured.hpp"
#include "splocate/navier_stokes.hpp"
#include "splocate/spline_space.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace splocate;

namespace {

FlowProblem ns_problem(const ExactSolution& e, const ViscosityField& mu, double h, int D = 7) {
  FlowProblem p;
  p.mesh = std::make_shared<const SimplicialMesh>(uniform_box_mesh(e.domain_lo, e.domain_hi, h));
  p.degree = p.collocation_degree = D;
  p.viscosity = mu;
  p.source = rhs_navier_stokes(e, mu);
  p.boundary = e.velocity;
  return p;
}

double max_abs_diff(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  const SparseMatrix d = a - b;
  double m = 0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

Eigen::VectorXd gauge_aligned(const FlowSolution& s) {
  Eigen::VectorXd c = s.coefficients();
  const Eigen::Index n = s.pressure.coeffs.size();
  c.tail(n).array() -= pressure_integral(s.pressure);
  return c;
}

}  // namespace

TEST_CASE("linearizing about zero gives the Stokes system") {
  const ExactSolution e = exact("u1");
  const FlowProblem p = ns_problem(e, constant_viscosity(1), 0.5, 5);
  const FlowSolution zero = make_solution(p, Eigen::VectorXd::Zero(3 * p.field_size()));
  const CollocationSystem lin = assemble_newton_step(p, zero);
  const CollocationSystem st = assemble_stokes(p);
  CHECK(max_abs_diff(lin.momentum, st.momentum) == 0.0);
  CHECK((lin.momentum_rhs - st.momentum_rhs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("momentum row pattern follows the velocity gradient") {
  const ExactSolution e = exact("u1");
  const FlowProblem p = ns_problem(e, constant_viscosity(1), 0.5, 4);
  // u_n = (y^2, 0): d2 u1 vanishes only on y = 0
  Eigen::VectorXd c = Eigen::VectorXd::Zero(3 * p.field_size());
  c.head(p.field_size()) = interpolate(p.mesh, 4, [](const Point& x) { return x(1) * x(1); }).coeffs;
  const FlowSolution un = make_solution(p, c);
  const CollocationSystem sys = assemble_newton_step(p, un);
  const int n_in = sys.interior.size();
  const int n = p.field_size();
  for (int i = 0; i < n_in; ++i) {
    bool touches_c2 = false;
    for (SparseMatrix::InnerIterator it(sys.momentum, i); it; ++it)
      if (it.col() >= n && it.col() < 2 * n && it.value() != 0.0) touches_c2 = true;
    const double d2u1 = 2 * sys.interior.points(i, 1);
    CHECK(touches_c2 == (std::abs(d2u1) > 1e-14));
  }
}

TEST_CASE("continuation schedule") {
  ContinuationConfig c;
  const std::vector<double> f = continuation_floors(c, 1e-3);
  REQUIRE(f.size() == 4);
  CHECK(f[0] == 1.0);
  CHECK(f[3] == doctest::Approx(1e-3));
  CHECK(continuation_floors(c, 1.0).size() == 1);
  c.max_continuation = 2;
  CHECK_THROWS_AS(continuation_floors(c, 1e-6), Error);
}

TEST_CASE("polynomial Navier-Stokes is reproduced and is a fixed point") {
  const ExactSolution e = exact("u1");
  const FlowProblem p = ns_problem(e, constant_viscosity(1), 0.5);
  const NavierStokesResult r = solve_navier_stokes(p);
  CHECK(grid_errors(r.solution, e, GridSpec{101}).l2_velocity <= 1e-8);
  CHECK(!r.trace.empty());
  CHECK(r.trace.steps.back().diff_norm < 1e-10);
  const CollocationSystem lin = assemble_newton_step(p, r.solution);
  CHECK(nonlinear_residual(lin, r.solution.coefficients()) <= 1e-9);

  std::ostringstream csv;
  r.trace.write_csv(csv);
  CHECK(csv.str().rfind("stage,iter,nu,diff_norm,residual,seconds", 0) == 0);
}

TEST_CASE("zero velocity makes Navier-Stokes equal Stokes") {
  const ExactSolution e = exact("u2");
  const FlowProblem p = ns_problem(e, constant_viscosity(1), 0.5, 5);
  const Eigen::VectorXd ns = gauge_aligned(solve_navier_stokes(p).solution);
  const Eigen::VectorXd st = gauge_aligned(solve_stokes(p));
  CHECK((ns - st).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, st.cwiseAbs().maxCoeff()));
}

TEST_CASE("Newton budget exhaustion reports the trace") {
  const ExactSolution e = exact("ns_trig");
  const FlowProblem p = ns_problem(e, constant_viscosity(1), 0.5, 5);
  ContinuationConfig c;
  c.max_newton = 1;
  try {
    solve_navier_stokes(p, c);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& ex) {
    CHECK(ex.trace().steps.size() == 1);
  }
}

TEST_CASE("lid driven cavity") {
  Point lo = Point::Zero(2), hi = Point::Ones(2);
  auto mesh = std::make_shared<const SimplicialMesh>(uniform_box_mesh(lo, hi, 0.125));
  const NavierStokesResult r = driven_cavity(mesh, 7, 2, constant_viscosity(1));
  const FlowSolution& s = r.solution;
  // the lid data jumps at the two top corners, so the least-squares fit
  // overshoots there and cannot satisfy the boundary rows exactly
  double umax = 0;
  for_each_grid_point(s, GridSpec{41}, {}, false,
                      [&](const Point&, const FieldSample& f) { umax = std::max(umax, std::abs(f.u(0))); });
  CHECK(umax <= 1.1);
  const BoundaryBlock bb = boundary_block(*mesh, 7, 7, cavity_lid, 2);
  double bres = 0;
  for (int k = 0; k < 2; ++k) bres = std::max(bres, (bb.B * s.velocity[k].coeffs - bb.G.col(k)).cwiseAbs().maxCoeff());
  Point top(2), below(2);
  top << 0.5, 1.0;
  below << 0.5, 0.2;
  CHECK(std::abs(bform_eval(s.velocity[0], top) - 1) <= bres);
  CHECK(std::abs(bform_eval(s.velocity[1], top)) <= bres);
  // primary vortex: return flow under the lid
  CHECK(bform_eval(s.velocity[0], below) < 0);

  double div = 0;
  const UniquePointSet pts = unique_domain_points(*mesh, 7);
  for (int i = 0; i < pts.size(); ++i) {
    if (pts.on_boundary[i]) continue;
    const Point x = pts.point(i);
    if (std::min(std::hypot(x(0), x(1) - 1), std::hypot(x(0) - 1, x(1) - 1)) < 0.25) continue;
    const int t = pts.owner[i];
    div = std::max(div, std::abs(bform_derivative(s.velocity[0], t, x, Eigen::Vector2i(1, 0)) +
                                 bform_derivative(s.velocity[1], t, x, Eigen::Vector2i(0, 1))));
  }
  CHECK(div <= 1e-2);
}
