#include "splocate/error_eval.hpp"
#include "splocate/manufactured.hpp"
#include "splocate/stokes.hpp"

#include <doctest.h>

#include <cmath>

using namespace splocate;

namespace {

Point p2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

FlowProblem box_problem(const ExactSolution& e, const ViscosityField& mu, double h, int D = 7, int r = 2) {
  FlowProblem p;
  p.mesh = std::make_shared<const SimplicialMesh>(uniform_box_mesh(e.domain_lo, e.domain_hi, h));
  p.degree = p.collocation_degree = D;
  p.smoothness = r;
  p.viscosity = mu;
  p.source = rhs_stokes(e, mu);
  p.boundary = e.velocity;
  return p;
}

SparseMatrix dense_to_sparse(const Eigen::MatrixXd& d) { return d.sparseView(); }

// coefficients with the pressure shifted so that both have zero mean weight
Eigen::VectorXd aligned(const FlowProblem& problem, const FlowSolution& s) {
  Eigen::VectorXd c = s.coefficients();
  const double total_volume = 1.0;
  const double mean = pressure_integral(s.pressure) / total_volume;
  c.tail(problem.field_size()).array() -= mean;
  return c;
}

}  // namespace

TEST_CASE("least squares toys") {
  Eigen::MatrixXd a(3, 1);
  a << 1, 1, 1;
  Eigen::VectorXd b(3);
  b << 1, 1, 4;
  CHECK(least_squares(dense_to_sparse(a), b).x(0) == doctest::Approx(2.0));

  Eigen::MatrixXd sq(2, 2);
  sq << 2, 1, 1, 3;
  Eigen::VectorXd rhs(2);
  rhs << 1, 2;
  const LeastSquaresResult r = least_squares(dense_to_sparse(sq), rhs);
  CHECK((sq * r.x - rhs).norm() <= 1e-12 * rhs.norm());
  CHECK(r.rank == 2);

  // rank deficient: minimum-norm answer
  Eigen::MatrixXd dep(2, 2);
  dep << 1, 1, 2, 2;
  Eigen::VectorXd db(2);
  db << 2, 4;
  const LeastSquaresResult mn = least_squares(dense_to_sparse(dep), db);
  CHECK(mn.rank == 1);
  CHECK(mn.x(0) == doctest::Approx(1.0));
  CHECK(mn.x(1) == doctest::Approx(1.0));

  SolverOptions it;
  it.backend = LeastSquaresBackend::Iterative;
  CHECK(least_squares(dense_to_sparse(a), b, it).x(0) == doctest::Approx(2.0));
}

TEST_CASE("row structure") {
  const ExactSolution e = exact("u1");
  const FlowProblem p = box_problem(e, constant_viscosity(1), 0.5);
  const CollocationSystem sys = assemble_stokes(p);
  const UniquePointSet pts = unique_domain_points(*p.mesh, 7);
  int n_in = 0;
  for (bool b : pts.on_boundary) n_in += !b;
  CHECK(sys.momentum.rows() == 2 * n_in);
  CHECK(sys.divergence.rows() == n_in);
  CHECK(sys.momentum.rows() + sys.divergence.rows() == 3 * n_in);
  CHECK(sys.boundary.rows() == 2 * (pts.size() - n_in));
  CHECK(sys.gauge.rows() == 1);
  CHECK(sys.cols() == 3 * 8 * 36);
}

TEST_CASE("exact fields satisfy the collocation rows") {
  const ExactSolution e = exact("u1");
  const FlowProblem p = box_problem(e, viscosity("mu1"), 0.5);
  const CollocationSystem sys = assemble_stokes(p);
  Eigen::VectorXd c(sys.cols());
  const int n = p.field_size();
  c.segment(0, n) = interpolate(p.mesh, 7, [&](const Point& x) { return e.velocity(x)(0); }).coeffs;
  c.segment(n, n) = interpolate(p.mesh, 7, [&](const Point& x) { return e.velocity(x)(1); }).coeffs;
  c.segment(2 * n, n) = interpolate(p.mesh, 7, e.pressure).coeffs;
  SparseMatrix A;
  Eigen::VectorXd b;
  sys.stack(RowWeights{}, A, b);
  CHECK((A * c - b).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("zero data gives zero flow") {
  FlowProblem p;
  p.mesh = std::make_shared<const SimplicialMesh>(uniform_box_mesh(p2(0, 0), p2(1, 1), 0.5));
  p.degree = p.collocation_degree = 5;
  p.viscosity = constant_viscosity(1);
  p.source = [](const Point&) { return Point(Point::Zero(2)); };
  p.boundary = p.source;
  const FlowSolution s = solve_stokes(p);
  CHECK(s.coefficients().cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(s.residual_norm <= 1e-10);
}

TEST_CASE("constant pressure only moves the gauge row") {
  const ExactSolution e = exact("u1");
  const FlowProblem p = box_problem(e, constant_viscosity(1), 0.5, 5);
  const CollocationSystem sys = assemble_stokes(p);
  SparseMatrix A;
  Eigen::VectorXd b;
  sys.stack(RowWeights{}, A, b);
  Eigen::VectorXd c = Eigen::VectorXd::Random(sys.cols());
  Eigen::VectorXd shifted = c;
  shifted.tail(p.field_size()).array() += 0.75;
  const Eigen::VectorXd diff = A * shifted - A * c;
  const Eigen::Index gauge_row = sys.momentum.rows() + sys.divergence.rows() + sys.boundary.rows() + sys.smoothness.rows();
  for (Eigen::Index i = 0; i < diff.size(); ++i) {
    if (i == gauge_row)
      CHECK(std::abs(diff(i)) > 1e-6);
    else
      CHECK(std::abs(diff(i)) <= 1e-11);
  }
}

TEST_CASE("solution is linear in the data") {
  const ExactSolution e1 = exact("u1");
  const ViscosityField mu = viscosity("mu2");
  FlowProblem a = box_problem(e1, mu, 0.5, 5);
  FlowProblem b = a;
  b.source = [](const Point& x) { return Point(p2(std::sin(3 * x(0)), x(0) * x(1))); };
  b.boundary = [](const Point& x) { return Point(p2(x(1) * x(1), std::cos(x(0)))); };
  FlowProblem sum = a;
  sum.source = [=](const Point& x) { return Point(a.source(x) + b.source(x)); };
  sum.boundary = [=](const Point& x) { return Point(a.boundary(x) + b.boundary(x)); };
  const Eigen::VectorXd ca = aligned(a, solve_stokes(a));
  const Eigen::VectorXd cb = aligned(b, solve_stokes(b));
  const Eigen::VectorXd cs = aligned(sum, solve_stokes(sum));
  CHECK((cs - ca - cb).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, cs.cwiseAbs().maxCoeff()));
}

TEST_CASE("polynomial Stokes is reproduced") {
  const ExactSolution e = exact("u1");
  const FlowSolution s = solve_stokes(box_problem(e, constant_viscosity(1), 0.5));
  const ErrorReport r = grid_errors(s, e, GridSpec{101});
  CHECK(r.l2_velocity <= 1e-8);
  CHECK(r.h1_velocity <= 1e-7);
  CHECK(r.l2_pressure <= 1e-7);
  CHECK(r.div_sup <= 1e-8);
}

TEST_CASE("hydrostatic pressure with variable viscosity") {
  const ExactSolution e = exact("u2");
  const FlowSolution s = solve_stokes(box_problem(e, viscosity("mu1"), 0.5));
  CHECK(grid_errors(s, e, GridSpec{101}).l2_velocity <= 1e-8);
}

TEST_CASE("iterative backend agrees with QR") {
  const ExactSolution e = exact("u1");
  const FlowProblem p = box_problem(e, constant_viscosity(1), 0.5, 5);
  SolverOptions it;
  it.backend = LeastSquaresBackend::Iterative;
  const Eigen::VectorXd qr = aligned(p, solve_stokes(p));
  const Eigen::VectorXd cg = aligned(p, solve_stokes(p, it));
  CHECK((qr - cg).cwiseAbs().maxCoeff() <= 1e-5 * qr.cwiseAbs().maxCoeff());
}

TEST_CASE("invalid problems are rejected") {
  const ExactSolution e = exact("u1");
  FlowProblem p = box_problem(e, constant_viscosity(1), 0.5);
  p.smoothness = 7;
  CHECK_THROWS_AS(validate(p), Error);
  p.smoothness = 2;
  p.collocation_degree = 0;
  CHECK_THROWS_AS(validate(p), Error);
}
