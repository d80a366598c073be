#include "splocate/error_eval.hpp"
#include "splocate/manufactured.hpp"

#include <doctest.h>

#include <cmath>

using namespace splocate;

namespace {

const double kPi = std::acos(-1.0);

MeshPtr unit_square(double h) {
  Point lo = Point::Zero(2), hi = Point::Ones(2);
  return std::make_shared<const SimplicialMesh>(uniform_box_mesh(lo, hi, h));
}

FlowProblem problem_on(MeshPtr mesh, int D) {
  FlowProblem p;
  p.mesh = std::move(mesh);
  p.degree = p.collocation_degree = D;
  return p;
}

// B-form interpolants of two velocity components and a pressure
FlowSolution fields(MeshPtr mesh, int D, const ScalarFunction& u, const ScalarFunction& v, const ScalarFunction& p) {
  const FlowProblem pr = problem_on(mesh, D);
  const int n = pr.field_size();
  Eigen::VectorXd c(3 * n);
  c.segment(0, n) = interpolate(mesh, D, u).coeffs;
  c.segment(n, n) = interpolate(mesh, D, v).coeffs;
  c.segment(2 * n, n) = interpolate(mesh, D, p).coeffs;
  return make_solution(pr, c);
}

FlowSolution from_exact(MeshPtr mesh, const ExactSolution& e, double dp = 0, double du = 0) {
  return fields(
      mesh, 7, [&](const Point& x) { return e.velocity(x)(0) + du * std::sin(kPi * x(0)); },
      [&](const Point& x) { return e.velocity(x)(1); }, [&](const Point& x) { return e.pressure(x) + dp; });
}

}  // namespace

TEST_CASE("exact fields give zero error") {
  const ExactSolution e = exact("u1");
  const ErrorReport r = grid_errors(from_exact(unit_square(0.5), e), e, GridSpec{51});
  CHECK(r.l2_velocity <= 1e-12);
  CHECK(r.h1_velocity <= 1e-11);
  CHECK(r.l2_pressure <= 1e-11);
  CHECK(r.div_sup <= 1e-9);
  CHECK(r.grid_n == 51);
  CHECK(r.points == 51 * 51);
}

TEST_CASE("pressure is compared after mean alignment") {
  const ExactSolution e = exact("u1");
  const ErrorReport r = grid_errors(from_exact(unit_square(0.5), e, 3.25), e, GridSpec{51});
  CHECK(r.l2_pressure <= 1e-11);
}

TEST_CASE("sine perturbation has the closed-form RMS") {
  const ExactSolution e = exact("u1");
  const int n = 101;
  const ErrorReport r = grid_errors(from_exact(unit_square(0.25), e, 0, 1e-3), e, GridSpec{n});
  // discrete mean of sin^2 over the grid including both ends
  double ms = 0;
  for (int i = 0; i < n; ++i) ms += std::pow(std::sin(kPi * i / (n - 1.0)), 2);
  ms /= n;
  CHECK(r.l2_velocity == doctest::Approx(1e-3 * std::sqrt(ms)).epsilon(1e-6));
  CHECK(r.l2_velocity == doctest::Approx(1e-3 / std::sqrt(2.0)).epsilon(0.01));
}

TEST_CASE("filter and custom box") {
  const ExactSolution e = exact("u1");
  const FlowSolution s = from_exact(unit_square(0.5), e);
  const ErrorReport half = grid_errors(s, e, GridSpec{11}, [](const Point& x) { return x(0) <= 0.5; });
  CHECK(half.points == 6 * 11);
  Point lo(2), hi(2);
  lo << -1, -1;
  hi << 1, 1;
  // points outside the mesh are skipped
  CHECK(grid_errors(s, e, GridSpec{21, lo, hi}).points == 11 * 11);
  CHECK_THROWS_AS(grid_errors(s, e, GridSpec{1}), Error);
}

TEST_CASE("divergence sup") {
  const MeshPtr m = unit_square(0.5);
  auto zero = [](const Point&) { return 0.0; };
  const FlowSolution a = fields(m, 3, [](const Point& x) { return x(0); }, zero, zero);
  CHECK(div_sup(a, GridSpec{21}) == doctest::Approx(1.0));
  const FlowSolution b = fields(m, 3, [](const Point& x) { return x(1); }, [](const Point& x) { return x(0); }, zero);
  CHECK(div_sup(b, GridSpec{21}) <= 1e-12);
  const ExactSolution e = exact("u1");
  CHECK(div_sup(from_exact(m, e), GridSpec{51}) <= 1e-9);
}

TEST_CASE("residual measure") {
  const MeshPtr m = unit_square(0.5);
  auto zero = [](const Point&) { return 0.0; };
  const FlowSolution z = fields(m, 3, zero, zero, zero);
  auto f = [](const Point&) {
    Point v(2);
    v << 1, 0;
    return v;
  };
  CHECK(residual_L(z, constant_viscosity(1), f, GridSpec{21}) == doctest::Approx(1.0));

  // kappa (u, p, f) scales the Stokes residual by kappa
  const ExactSolution e = exact("u1");
  const ViscosityField mu = constant_viscosity(1);
  const VectorFunction rhs = rhs_stokes(e, mu);
  const FlowSolution s = from_exact(m, e, 0, 1e-2);
  const double kappa = 3.0;
  const FlowSolution ks = make_solution(problem_on(m, 7), kappa * s.coefficients());
  const double r1 = residual_L(s, mu, rhs, GridSpec{31});
  const double rk = residual_L(ks, mu, [&](const Point& x) { return Point(kappa * rhs(x)); }, GridSpec{31});
  CHECK(r1 > 1e-4);
  CHECK(rk == doctest::Approx(kappa * r1).epsilon(1e-10));

  // the exact discrete solution of a polynomial problem
  CHECK(residual_L(from_exact(m, e), mu, rhs, GridSpec{31}) <= 1e-8);
  CHECK(residual_L(from_exact(m, e), mu, rhs_navier_stokes(e, mu), GridSpec{31}, {}, true) <= 1e-8);
}

TEST_CASE("convergence rates") {
  auto r = convergence_rates({4e-2, 1e-2}, {0.5, 0.25});
  REQUIRE(r.size() == 1);
  CHECK(*r[0] == doctest::Approx(2.0));
  r = convergence_rates({7.38e-2, 2.50e-3}, {0.5, 0.25});
  CHECK(std::round(*r[0] * 100) / 100 == 4.88);
  // printed errors are rounded, so the printed rate is matched to its last digit
  r = convergence_rates({3.53e-2, 1.36e-3}, {0.5, 0.25});
  CHECK(std::abs(*r[0] - 4.69) <= 0.01);
  r = convergence_rates({1.0, 0.0, 1e-3}, {1, 0.5, 0.25});
  CHECK(!r[0].has_value());
  CHECK(!r[1].has_value());
  CHECK_THROWS_AS(convergence_rates({1, 2}, {0.25, 0.5}), Error);
}

TEST_CASE("csv row") {
  ErrorReport r;
  r.l2_velocity = 1.5e-3;
  r.grid_n = 301;
  r.points = 90601;
  CHECK(ErrorReport::csv_header() == "l2_velocity,h1_velocity,l2_pressure,div_sup,residual_L,grid_n,points,wall_time");
  CHECK(r.csv_row().rfind("1.500000e-03,0.000000e+00", 0) == 0);
}
