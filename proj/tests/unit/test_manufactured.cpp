#include "splocate/manufactured.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace splocate;

namespace {

const double kPi = std::acos(-1.0);

Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

const std::vector<std::string> kExact = {"u1", "u2", "kovasznay", "ns_trig", "uc1", "u3d1", "u3d2", "u3dns1", "u3dns2"};

Point random_point(const ExactSolution& e, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  Point x(e.dim);
  for (int k = 0; k < e.dim; ++k) x(k) = e.domain_lo(k) + u(rng) * (e.domain_hi(k) - e.domain_lo(k));
  return x;
}

}  // namespace

TEST_CASE("catalog") {
  CHECK(problem_catalog().size() >= 10);
  for (const std::string& id : kExact) CHECK_NOTHROW(exact(id));
  CHECK_THROWS_AS(exact("nope"), Error);
}

TEST_CASE("printed values") {
  const ExactSolution u1 = exact("u1");
  CHECK(u1.velocity(pt({0.5, 0.5}))(0) == 0.0);
  CHECK(u1.pressure(pt({1, 1})) == doctest::Approx(10.0));
  CHECK(kovasznay_lambda(100) == doctest::Approx(50 - std::sqrt(2500 + 4 * kPi * kPi)).epsilon(1e-14));
  CHECK(kovasznay_lambda(100) == doctest::Approx(-0.3932).epsilon(1e-3));
}

TEST_CASE("velocities are divergence free") {
  std::mt19937 rng(29);
  for (const std::string& id : kExact) {
    const ExactSolution e = exact(id);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) worst = std::max(worst, std::abs(e.velocity_jacobian(random_point(e, rng)).trace()));
    INFO(id);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("analytic derivatives match central differences") {
  std::mt19937 rng(31);
  const double step = 1e-5;
  auto close = [](double fd, double exact) { return std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)); };
  for (const std::string& id : kExact) {
    const ExactSolution e = exact(id);
    INFO(id);
    for (int i = 0; i < 100; ++i) {
      const Point x = random_point(e, rng);
      const Jacobian J = e.velocity_jacobian(x);
      const Point lap = e.velocity_laplacian(x);
      const Point gp = e.pressure_gradient(x);
      Point lap_fd = Point::Zero(e.dim);
      for (int l = 0; l < e.dim; ++l) {
        Point xp = x, xm = x;
        xp(l) += step;
        xm(l) -= step;
        const Point du = (e.velocity(xp) - e.velocity(xm)) / (2 * step);
        for (int k = 0; k < e.dim; ++k) CHECK(close(du(k), J(k, l)));
        CHECK(close((e.pressure(xp) - e.pressure(xm)) / (2 * step), gp(l)));
        // second derivatives from differences of the analytic gradient
        const Jacobian dJ = (e.velocity_jacobian(xp) - e.velocity_jacobian(xm)) / (2 * step);
        for (int k = 0; k < e.dim; ++k) lap_fd(k) += dJ(k, l);
      }
      for (int k = 0; k < e.dim; ++k) CHECK(close(lap_fd(k), lap(k)));
    }
  }
}

TEST_CASE("viscosity values") {
  CHECK(viscosity("mu1")(pt({0, 0})) == doctest::Approx(1e-6));
  CHECK(viscosity("mu1")(pt({1, 1})) == doctest::Approx(1.0));
  CHECK(viscosity("mu7")(pt({0.4, 0.3})) == 1.0);
  CHECK(viscosity("mu7")(pt({0.5, 0.3})) == 1.0);
  CHECK(viscosity("mu7")(pt({0.6, 0.3})) == 1000.0);
  CHECK(viscosity("mu8")(pt({0.6, 0.3})) == 1e-5);
  // independent evaluation of the printed bump formula
  const double mu5 = 0.1 + 0.9 * 1.0 * (0.5 + std::atan(2000 * 0.1 / kPi));
  CHECK(viscosity("mu5")(pt({0.5, 0.5})) == doctest::Approx(mu5).epsilon(1e-14));
  CHECK(viscosity("mu1", {}, true)(pt({0, 0})) == doctest::Approx(1e-3));
  CHECK(parse_viscosity("1e-4")(pt({0.2, 0.2})) == 1e-4);
  CHECK(parse_viscosity("mu1:nu_min=0.5")(pt({0, 0})) == doctest::Approx(0.5));
  CHECK_THROWS_AS(viscosity("mu10"), Error);
}

TEST_CASE("viscosities are positive") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> u(0, 1);
  for (const std::string id : {"mu1", "mu2", "mu3", "mu4", "mu7", "mu8", "mu9"}) {
    const ViscosityField mu = viscosity(id);
    double lo = INFINITY;
    for (int i = 0; i < 100000; ++i) lo = std::min(lo, mu(pt({u(rng), u(rng)})));
    INFO(id);
    CHECK(lo > 0);
  }
  // mu5 and mu6 follow the printed formula, where 0.5 + atan(.) drops below
  // zero outside the bump
  const double outside = 0.1 + 0.9 * 16 * 0.05 * 0.95 * 0.05 * 0.95 * (0.5 + std::atan(2000 * (0.1 - 2 * 0.45 * 0.45) / kPi));
  CHECK(viscosity("mu5")(pt({0.05, 0.05})) == doctest::Approx(outside));
  CHECK(outside < 0.1);
}

TEST_CASE("source terms") {
  const ExactSolution u2 = exact("u2");
  const Point x = pt({0.3, 0.7});
  const Point f2 = rhs_stokes(u2, viscosity("mu3"))(x);
  CHECK(f2(0) == doctest::Approx(0.0));
  CHECK(f2(1) == doctest::Approx(-1000 * 0.7 + 1000));
  CHECK((rhs_navier_stokes(u2, constant_viscosity(1))(x) - rhs_stokes(u2, constant_viscosity(1))(x)).norm() == 0.0);

  const ExactSolution u1 = exact("u1");
  const Point g = rhs_stokes(u1, constant_viscosity(0))(x);
  CHECK(g(0) == doctest::Approx(20 * (2 * 0.7 - 1)));
  CHECK(g(1) == doctest::Approx(20 * (2 * 0.3 - 1)));

  // symbolic oracle for -Lap u + (u.grad) u + grad p at (1/4, 3/4)
  const Point f = rhs_navier_stokes(u1, constant_viscosity(1))(pt({0.25, 0.75}));
  CHECK(std::abs(f(0) - 36566695.0 / 4194304.0) <= 1e-12 * 10);
  CHECK(std::abs(f(1) + 47380135.0 / 4194304.0) <= 1e-12 * 10);

  // doubling u quadruples the convection
  ExactSolution twice = u1;
  twice.velocity = [&](const Point& p) { return Point(2 * u1.velocity(p)); };
  twice.velocity_jacobian = [&](const Point& p) { return Jacobian(2 * u1.velocity_jacobian(p)); };
  twice.velocity_laplacian = [&](const Point& p) { return Point(2 * u1.velocity_laplacian(p)); };
  const ViscosityField one = constant_viscosity(1);
  const Point c1 = rhs_navier_stokes(u1, one)(x) - rhs_stokes(u1, one)(x);
  const Point c2 = rhs_navier_stokes(twice, one)(x) - rhs_stokes(twice, one)(x);
  CHECK((c2 - 4 * c1).norm() <= 1e-12 * std::max(1.0, c2.norm()));
}
