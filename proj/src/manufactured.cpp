#include "splocate/manufactured.hpp"

#include <cmath>
#include <sstream>

namespace splocate {

namespace {

const double kPi = std::acos(-1.0);

Point vec2(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

Point vec3(double a, double b, double c) {
  Point p(3);
  p << a, b, c;
  return p;
}

ExactSolution unit_box(std::string id, int dim) {
  ExactSolution s;
  s.id = std::move(id);
  s.dim = dim;
  s.domain_lo = Point::Zero(dim);
  s.domain_hi = Point::Ones(dim);
  return s;
}

// u = 10 (A(x) B(y), -B(x) A(y)) with A = x^2 (x-1)^2, B = y (2y-1)(y-1).
ExactSolution make_u1() {
  ExactSolution s = unit_box("u1", 2);
  auto A = [](double t) { return t * t * (t - 1) * (t - 1); };
  auto dA = [](double t) { return 4 * t * t * t - 6 * t * t + 2 * t; };
  auto ddA = [](double t) { return 12 * t * t - 12 * t + 2; };
  auto B = [](double t) { return t * (2 * t - 1) * (t - 1); };
  auto dB = [](double t) { return 6 * t * t - 6 * t + 1; };
  auto ddB = [](double t) { return 12 * t - 6; };
  s.velocity = [=](const Point& p) { return vec2(10 * A(p(0)) * B(p(1)), -10 * B(p(0)) * A(p(1))); };
  s.velocity_jacobian = [=](const Point& p) {
    const double x = p(0), y = p(1);
    Jacobian j(2, 2);
    j << 10 * dA(x) * B(y), 10 * A(x) * dB(y), -10 * dB(x) * A(y), -10 * B(x) * dA(y);
    return j;
  };
  s.velocity_laplacian = [=](const Point& p) {
    const double x = p(0), y = p(1);
    return vec2(10 * (ddA(x) * B(y) + A(x) * ddB(y)), -10 * (ddB(x) * A(y) + B(x) * ddA(y)));
  };
  s.pressure = [](const Point& p) { return 10 * (2 * p(0) - 1) * (2 * p(1) - 1); };
  s.pressure_gradient = [](const Point& p) { return vec2(20 * (2 * p(1) - 1), 20 * (2 * p(0) - 1)); };
  return s;
}

ExactSolution make_u2(double ra) {
  ExactSolution s = unit_box("u2", 2);
  s.velocity = [](const Point&) { return vec2(0, 0); };
  s.velocity_jacobian = [](const Point&) { return Jacobian::Zero(2, 2).eval(); };
  s.velocity_laplacian = [](const Point&) { return vec2(0, 0); };
  s.pressure = [ra](const Point& p) { return -ra / 2 * p(1) * p(1) + ra * p(1) - ra / 3; };
  s.pressure_gradient = [ra](const Point& p) { return vec2(0, -ra * p(1) + ra); };
  return s;
}

ExactSolution make_kovasznay(double re) {
  ExactSolution s;
  s.id = "kovasznay";
  s.dim = 2;
  s.domain_lo = vec2(-0.5, 0.0);
  s.domain_hi = vec2(1.5, 2.0);
  const double lam = kovasznay_lambda(re);
  const double k = 2 * kPi;
  s.velocity = [=](const Point& p) {
    const double e = std::exp(lam * p(0));
    return vec2(1 - e * std::cos(k * p(1)), lam / k * e * std::sin(k * p(1)));
  };
  s.velocity_jacobian = [=](const Point& p) {
    const double e = std::exp(lam * p(0));
    const double c = std::cos(k * p(1)), sn = std::sin(k * p(1));
    Jacobian j(2, 2);
    j << -lam * e * c, k * e * sn, lam * lam / k * e * sn, lam * e * c;
    return j;
  };
  s.velocity_laplacian = [=](const Point& p) {
    const double e = std::exp(lam * p(0));
    const double c = std::cos(k * p(1)), sn = std::sin(k * p(1));
    return vec2((k * k - lam * lam) * e * c, lam / k * (lam * lam - k * k) * e * sn);
  };
  s.pressure = [=](const Point& p) { return 0.5 * std::exp(2 * lam * p(0)); };
  s.pressure_gradient = [=](const Point& p) { return vec2(lam * std::exp(2 * lam * p(0)), 0.0); };
  return s;
}

// u = c (S(x) sin(2 a y), -S(y) sin(2 a x)) with S = sin^2(a t); covers the
// trigonometric Navier-Stokes solution and the curved-domain solution.
ExactSolution make_sine_squared(std::string id, double amplitude, double a, ScalarFunction pressure,
                                VectorFunction pressure_gradient) {
  ExactSolution s = unit_box(std::move(id), 2);
  const double c = amplitude;
  auto S = [a](double t) { return std::pow(std::sin(a * t), 2); };
  auto dS = [a](double t) { return a * std::sin(2 * a * t); };
  auto ddS = [a](double t) { return 2 * a * a * std::cos(2 * a * t); };
  s.velocity = [=](const Point& p) {
    return vec2(c * S(p(0)) * std::sin(2 * a * p(1)), -c * S(p(1)) * std::sin(2 * a * p(0)));
  };
  s.velocity_jacobian = [=](const Point& p) {
    const double x = p(0), y = p(1);
    Jacobian j(2, 2);
    j << c * dS(x) * std::sin(2 * a * y), c * S(x) * 2 * a * std::cos(2 * a * y),
        -c * S(y) * 2 * a * std::cos(2 * a * x), -c * dS(y) * std::sin(2 * a * x);
    return j;
  };
  s.velocity_laplacian = [=](const Point& p) {
    const double x = p(0), y = p(1);
    return vec2(c * (ddS(x) - 4 * a * a * S(x)) * std::sin(2 * a * y),
                -c * (ddS(y) - 4 * a * a * S(y)) * std::sin(2 * a * x));
  };
  s.pressure = std::move(pressure);
  s.pressure_gradient = std::move(pressure_gradient);
  return s;
}

ExactSolution make_ns_trig() {
  const double k = 2 * kPi;
  return make_sine_squared(
      "ns_trig", 0.25, k, [k](const Point& p) { return kPi * kPi * std::sin(k * p(0)) * std::cos(k * p(1)); },
      [k](const Point& p) {
        return vec2(kPi * kPi * k * std::cos(k * p(0)) * std::cos(k * p(1)),
                    -kPi * kPi * k * std::sin(k * p(0)) * std::sin(k * p(1)));
      });
}

ExactSolution make_uc1(int n) {
  const double a = n * kPi;
  return make_sine_squared(
      "uc1", kPi, a, [a](const Point& p) { return std::cos(a * p(0)) * std::cos(a * p(1)); },
      [a](const Point& p) {
        return vec2(-a * std::sin(a * p(0)) * std::cos(a * p(1)), -a * std::cos(a * p(0)) * std::sin(a * p(1)));
      });
}

// u_k = sin(pi x_i) (cos(pi x_j) - cos(pi x_l)) with (i, j, l) cyclic from k.
ExactSolution make_u3d1() {
  ExactSolution s = unit_box("u3d1", 3);
  s.velocity = [](const Point& p) {
    Point u(3);
    for (int k = 0; k < 3; ++k) {
      const int j = (k + 1) % 3, l = (k + 2) % 3;
      u(k) = std::sin(kPi * p(k)) * (std::cos(kPi * p(j)) - std::cos(kPi * p(l)));
    }
    return u;
  };
  s.velocity_jacobian = [](const Point& p) {
    Jacobian J(3, 3);
    for (int k = 0; k < 3; ++k) {
      const int j = (k + 1) % 3, l = (k + 2) % 3;
      const double si = std::sin(kPi * p(k));
      J(k, k) = kPi * std::cos(kPi * p(k)) * (std::cos(kPi * p(j)) - std::cos(kPi * p(l)));
      J(k, j) = -kPi * si * std::sin(kPi * p(j));
      J(k, l) = kPi * si * std::sin(kPi * p(l));
    }
    return J;
  };
  auto velocity = s.velocity;
  s.velocity_laplacian = [velocity](const Point& p) { return Point(-2 * kPi * kPi * velocity(p)); };
  s.pressure = [](const Point& p) { return std::sin(kPi * p(0)) * std::sin(kPi * p(1)) * std::sin(kPi * p(2)); };
  s.pressure_gradient = [](const Point& p) {
    const double sx = std::sin(kPi * p(0)), sy = std::sin(kPi * p(1)), sz = std::sin(kPi * p(2));
    return vec3(kPi * std::cos(kPi * p(0)) * sy * sz, kPi * sx * std::cos(kPi * p(1)) * sz,
                kPi * sx * sy * std::cos(kPi * p(2)));
  };
  return s;
}

// u = (-E, 2E, -E) with E = exp(x + 2y + 3z), p = exp(x + y + z).
ExactSolution make_exponential_3d(std::string id) {
  ExactSolution s = unit_box(std::move(id), 3);
  const Point coef = vec3(-1, 2, -1);
  const Point rate = vec3(1, 2, 3);
  auto E = [](const Point& p) { return std::exp(p(0) + 2 * p(1) + 3 * p(2)); };
  s.velocity = [=](const Point& p) { return Point(coef * E(p)); };
  s.velocity_jacobian = [=](const Point& p) { return Jacobian(E(p) * coef * rate.transpose()); };
  s.velocity_laplacian = [=](const Point& p) { return Point(14.0 * E(p) * coef); };
  s.pressure = [](const Point& p) { return std::exp(p(0) + p(1) + p(2)); };
  s.pressure_gradient = [](const Point& p) {
    const double e = std::exp(p(0) + p(1) + p(2));
    return vec3(e, e, e);
  };
  return s;
}

ExactSolution make_u3dns1() {
  ExactSolution s = unit_box("u3dns1", 3);
  s.velocity = [](const Point& p) {
    return vec3(std::sin(p(2)) + std::cos(p(1)), std::sin(p(0)) + std::cos(p(2)), std::sin(p(1)) + std::cos(p(0)));
  };
  s.velocity_jacobian = [](const Point& p) {
    Jacobian J = Jacobian::Zero(3, 3);
    J(0, 1) = -std::sin(p(1));
    J(0, 2) = std::cos(p(2));
    J(1, 0) = std::cos(p(0));
    J(1, 2) = -std::sin(p(2));
    J(2, 0) = -std::sin(p(0));
    J(2, 1) = std::cos(p(1));
    return J;
  };
  auto velocity = s.velocity;
  s.velocity_laplacian = [velocity](const Point& p) { return Point(-velocity(p)); };
  s.pressure = [](const Point& p) { return p(0); };
  s.pressure_gradient = [](const Point&) { return vec3(1, 0, 0); };
  return s;
}

}  // namespace

double kovasznay_lambda(double reynolds) {
  return reynolds / 2 - std::sqrt(reynolds * reynolds / 4 + 4 * kPi * kPi);
}

ExactSolution exact(const std::string& id, const ExactParams& params) {
  if (id == "u1") return make_u1();
  if (id == "u2") return make_u2(params.rayleigh);
  if (id == "kovasznay") return make_kovasznay(params.reynolds);
  if (id == "ns_trig") return make_ns_trig();
  if (id == "uc1") return make_uc1(params.wave_number);
  if (id == "u3d1") return make_u3d1();
  if (id == "u3d2") return make_exponential_3d("u3d2");
  if (id == "u3dns1") return make_u3dns1();
  if (id == "u3dns2") return make_exponential_3d("u3dns2");
  throw Error("unknown exact solution id '" + id + "'");
}

const std::vector<CatalogEntry>& problem_catalog() {
  static const std::vector<CatalogEntry> catalog = {
      {"u1", 2, "[0,1]^2", "-", "polynomial velocity of degree 7, bilinear pressure"},
      {"u2", 2, "[0,1]^2", "Ra=1000", "zero velocity, quadratic hydrostatic pressure"},
      {"kovasznay", 2, "[-1/2,3/2]x[0,2]", "Re=100 (mu=1/Re)", "Kovasznay flow"},
      {"ns_trig", 2, "[0,1]^2", "-", "trigonometric Navier-Stokes solution"},
      {"uc1", 2, "curved domain in [0,1]^2", "n=2", "trigonometric solution for immersed domains"},
      {"u3d1", 3, "[0,1]^3", "-", "trigonometric 3D Stokes solution"},
      {"u3d2", 3, "[0,1]^3", "-", "exponential 3D Stokes solution"},
      {"u3dns1", 3, "[0,1]^3", "-", "trigonometric 3D Navier-Stokes solution, linear pressure"},
      {"u3dns2", 3, "[0,1]^3", "-", "exponential 3D Navier-Stokes solution"},
      {"cavity", 2, "[0,1]^2", "lid velocity (1,0)", "lid-driven cavity, no exact solution"},
  };
  return catalog;
}

ViscosityField constant_viscosity(double value) {
  if (!(value >= 0) || !std::isfinite(value)) throw Error("constant viscosity must be finite and >= 0");
  std::ostringstream id;
  id << value;
  return ViscosityField(id.str(), [value](const Point&) { return value; });
}

ViscosityField viscosity(const std::string& id, const ViscosityParams& params, bool navier_stokes_defaults) {
  const bool smooth_family = id == "mu1" || id == "mu2" || id == "mu3" || id == "mu4";
  const bool bump_family = id == "mu5" || id == "mu6";
  double default_min = smooth_family ? 1e-6 : 0.1;
  if (navier_stokes_defaults && (smooth_family || bump_family)) default_min = 1e-3;
  const double lo = params.nu_min.value_or(default_min);
  const double hi = params.nu_max.value_or(1.0);
  const double span = hi - lo;

  if (id == "mu1") return {id, [=](const Point& p) { return lo + span * p(0) * p(1); }};
  if (id == "mu2") {
    return {id, [=](const Point& p) {
              const double x = p(0), y = p(1);
              return lo + span * 721.0 / 16.0 * x * x * y * y * (1 - x) * (1 - y);
            }};
  }
  if (id == "mu3" || id == "mu4") {
    const bool inverted = id == "mu4";
    return {id, [=](const Point& p) {
              const double g = std::exp(-1e13 * (std::pow(p(0) - 0.5, 10) + std::pow(p(1) - 0.5, 10)));
              return lo + span * (inverted ? 1 - g : g);
            }};
  }
  if (bump_family) {
    const double kappa = params.kappa.value_or(2000.0);
    const double r = params.radius.value_or(id == "mu5" ? 0.1 : 0.01);
    return {id, [=](const Point& p) {
              const double x = p(0), y = p(1);
              const double q = 16 * x * (1 - x) * y * (1 - y);
              const double arg = kappa * (r - (x - 0.5) * (x - 0.5) - (y - 0.5) * (y - 0.5)) / kPi;
              return lo + span * q * (0.5 + std::atan(arg));
            }};
  }
  if (id == "mu7" || id == "mu8") {
    const double right = id == "mu7" ? 1000.0 : 1e-5;
    return {id, [=](const Point& p) { return p(0) <= 0.5 ? 1.0 : right; }};
  }
  if (id == "mu9") {
    std::vector<Circle> circles = params.circles;
    if (circles.empty()) circles = {{0.25, 0.25, 0.12}, {0.75, 0.25, 0.12}, {0.5, 0.75, 0.12}};
    const double outside = params.nu_min.value_or(1e-6);
    const double inside = params.nu_max.value_or(1.0);
    return {id, [=](const Point& p) {
              for (const Circle& c : circles) {
                if (std::hypot(p(0) - c.cx, p(1) - c.cy) <= c.radius) return inside;
              }
              return outside;
            }};
  }
  throw Error("unknown viscosity id '" + id + "'");
}

ViscosityField parse_viscosity(const std::string& spec, bool navier_stokes_defaults) {
  std::string head = spec;
  std::string tail;
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    head = spec.substr(0, colon);
    tail = spec.substr(colon + 1);
  }
  if (head == "const") return constant_viscosity(std::stod(tail));
  if (head.rfind("mu", 0) != 0) {
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(head, &used);
    } catch (const std::exception&) {
      throw Error("cannot parse viscosity '" + spec + "'");
    }
    if (used != head.size()) throw Error("cannot parse viscosity '" + spec + "'");
    return constant_viscosity(value);
  }
  ViscosityParams params;
  std::istringstream items(tail);
  std::string item;
  while (std::getline(items, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("viscosity parameter needs key=value: '" + item + "'");
    const std::string key = item.substr(0, eq);
    const double value = std::stod(item.substr(eq + 1));
    if (key == "nu_min") params.nu_min = value;
    else if (key == "nu_max") params.nu_max = value;
    else if (key == "kappa") params.kappa = value;
    else if (key == "r") params.radius = value;
    else throw Error("unknown viscosity parameter '" + key + "'");
  }
  return viscosity(head, params, navier_stokes_defaults);
}

VectorFunction rhs_stokes(const ExactSolution& exact, const ViscosityField& mu) {
  return [exact, mu](const Point& x) { return Point(-mu(x) * exact.velocity_laplacian(x) + exact.pressure_gradient(x)); };
}

VectorFunction rhs_navier_stokes(const ExactSolution& exact, const ViscosityField& mu) {
  return [exact, mu](const Point& x) {
    return Point(-mu(x) * exact.velocity_laplacian(x) + exact.velocity_jacobian(x) * exact.velocity(x) +
                 exact.pressure_gradient(x));
  };
}

}  // namespace splocate
