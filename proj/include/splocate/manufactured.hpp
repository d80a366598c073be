#pragma once

#include "splocate/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace splocate {

/// Analytic velocity/pressure pair with hand-coded derivatives.
struct ExactSolution {
  std::string id;
  int dim = 2;
  VectorFunction velocity;
  std::function<Jacobian(const Point&)> velocity_jacobian;  // J(k, l) = d u_k / d x_l
  VectorFunction velocity_laplacian;
  ScalarFunction pressure;
  VectorFunction pressure_gradient;
  bool div_free = true;
  Point domain_lo;
  Point domain_hi;
};

struct ExactParams {
  double rayleigh = 1000.0;   // u2
  double reynolds = 100.0;    // kovasznay
  int wave_number = 2;        // uc1
};

/// Catalog ids: u1, u2, kovasznay, ns_trig, uc1, u3d1, u3d2, u3dns1, u3dns2.
ExactSolution exact(const std::string& id, const ExactParams& params = {});

/// Kovasznay decay rate Re/2 - sqrt(Re^2/4 + 4 pi^2).
double kovasznay_lambda(double reynolds);

struct CatalogEntry {
  std::string id;
  int dim;
  std::string domain;
  std::string parameters;
  std::string description;
};

/// Every cataloged problem, including ones without an exact solution.
const std::vector<CatalogEntry>& problem_catalog();

struct Circle {
  double cx;
  double cy;
  double radius;
};

struct ViscosityParams {
  std::optional<double> nu_min;
  std::optional<double> nu_max;
  std::optional<double> kappa;
  std::optional<double> radius;
  std::vector<Circle> circles;  // mu9; empty selects the default three disks
};

class ViscosityField {
 public:
  ViscosityField() = default;
  ViscosityField(std::string id, ScalarFunction eval) : id_(std::move(id)), eval_(std::move(eval)) {}

  double operator()(const Point& x) const { return eval_(x); }
  const std::string& id() const { return id_; }
  bool valid() const { return static_cast<bool>(eval_); }

 private:
  std::string id_;
  ScalarFunction eval_;
};

ViscosityField constant_viscosity(double value);

/// mu1..mu9 exactly as printed, or "const". `navier_stokes_defaults` switches
/// nu_min to 1e-3 for mu1..mu6.
ViscosityField viscosity(const std::string& id, const ViscosityParams& params = {},
                         bool navier_stokes_defaults = false);

/// Parses "1e-4", "const:1e-4", "mu3" or "mu5:nu_min=0.2,kappa=100".
ViscosityField parse_viscosity(const std::string& spec, bool navier_stokes_defaults = false);

/// f_k = -mu Lap u_k + d_k p.
VectorFunction rhs_stokes(const ExactSolution& exact, const ViscosityField& mu);

/// f_k = -mu Lap u_k + (u . grad) u_k + d_k p.
VectorFunction rhs_navier_stokes(const ExactSolution& exact, const ViscosityField& mu);

}  // namespace splocate
