#pragma once

#include "splocate/bernstein.hpp"
#include "splocate/manufactured.hpp"
#include "splocate/mesh.hpp"
#include "splocate/spline_space.hpp"

#include <optional>
#include <vector>

namespace splocate {

/// A Stokes or Navier-Stokes collocation problem on a mesh.
struct FlowProblem {
  MeshPtr mesh;
  int degree = 7;
  int collocation_degree = 7;
  int smoothness = 2;
  std::optional<int> pressure_smoothness;  // defaults to `smoothness`
  ViscosityField viscosity;
  VectorFunction source;
  VectorFunction boundary;

  int dim() const { return mesh->dim(); }
  int field_size() const { return mesh->num_simplices() * basis_size(degree, mesh->dim()); }
  int pressure_r() const { return pressure_smoothness.value_or(smoothness); }
};

struct RowWeights {
  double momentum = 1.0;  // momentum and divergence rows
  double boundary = 1.0;
  double smoothness = 1.0;
  double gauge = 1.0;
};

/// Collocation points where the PDE rows are imposed.
struct CollocationPoints {
  Eigen::MatrixXd points;
  std::vector<int> owner;

  int size() const { return static_cast<int>(owner.size()); }
};

/// Everything about the row structure that does not depend on viscosity or
/// on the linearization point; built once per problem.
struct AssemblyLayout {
  CollocationPoints interior;
  SparseMatrix boundary_values;   // rows over one scalar field
  Eigen::MatrixXd boundary_data;  // rows x dim
  double boundary_scale = 1.0;    // sqrt(lambda) for penalized boundaries
  SparseMatrix velocity_smoothness;
  SparseMatrix pressure_smoothness;
  std::vector<bool> active;  // empty: every simplex active
};

/// Interior/boundary split of the unique degree-D' domain points.
AssemblyLayout standard_layout(const FlowProblem& problem);

/// Stacked blocks over the column layout [c_1 | ... | c_d | c_p].
struct CollocationSystem {
  int dim = 0;
  int field_size = 0;
  SparseMatrix momentum;  // d * N_in rows, component-major
  Eigen::VectorXd momentum_rhs;
  SparseMatrix divergence;  // N_in rows
  SparseMatrix boundary;    // d * N_b rows
  Eigen::VectorXd boundary_rhs;
  SparseMatrix smoothness;
  SparseMatrix gauge;  // 1 row
  SparseMatrix pin;    // inactive coefficients (immersed domains only)
  CollocationPoints interior;

  int cols() const { return (dim + 1) * field_size; }
  int rows() const;

  /// W A and W b for the stacked system [K; B; H; gauge; pin].
  void stack(const RowWeights& weights, SparseMatrix& A, Eigen::VectorXd& b) const;
};

/// Assembles with viscosity `mu`. With `linearize_about` the momentum rows are
/// the Newton linearization of the convective term around those velocities.
CollocationSystem assemble_system(const FlowProblem& problem, const AssemblyLayout& layout, const ViscosityField& mu,
                                  const std::vector<SplineField>* linearize_about = nullptr);

CollocationSystem assemble_stokes(const FlowProblem& problem);

enum class LeastSquaresBackend { SparseQR, Iterative };

struct SolverOptions {
  RowWeights weights;
  LeastSquaresBackend backend = LeastSquaresBackend::SparseQR;
  double iterative_tolerance = 1e-13;
  int iterative_max_iterations = 20000;
};

struct LeastSquaresResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  double rhs_norm = 0.0;
  long rank = 0;
  bool converged = true;
};

/// argmin ||A x - b||_2.
LeastSquaresResult least_squares(const SparseMatrix& A, const Eigen::VectorXd& b, const SolverOptions& options = {});

LeastSquaresResult solve_least_squares(const CollocationSystem& system, const SolverOptions& options = {});

struct FlowSolution {
  std::vector<SplineField> velocity;
  SplineField pressure;
  double residual_norm = 0.0;
  double wall_time = 0.0;
  double gauge_shift = 0.0;  // added to the pressure when reporting
  long rank = 0;
  long rows = 0;
  long cols = 0;

  int dim() const { return static_cast<int>(velocity.size()); }
  const SimplicialMesh& mesh() const { return *pressure.mesh; }

  /// Stacked coefficients [c_1 | ... | c_d | c_p].
  Eigen::VectorXd coefficients() const;
  Eigen::VectorXd velocity_coefficients() const;
};

FlowSolution make_solution(const FlowProblem& problem, const Eigen::VectorXd& coefficients);

/// Pressure mean weight sum_T sum_alpha c_alpha vol(T) / binomial(D+d, d).
double pressure_integral(const SplineField& pressure, const std::vector<bool>& active = {});

FlowSolution solve_stokes(const FlowProblem& problem, const SolverOptions& options = {});

void validate(const FlowProblem& problem);

}  // namespace splocate
