#pragma once

#include "splocate/stokes.hpp"

#include <iosfwd>
#include <vector>

namespace splocate {

struct ContinuationConfig {
  ViscosityField mu_target;  // empty: use the problem viscosity
  double mu0 = 1.0;
  double decade_factor = 10.0;
  double epsilon = 1e-10;
  int max_newton = 30;
  int max_continuation = 12;
};

struct NewtonStep {
  int stage = 0;
  int iteration = 0;
  double nu = 0.0;         // continuation floor of this stage
  double diff_norm = 0.0;  // max |u_n - u_{n+1}| over velocity coefficients
  double residual = 0.0;   // max nonlinear collocation residual at u_n
  double seconds = 0.0;    // since the solve started
};

struct NewtonTrace {
  std::vector<NewtonStep> steps;

  bool empty() const { return steps.empty(); }
  void write_csv(std::ostream& out) const;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, NewtonTrace trace) : Error(what), trace_(std::move(trace)) {}
  const NewtonTrace& trace() const { return trace_; }

 private:
  NewtonTrace trace_;
};

struct NavierStokesResult {
  FlowSolution solution;
  NewtonTrace trace;
};

/// Newton linearization about u_n with viscosity mu over a prepared layout.
CollocationSystem assemble_newton_step(const FlowProblem& problem, const AssemblyLayout& layout,
                                       const ViscosityField& mu, const FlowSolution& u_n);
CollocationSystem assemble_newton_step(const FlowProblem& problem, const FlowSolution& u_n);

/// Max over momentum and divergence rows of the nonlinear residual at c, given
/// a system linearized about the velocities stored in c.
double nonlinear_residual(const CollocationSystem& linearized_at_c, const Eigen::VectorXd& c);

/// Viscosity schedule: stage j uses max(mu_target(x), nu_j) with nu_0 = mu0 and
/// nu_{j+1} = nu_j / decade_factor, ending once nu_j <= min mu_target.
std::vector<double> continuation_floors(const ContinuationConfig& config, double min_target);

NavierStokesResult solve_navier_stokes(const FlowProblem& problem, const AssemblyLayout& layout,
                                       const ContinuationConfig& config = {}, const SolverOptions& options = {});
NavierStokesResult solve_navier_stokes(const FlowProblem& problem, const ContinuationConfig& config = {},
                                       const SolverOptions& options = {});

/// Unit-square lid: u = (1, 0) on the open top edge, zero elsewhere.
Point cavity_lid(const Point& x);

NavierStokesResult driven_cavity(MeshPtr mesh, int degree, int smoothness, const ViscosityField& mu,
                                 const SolverOptions& options = {});

}  // namespace splocate
