#include "splocate/stokes.hpp"

#include "splocate/blas_guard.hpp"
#include "splocate/parallel.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SPQRSupport>

#include <chrono>
#include <cmath>

namespace splocate {

void validate(const FlowProblem& problem) {
  if (!problem.mesh) throw Error("flow problem has no mesh");
  if (problem.degree < 2) throw Error("degree D must be >= 2 so that the Laplacian is nontrivial");
  if (problem.degree > kMaxDegree) throw Error("degree D above 20 is not supported");
  if (problem.collocation_degree < 1 || problem.collocation_degree > kMaxDegree) {
    throw Error("collocation degree D' must lie in [1, 20]");
  }
  if (problem.smoothness < -1 || problem.smoothness >= problem.degree) throw Error("smoothness r must satisfy r < D");
  if (problem.pressure_r() < -1 || problem.pressure_r() >= problem.degree) {
    throw Error("pressure smoothness must satisfy r_p < D");
  }
  if (!problem.viscosity.valid()) throw Error("flow problem has no viscosity");
  if (!problem.source) throw Error("flow problem has no source term");
  if (!problem.boundary) throw Error("flow problem has no boundary data");
}

AssemblyLayout standard_layout(const FlowProblem& problem) {
  validate(problem);
  const SimplicialMesh& mesh = *problem.mesh;
  AssemblyLayout layout;
  const UniquePointSet pts = unique_domain_points(mesh, problem.collocation_degree);
  std::vector<int> interior;
  for (int i = 0; i < pts.size(); ++i) {
    if (!pts.on_boundary[i]) interior.push_back(i);
  }
  layout.interior.points.resize(static_cast<int>(interior.size()), mesh.dim());
  for (int r = 0; r < static_cast<int>(interior.size()); ++r) {
    layout.interior.points.row(r) = pts.points.row(interior[r]);
    layout.interior.owner.push_back(pts.owner[interior[r]]);
  }
  BoundaryBlock bb = boundary_block(mesh, problem.degree, problem.collocation_degree, problem.boundary, mesh.dim());
  layout.boundary_values = std::move(bb.B);
  layout.boundary_data = std::move(bb.G);
  layout.velocity_smoothness = smoothness_matrix(mesh, problem.degree, problem.smoothness).H;
  layout.pressure_smoothness = problem.pressure_r() == problem.smoothness
                                   ? layout.velocity_smoothness
                                   : smoothness_matrix(mesh, problem.degree, problem.pressure_r()).H;
  return layout;
}

namespace {

SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols, const std::vector<Triplet>& triplets) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

void append_block(std::vector<Triplet>& out, const SparseMatrix& block, Eigen::Index row_offset, Eigen::Index col_offset,
                  double scale) {
  for (int r = 0; r < block.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(block, r); it; ++it) {
      out.emplace_back(static_cast<int>(row_offset + it.row()), static_cast<int>(col_offset + it.col()),
                       scale * it.value());
    }
  }
}

}  // namespace

CollocationSystem assemble_system(const FlowProblem& problem, const AssemblyLayout& layout, const ViscosityField& mu,
                                  const std::vector<SplineField>* linearize_about) {
  const SimplicialMesh& mesh = *problem.mesh;
  const int d = mesh.dim();
  const int D = problem.degree;
  const int nb = basis_size(D, d);
  const int N = problem.field_size();
  const int n_in = layout.interior.size();
  if (linearize_about) {
    if (static_cast<int>(linearize_about->size()) != d) throw Error("linearization needs one field per component");
    for (const SplineField& f : *linearize_about) {
      if (f.degree != D || f.coeffs.size() != N) throw Error("linearization fields do not match the problem");
    }
  }

  CollocationSystem sys;
  sys.dim = d;
  sys.field_size = N;
  sys.interior = layout.interior;
  const Eigen::Index cols = static_cast<Eigen::Index>(d + 1) * N;

  std::vector<std::vector<Triplet>> per_point(n_in);
  sys.momentum_rhs.setZero(static_cast<Eigen::Index>(d) * n_in);
  bool bad_viscosity = false;

  const unsigned parts = kGradients | kLaplacians | (linearize_about ? kValues : 0u);
#pragma omp parallel for schedule(dynamic, 16) num_threads(worker_count())
  for (int i = 0; i < n_in; ++i) {
    const int t = layout.interior.owner[i];
    const Point x = layout.interior.points.row(i).transpose();
    const LocalBasis lb = local_basis(mesh, D, t, x, parts);
    const double mu_x = mu(x);
    if (!std::isfinite(mu_x)) {
#pragma omp atomic write
      bad_viscosity = true;
      continue;
    }
    const Point f = problem.source(x);

    Point un = Point::Zero(d);
    Jacobian grad_un = Jacobian::Zero(d, d);
    if (linearize_about) {
      for (int k = 0; k < d; ++k) {
        const auto c = (*linearize_about)[k].block(t);
        un(k) = lb.value.dot(c);
        for (int l = 0; l < d; ++l) grad_un(k, l) = lb.gradient.col(l).dot(c);
      }
    }

    std::vector<Triplet>& trip = per_point[i];
    trip.reserve(static_cast<std::size_t>(d) * nb * (d + 1) + static_cast<std::size_t>(d) * nb);
    const int block0 = t * nb;
    for (int k = 0; k < d; ++k) {
      const int row = k * n_in + i;
      Eigen::VectorXd own = -mu_x * lb.laplacian;
      double rhs = f(k);
      if (linearize_about) {
        for (int l = 0; l < d; ++l) own += un(l) * lb.gradient.col(l);
        own += grad_un(k, k) * lb.value;
        rhs += un.dot(grad_un.row(k).transpose());
      }
      for (int j = 0; j < nb; ++j) {
        if (own(j) != 0.0) trip.emplace_back(row, k * N + block0 + j, own(j));
      }
      if (linearize_about) {
        for (int l = 0; l < d; ++l) {
          if (l == k || grad_un(k, l) == 0.0) continue;
          for (int j = 0; j < nb; ++j) {
            const double v = grad_un(k, l) * lb.value(j);
            if (v != 0.0) trip.emplace_back(row, l * N + block0 + j, v);
          }
        }
      }
      for (int j = 0; j < nb; ++j) {
        const double v = lb.gradient(j, k);
        if (v != 0.0) trip.emplace_back(row, d * N + block0 + j, v);
      }
      sys.momentum_rhs(row) = rhs;
    }
    // Divergence row i uses a negative tag so both row kinds share one list.
    for (int k = 0; k < d; ++k) {
      for (int j = 0; j < nb; ++j) {
        const double v = lb.gradient(j, k);
        if (v != 0.0) trip.emplace_back(-1 - i, k * N + block0 + j, v);
      }
    }
  }
  if (bad_viscosity) throw Error("viscosity is not finite at a collocation point");

  std::vector<Triplet> mom, div;
  for (const auto& trip : per_point) {
    for (const Triplet& tr : trip) {
      if (tr.row() >= 0) mom.push_back(tr);
      else div.emplace_back(-1 - tr.row(), tr.col(), tr.value());
    }
  }
  sys.momentum = from_triplets(static_cast<Eigen::Index>(d) * n_in, cols, mom);
  sys.divergence = from_triplets(n_in, cols, div);

  const int n_b = static_cast<int>(layout.boundary_values.rows());
  std::vector<Triplet> bnd;
  sys.boundary_rhs.resize(static_cast<Eigen::Index>(d) * n_b);
  for (int k = 0; k < d; ++k) {
    append_block(bnd, layout.boundary_values, static_cast<Eigen::Index>(k) * n_b, static_cast<Eigen::Index>(k) * N,
                 layout.boundary_scale);
    sys.boundary_rhs.segment(static_cast<Eigen::Index>(k) * n_b, n_b) = layout.boundary_scale * layout.boundary_data.col(k);
  }
  sys.boundary = from_triplets(static_cast<Eigen::Index>(d) * n_b, cols, bnd);

  std::vector<Triplet> smooth;
  const Eigen::Index hv = layout.velocity_smoothness.rows();
  for (int k = 0; k < d; ++k) append_block(smooth, layout.velocity_smoothness, k * hv, static_cast<Eigen::Index>(k) * N, 1.0);
  append_block(smooth, layout.pressure_smoothness, d * hv, static_cast<Eigen::Index>(d) * N, 1.0);
  sys.smoothness = from_triplets(d * hv + layout.pressure_smoothness.rows(), cols, smooth);

  std::vector<Triplet> gauge;
  std::vector<Triplet> pin;
  int pinned = 0;
  for (int t = 0; t < mesh.num_simplices(); ++t) {
    const bool is_active = layout.active.empty() || layout.active[t];
    if (is_active) {
      const double w = mesh.volume(t) / nb;
      for (int j = 0; j < nb; ++j) gauge.emplace_back(0, d * N + t * nb + j, w);
    } else {
      for (int field = 0; field <= d; ++field) {
        for (int j = 0; j < nb; ++j) pin.emplace_back(pinned++, field * N + t * nb + j, 1.0);
      }
    }
  }
  sys.gauge = from_triplets(1, cols, gauge);
  sys.pin = from_triplets(pinned, cols, pin);
  return sys;
}

CollocationSystem assemble_stokes(const FlowProblem& problem) {
  const AssemblyLayout layout = standard_layout(problem);
  return assemble_system(problem, layout, problem.viscosity);
}

int CollocationSystem::rows() const {
  return static_cast<int>(momentum.rows() + divergence.rows() + boundary.rows() + smoothness.rows() + gauge.rows() +
                          pin.rows());
}

void CollocationSystem::stack(const RowWeights& w, SparseMatrix& A, Eigen::VectorXd& b) const {
  if (w.momentum <= 0 || w.boundary <= 0 || w.smoothness <= 0 || w.gauge <= 0) throw Error("row weights must be positive");
  std::vector<Triplet> all;
  all.reserve(static_cast<std::size_t>(momentum.nonZeros() + divergence.nonZeros() + boundary.nonZeros() +
                                       smoothness.nonZeros() + gauge.nonZeros() + pin.nonZeros()));
  b.setZero(rows());
  Eigen::Index offset = 0;
  append_block(all, momentum, offset, 0, w.momentum);
  b.segment(offset, momentum.rows()) = w.momentum * momentum_rhs;
  offset += momentum.rows();
  append_block(all, divergence, offset, 0, w.momentum);
  offset += divergence.rows();
  append_block(all, boundary, offset, 0, w.boundary);
  b.segment(offset, boundary.rows()) = w.boundary * boundary_rhs;
  offset += boundary.rows();
  append_block(all, smoothness, offset, 0, w.smoothness);
  offset += smoothness.rows();
  append_block(all, gauge, offset, 0, w.gauge);
  offset += gauge.rows();
  append_block(all, pin, offset, 0, 1.0);
  A = from_triplets(rows(), cols(), all);
}

LeastSquaresResult least_squares(const SparseMatrix& A, const Eigen::VectorXd& b, const SolverOptions& options) {
  if (A.rows() != b.size()) throw Error("least squares: row count does not match right-hand side");
  LeastSquaresResult out;
  out.rhs_norm = b.norm();
  const Eigen::SparseMatrix<double> Acol = A;
  if (options.backend == LeastSquaresBackend::SparseQR) {
    ensure_blas_sane();
    Eigen::SPQR<Eigen::SparseMatrix<double>> qr;
    qr.compute(Acol);
    if (qr.info() != Eigen::Success) throw Error("sparse QR factorization failed");
    out.rank = qr.rank();
    if (out.rank == Acol.cols()) {
      out.x = qr.solve(b);
      if (qr.info() != Eigen::Success) throw Error("sparse QR solve failed");
    } else {
      // minimum norm: A P = Q [R1; 0], then factor R1^T = Q2 R2 P2^T and take
      // y = Q2 R2^-T P2^T (Q^T b)_1, x = P y
      const Eigen::Index r = out.rank;
      const Eigen::VectorXd qtb = qr.matrixQ().transpose() * b;
      const Eigen::SparseMatrix<double> r1t = Eigen::SparseMatrix<double>(qr.matrixR().topRows(r)).transpose();
      Eigen::SPQR<Eigen::SparseMatrix<double>> qr2;
      qr2.compute(r1t);
      if (qr2.info() != Eigen::Success) throw Error("minimum-norm factorization failed");
      // the second factorization may drop a few more nearly dependent rows
      const Eigen::Index r2n = qr2.rank();
      const Eigen::VectorXd rhs = qr2.colsPermutation().transpose() * qtb.head(r);
      const Eigen::SparseMatrix<double> r2 = qr2.matrixR().topLeftCorner(r2n, r2n);
      Eigen::VectorXd z = Eigen::VectorXd::Zero(r1t.rows());
      z.head(r2n) = r2.transpose().triangularView<Eigen::Lower>().solve(rhs.head(r2n));
      const Eigen::VectorXd y = qr2.matrixQ() * z;
      out.x = qr.colsPermutation() * y;
    }
  } else {
    Eigen::LeastSquaresConjugateGradient<Eigen::SparseMatrix<double>> cg;
    cg.setTolerance(options.iterative_tolerance);
    cg.setMaxIterations(options.iterative_max_iterations);
    cg.compute(Acol);
    out.x = cg.solve(b);
    out.converged = cg.info() == Eigen::Success;
    out.rank = -1;
  }
  out.residual_norm = (A * out.x - b).norm();
  return out;
}

LeastSquaresResult solve_least_squares(const CollocationSystem& system, const SolverOptions& options) {
  SparseMatrix A;
  Eigen::VectorXd b;
  system.stack(options.weights, A, b);
  return least_squares(A, b, options);
}

Eigen::VectorXd FlowSolution::coefficients() const {
  const Eigen::Index n = pressure.coeffs.size();
  Eigen::VectorXd c(n * (dim() + 1));
  for (int k = 0; k < dim(); ++k) c.segment(k * n, n) = velocity[k].coeffs;
  c.tail(n) = pressure.coeffs;
  return c;
}

Eigen::VectorXd FlowSolution::velocity_coefficients() const {
  const Eigen::Index n = pressure.coeffs.size();
  Eigen::VectorXd c(n * dim());
  for (int k = 0; k < dim(); ++k) c.segment(k * n, n) = velocity[k].coeffs;
  return c;
}

FlowSolution make_solution(const FlowProblem& problem, const Eigen::VectorXd& coefficients) {
  const int d = problem.dim();
  const int N = problem.field_size();
  if (coefficients.size() != static_cast<Eigen::Index>(d + 1) * N) throw Error("coefficient vector has the wrong length");
  FlowSolution s;
  for (int k = 0; k < d; ++k) s.velocity.emplace_back(problem.mesh, problem.degree, coefficients.segment(k * N, N));
  s.pressure = SplineField(problem.mesh, problem.degree, coefficients.segment(static_cast<Eigen::Index>(d) * N, N));
  return s;
}

double pressure_integral(const SplineField& pressure, const std::vector<bool>& active) {
  const SimplicialMesh& mesh = *pressure.mesh;
  const int nb = pressure.block_size();
  double total = 0.0;
  for (int t = 0; t < mesh.num_simplices(); ++t) {
    if (!active.empty() && !active[t]) continue;
    total += pressure.block(t).sum() * mesh.volume(t) / nb;
  }
  return total;
}

FlowSolution solve_stokes(const FlowProblem& problem, const SolverOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const CollocationSystem sys = assemble_stokes(problem);
  const LeastSquaresResult ls = solve_least_squares(sys, options);
  if (!ls.converged) throw Error("least squares solver did not converge (residual " + std::to_string(ls.residual_norm) + ")");
  FlowSolution s = make_solution(problem, ls.x);
  s.residual_norm = ls.residual_norm;
  s.rank = ls.rank;
  s.rows = sys.rows();
  s.cols = sys.cols();
  s.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

}  // namespace splocate
