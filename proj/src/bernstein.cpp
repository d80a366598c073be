#include "splocate/bernstein.hpp"

#include <Eigen/LU>

#include <array>
#include <memory>
#include <mutex>

namespace splocate {

namespace {

constexpr int kRadix = kMaxDegree + 1;

int lookup_key(const MultiIndex& alpha, int dim) {
  int key = 0;
  for (int m = dim - 1; m >= 0; --m) key = key * kRadix + alpha(m);
  return key;
}

void enumerate(int dim, int remaining, int position, MultiIndex& alpha, std::vector<MultiIndex>& out) {
  if (position == dim) {
    alpha(dim) = remaining;
    out.push_back(alpha);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    alpha(position) = v;
    enumerate(dim, remaining - v, position + 1, alpha, out);
  }
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  static const auto table = [] {
    std::array<std::array<double, 2 * kRadix + 4>, 2 * kRadix + 4> c{};
    for (std::size_t i = 0; i < c.size(); ++i) {
      c[i][0] = 1.0;
      for (std::size_t j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + (j < i ? c[i - 1][j] : 0.0);
    }
    return c;
  }();
  if (n < static_cast<int>(table.size())) return table[n][k];
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

MultiIndexSet::MultiIndexSet(int degree, int dim) : degree_(degree), dim_(dim) {
  if (degree < 0 || degree > kMaxDegree) throw Error("degree outside [0, 20]");
  if (dim != 2 && dim != 3) throw Error("dimension must be 2 or 3");
  MultiIndex alpha(dim + 1);
  enumerate(dim, degree, 0, alpha, list_);
  lookup_.assign(static_cast<std::size_t>(dim == 2 ? kRadix * kRadix : kRadix * kRadix * kRadix), -1);
  for (int i = 0; i < size(); ++i) lookup_[lookup_key(list_[i], dim)] = i;

  lower_.assign(static_cast<std::size_t>(size() * (dim + 1)), -1);
  if (degree > 0) {
    const MultiIndexSet below(degree - 1, dim);
    for (int i = 0; i < size(); ++i) {
      for (int m = 0; m <= dim; ++m) {
        if (list_[i](m) == 0) continue;
        MultiIndex beta = list_[i];
        beta(m) -= 1;
        lower_[i * (dim + 1) + m] = below.index_of(beta);
      }
    }
  }
}

int MultiIndexSet::index_of(const MultiIndex& alpha) const {
  if (alpha.size() != dim_ + 1 || alpha.sum() != degree_ || alpha.minCoeff() < 0) return -1;
  return lookup_[lookup_key(alpha, dim_)];
}

const MultiIndexSet& multi_indices(int degree, int dim) {
  if (degree < 0 || degree > kMaxDegree) throw Error("degree outside [0, 20]");
  if (dim != 2 && dim != 3) throw Error("dimension must be 2 or 3");
  static std::array<std::array<std::unique_ptr<MultiIndexSet>, kRadix>, 2> cache;
  static std::array<std::array<std::once_flag, kRadix>, 2> flags;
  std::call_once(flags[dim - 2][degree], [&] { cache[dim - 2][degree] = std::make_unique<MultiIndexSet>(degree, dim); });
  return *cache[dim - 2][degree];
}

SplineField::SplineField(MeshPtr m, int d) : mesh(std::move(m)), degree(d) {
  coeffs.setZero(static_cast<Eigen::Index>(mesh->num_simplices()) * block_size());
}

SplineField::SplineField(MeshPtr m, int d, Eigen::VectorXd c) : mesh(std::move(m)), degree(d), coeffs(std::move(c)) {
  if (coeffs.size() != static_cast<Eigen::Index>(mesh->num_simplices()) * block_size()) {
    throw Error("coefficient vector length does not match mesh and degree");
  }
}

BarycentricPoint barycentric(const SimplicialMesh& mesh, int simplex, const Point& x) {
  if (simplex < 0 || simplex >= mesh.num_simplices()) throw Error("simplex id out of range");
  return {simplex, mesh.barycentric(simplex, x)};
}

int locate_linear(const SimplicialMesh& mesh, const Point& x, double tolerance) {
  for (int t = 0; t < mesh.num_simplices(); ++t) {
    if (mesh.barycentric(t, x).minCoeff() >= -tolerance) return t;
  }
  return -1;
}

namespace {

int require_owner(const SplineField& field, const Point& x) {
  const int t = locate_linear(*field.mesh, x);
  if (t < 0) throw Error("point lies outside the mesh");
  return t;
}

}  // namespace

double bform_eval(const SplineField& field, int simplex, const Point& x) {
  const Bary b = field.mesh->barycentric(simplex, x);
  return de_casteljau<double>(field.degree, field.block(simplex), b);
}

double bform_eval(const SplineField& field, const Point& x) { return bform_eval(field, require_owner(field, x), x); }

double bform_derivative(const SplineField& field, int simplex, const Point& x, const Eigen::VectorXi& order) {
  const SimplicialMesh& mesh = *field.mesh;
  const int d = mesh.dim();
  if (order.size() != d || order.minCoeff() < 0) throw Error("derivative order must have one entry per axis");
  const int total = order.sum();
  if (total > 2) throw Error("derivatives above order 2 are not supported");
  if (total == 0) return bform_eval(field, simplex, x);
  const int D = field.degree;
  if (total > D) return 0.0;

  // Directional coordinates of the unit axis vector e_k are grad(b_m) . e_k.
  const Eigen::MatrixXd& grad = mesh.barycentric_gradients(simplex);
  std::vector<Bary> args;
  for (int k = 0; k < d; ++k) {
    for (int c = 0; c < order(k); ++c) args.push_back(grad.col(k));
  }
  const double scale = total == 1 ? D : static_cast<double>(D) * (D - 1);
  return scale * de_casteljau<double>(D, field.block(simplex), mesh.barycentric(simplex, x), args);
}

double bform_derivative(const SplineField& field, const Point& x, const Eigen::VectorXi& order) {
  return bform_derivative(field, require_owner(field, x), x, order);
}

LocalBasis local_basis(const SimplicialMesh& mesh, int degree, int simplex, const Point& x, unsigned parts) {
  const int d = mesh.dim();
  const Bary b = mesh.barycentric(simplex, x);
  const auto by_degree = bernstein_all_degrees<double>(degree, b);
  const MultiIndexSet& set = multi_indices(degree, d);
  const int nb = set.size();
  LocalBasis out;
  if (parts & kValues) out.value = by_degree[degree];

  const Eigen::MatrixXd& grad = mesh.barycentric_gradients(simplex);
  if ((parts & kGradients) != 0u) {
    out.gradient.setZero(nb, d);
    if (degree >= 1) {
      for (int i = 0; i < nb; ++i) {
        for (int m = 0; m <= d; ++m) {
          const int j = set.lower(i, m);
          if (j >= 0) out.gradient.row(i) += by_degree[degree - 1](j) * grad.row(m);
        }
      }
      out.gradient *= degree;
    }
  }
  if ((parts & kLaplacians) != 0u) {
    out.laplacian.setZero(nb);
    if (degree >= 2) {
      const Eigen::MatrixXd metric = grad * grad.transpose();
      const MultiIndexSet& below = multi_indices(degree - 1, d);
      for (int i = 0; i < nb; ++i) {
        double acc = 0.0;
        for (int m = 0; m <= d; ++m) {
          const int j = set.lower(i, m);
          if (j < 0) continue;
          for (int n = 0; n <= d; ++n) {
            const int k = below.lower(j, n);
            if (k >= 0) acc += metric(m, n) * by_degree[degree - 2](k);
          }
        }
        out.laplacian(i) = static_cast<double>(degree) * (degree - 1) * acc;
      }
    }
  }
  return out;
}

Eigen::SparseVector<double> basis_row(const SimplicialMesh& mesh, int degree, int simplex, const Point& x,
                                      BasisOperator op) {
  if (simplex < 0 || simplex >= mesh.num_simplices()) throw Error("simplex id out of range");
  if (mesh.barycentric(simplex, x).minCoeff() < -1e-9) throw Error("point does not lie in the given simplex");
  const int d = mesh.dim();
  const int nb = basis_size(degree, d);
  Eigen::VectorXd local;
  switch (op) {
    case BasisOperator::Value:
      local = local_basis(mesh, degree, simplex, x, kValues).value;
      break;
    case BasisOperator::Laplacian:
      local = local_basis(mesh, degree, simplex, x, kLaplacians).laplacian;
      break;
    default: {
      const int axis = static_cast<int>(op) - 1;
      if (axis >= d) throw Error("derivative axis exceeds mesh dimension");
      local = local_basis(mesh, degree, simplex, x, kGradients).gradient.col(axis);
    }
  }
  Eigen::SparseVector<double> row(static_cast<Eigen::Index>(mesh.num_simplices()) * nb);
  row.reserve(nb);
  const Eigen::Index offset = static_cast<Eigen::Index>(simplex) * nb;
  for (int i = 0; i < nb; ++i) row.insert(offset + i) = local(i);
  return row;
}

SplineField interpolate(MeshPtr mesh, int degree, const ScalarFunction& f) {
  const int d = mesh->dim();
  const MultiIndexSet& set = multi_indices(degree, d);
  const int nb = set.size();
  Eigen::MatrixXd collocation(nb, nb);
  for (int i = 0; i < nb; ++i) {
    const Bary b = set[i].cast<double>() / std::max(degree, 1);
    for (int j = 0; j < nb; ++j) collocation(i, j) = bernstein_eval<double>(degree, set[j], b);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(collocation);
  SplineField field(mesh, degree);
  Eigen::VectorXd samples(nb);
  for (int t = 0; t < mesh->num_simplices(); ++t) {
    for (int i = 0; i < nb; ++i) {
      Point x = Point::Zero(d);
      for (int m = 0; m <= d; ++m) x += set[i](m) * mesh->vertex(mesh->simplex_vertex(t, m));
      samples(i) = f(x / std::max(degree, 1));
    }
    field.block(t) = lu.solve(samples);
  }
  return field;
}

}  // namespace splocate
