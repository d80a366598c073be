#pragma once

#include "splocate/mesh.hpp"
#include "splocate/types.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace splocate {

inline constexpr int kMaxDegree = 20;

/// Binomial coefficient as a double (exact for the sizes used here).
double binomial(int n, int k);

/// Multi-indices |alpha| = degree with dim+1 entries, in lexicographic order:
/// descending first entry, then descending second entry, and so on. For
/// degree 2 in 2D: (2,0,0) (1,1,0) (1,0,1) (0,2,0) (0,1,1) (0,0,2).
class MultiIndexSet {
 public:
  MultiIndexSet(int degree, int dim);

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(list_.size()); }
  const MultiIndex& operator[](int i) const { return list_[i]; }
  auto begin() const { return list_.begin(); }
  auto end() const { return list_.end(); }

  /// Position of alpha in the ordering, or -1 if |alpha| != degree.
  int index_of(const MultiIndex& alpha) const;

  /// Position of alpha - e_m in the degree-1 set, or -1 if alpha_m == 0.
  int lower(int i, int m) const { return lower_[i * (dim_ + 1) + m]; }

 private:
  int degree_;
  int dim_;
  std::vector<MultiIndex> list_;
  std::vector<int> lookup_;
  std::vector<int> lower_;
};

/// Shared, immutable index sets for 0 <= degree <= kMaxDegree.
const MultiIndexSet& multi_indices(int degree, int dim);

/// Number of Bernstein basis polynomials of degree D on a dim-simplex.
inline int basis_size(int degree, int dim) { return static_cast<int>(binomial(degree + dim, dim)); }

/// D! / prod(alpha_m!) * prod(b_m^alpha_m).
template <typename Scalar>
Scalar bernstein_eval(int degree, const MultiIndex& alpha, const BaryT<Scalar>& b) {
  if (alpha.sum() != degree) throw Error("multi-index does not sum to the degree");
  Scalar value(binomial(degree, 0));
  int remaining = degree;
  for (int m = 0; m < alpha.size(); ++m) {
    value *= Scalar(binomial(remaining, alpha(m)));
    remaining -= alpha(m);
    for (int p = 0; p < alpha(m); ++p) value *= b(m);
  }
  return value;
}

/// All degree-D Bernstein values at b, ordered as multi_indices(D, dim).
/// `by_degree[n]` receives the degree-n values for n = 0..D.
template <typename Scalar>
std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> bernstein_all_degrees(int degree, const BaryT<Scalar>& b) {
  const int dim = static_cast<int>(b.size()) - 1;
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> by_degree(degree + 1);
  by_degree[0] = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Ones(1);
  for (int n = 1; n <= degree; ++n) {
    const MultiIndexSet& set = multi_indices(n, dim);
    auto& out = by_degree[n];
    out.setZero(set.size());
    for (int i = 0; i < set.size(); ++i) {
      for (int m = 0; m <= dim; ++m) {
        const int j = set.lower(i, m);
        if (j >= 0) out(i) += b(m) * by_degree[n - 1](j);
      }
    }
  }
  return by_degree;
}

/// Blossom of a degree-D B-form evaluated at D barycentric arguments: the
/// first `args.size()` de Casteljau steps use the given weight tuples, the
/// remaining steps use `b`. With directional coordinates as args this yields
/// directional derivatives up to the factor D!/(D-k)!.
template <typename Scalar>
Scalar de_casteljau(int degree, const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& coeffs,
                    const BaryT<Scalar>& b, const std::vector<BaryT<Scalar>>& args = {}) {
  const int dim = static_cast<int>(b.size()) - 1;
  if (static_cast<int>(args.size()) > degree) return Scalar(0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> current = coeffs;
  for (int n = degree, step = 0; n > 0; --n, ++step) {
    const BaryT<Scalar>& w = step < static_cast<int>(args.size()) ? args[step] : b;
    const MultiIndexSet& upper = multi_indices(n, dim);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> next = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(basis_size(n - 1, dim));
    for (int i = 0; i < upper.size(); ++i) {
      for (int m = 0; m <= dim; ++m) {
        const int j = upper.lower(i, m);
        if (j >= 0) next(j) += w(m) * current(i);
      }
    }
    current = std::move(next);
  }
  return current(0);
}

/// Coefficients of one scalar spline over a mesh, blocked per simplex.
struct SplineField {
  MeshPtr mesh;
  int degree = 0;
  Eigen::VectorXd coeffs;

  SplineField() = default;
  SplineField(MeshPtr m, int d);
  SplineField(MeshPtr m, int d, Eigen::VectorXd c);

  int block_size() const { return basis_size(degree, mesh->dim()); }
  auto block(int t) const { return coeffs.segment(static_cast<Eigen::Index>(t) * block_size(), block_size()); }
  auto block(int t) { return coeffs.segment(static_cast<Eigen::Index>(t) * block_size(), block_size()); }
};

struct BarycentricPoint {
  int simplex;
  Bary b;
};

BarycentricPoint barycentric(const SimplicialMesh& mesh, int simplex, const Point& x);

/// Lowest-id simplex containing x by a linear barycentric sign scan, or -1.
int locate_linear(const SimplicialMesh& mesh, const Point& x, double tolerance = 1e-12);

double bform_eval(const SplineField& field, const Point& x);
double bform_eval(const SplineField& field, int simplex, const Point& x);

/// Mixed partial derivative; `order(k)` is the derivative count along axis k
/// and the total order must be at most 2.
double bform_derivative(const SplineField& field, const Point& x, const Eigen::VectorXi& order);
double bform_derivative(const SplineField& field, int simplex, const Point& x, const Eigen::VectorXi& order);

enum class BasisOperator { Value, Dx, Dy, Dz, Laplacian };

inline BasisOperator partial(int axis) { return static_cast<BasisOperator>(1 + axis); }

/// Values, gradients and Laplacians of the Bernstein basis of one simplex.
struct LocalBasis {
  Eigen::VectorXd value;
  Eigen::MatrixXd gradient;  // basis x dim
  Eigen::VectorXd laplacian;
};

enum LocalBasisParts : unsigned { kValues = 1u, kGradients = 2u, kLaplacians = 4u, kAllParts = 7u };

LocalBasis local_basis(const SimplicialMesh& mesh, int degree, int simplex, const Point& x,
                       unsigned parts = kAllParts);

/// Operator applied to each basis function of `simplex` at x, placed at the
/// global coefficient indices of that simplex's block.
Eigen::SparseVector<double> basis_row(const SimplicialMesh& mesh, int degree, int simplex, const Point& x,
                                      BasisOperator op);

/// B-form coefficients of a function on every simplex by interpolation at the
/// degree-D domain points (exact for polynomials of degree <= D).
SplineField interpolate(MeshPtr mesh, int degree, const ScalarFunction& f);

}  // namespace splocate
