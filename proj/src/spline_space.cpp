#include "splocate/spline_space.hpp"

#include <ostream>

namespace splocate {

long smoothness_row_count(int interior_faces, int degree, int smoothness, int dim) {
  long per_face = 0;
  for (int rho = 0; rho <= smoothness; ++rho) per_face += static_cast<long>(binomial(degree - rho + dim - 1, dim - 1));
  return per_face * interior_faces;
}

SmoothnessMatrix smoothness_matrix(const SimplicialMesh& mesh, int degree, int smoothness,
                                   const std::vector<bool>& active) {
  if (smoothness < -1) throw Error("smoothness must be >= -1");
  if (smoothness >= degree) throw Error("smoothness r must be smaller than the degree D");
  const int d = mesh.dim();
  const MultiIndexSet& set = multi_indices(degree, d);
  const int nb = set.size();
  const Eigen::Index cols = static_cast<Eigen::Index>(mesh.num_simplices()) * nb;

  SmoothnessMatrix out;
  std::vector<Triplet> triplets;
  int row = 0;
  const auto& faces = mesh.interior_faces();
  for (int f = 0; f < static_cast<int>(faces.size()) && smoothness >= 0; ++f) {
    const int t = faces[f].left;
    const int u = faces[f].right;
    if (!active.empty() && (!active[t] || !active[u])) continue;

    // Local index in t of each vertex of u, and the vertices off the face.
    std::array<int, 4> to_t{-1, -1, -1, -1};
    int off_u = -1;
    int off_t = -1;
    for (int mu = 0; mu <= d; ++mu) {
      for (int mt = 0; mt <= d; ++mt) {
        if (mesh.simplex_vertex(u, mu) == mesh.simplex_vertex(t, mt)) to_t[mu] = mt;
      }
      if (to_t[mu] < 0) off_u = mu;
    }
    for (int mt = 0; mt <= d; ++mt) {
      bool shared = false;
      for (int mu = 0; mu <= d; ++mu) shared = shared || to_t[mu] == mt;
      if (!shared) off_t = mt;
    }
    const Bary lambda = mesh.barycentric(t, mesh.vertex(mesh.simplex_vertex(u, off_u)));

    for (int rho = 0; rho <= smoothness; ++rho) {
      const MultiIndexSet& layer = multi_indices(rho, d);
      Eigen::VectorXd weights(layer.size());
      for (int g = 0; g < layer.size(); ++g) weights(g) = bernstein_eval<double>(rho, layer[g], lambda);

      for (int i = 0; i < nb; ++i) {
        const MultiIndex& beta = set[i];
        if (beta(off_u) != rho) continue;
        MultiIndex base = MultiIndex::Zero(d + 1);
        for (int mu = 0; mu <= d; ++mu) {
          if (mu != off_u) base(to_t[mu]) = beta(mu);
        }
        base(off_t) = 0;
        triplets.emplace_back(row, static_cast<int>(u * nb + i), 1.0);
        for (int g = 0; g < layer.size(); ++g) {
          if (weights(g) == 0.0) continue;
          const int j = set.index_of(base + layer[g]);
          triplets.emplace_back(row, static_cast<int>(t * nb + j), -weights(g));
        }
        out.rows.push_back({f, rho});
        ++row;
      }
    }
  }
  out.H.resize(row, cols);
  out.H.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

BoundaryBlock boundary_block(const SimplicialMesh& mesh, int degree, int collocation_degree, const VectorFunction& g,
                             int components) {
  const UniquePointSet pts = unique_domain_points(mesh, collocation_degree);
  const int d = mesh.dim();
  const int nb = basis_size(degree, d);
  std::vector<int> rows_of;
  for (int i = 0; i < pts.size(); ++i) {
    if (pts.on_boundary[i]) rows_of.push_back(i);
  }
  const int nrows = static_cast<int>(rows_of.size());

  BoundaryBlock out;
  out.points.resize(nrows, d);
  out.G.resize(nrows, components);
  out.owner.resize(nrows);
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(nrows) * nb);
  for (int r = 0; r < nrows; ++r) {
    const int i = rows_of[r];
    const Point x = pts.point(i);
    const int t = pts.owner[i];
    const LocalBasis basis = local_basis(mesh, degree, t, x, kValues);
    for (int j = 0; j < nb; ++j) {
      if (basis.value(j) != 0.0) triplets.emplace_back(r, t * nb + j, basis.value(j));
    }
    out.points.row(r) = x.transpose();
    out.owner[r] = t;
    const Point gx = g(x);
    if (gx.size() != components) throw Error("boundary data has the wrong number of components");
    out.G.row(r) = gx.transpose();
  }
  out.B.resize(nrows, static_cast<Eigen::Index>(mesh.num_simplices()) * nb);
  out.B.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

void write_coordinate_matrix(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  out.precision(17);
  for (int r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
  }
}

}  // namespace splocate
