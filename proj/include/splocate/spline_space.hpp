#pragma once

#include "splocate/bernstein.hpp"
#include "splocate/mesh.hpp"

#include <iosfwd>
#include <vector>

namespace splocate {

/// Linear conditions H c = 0 that make a piecewise polynomial C^r across
/// every interior face. Columns address one scalar field's coefficients.
struct SmoothnessMatrix {
  struct RowInfo {
    int face;
    int order;
  };

  SparseMatrix H;
  std::vector<RowInfo> rows;
};

/// Bernstein-Bezier smoothness conditions of orders 0..r. With r = -1 the
/// result has no rows. `active`, when non-empty, restricts the conditions to
/// faces whose two simplices are both active.
SmoothnessMatrix smoothness_matrix(const SimplicialMesh& mesh, int degree, int smoothness,
                                   const std::vector<bool>& active = {});

/// Expected row count: faces * sum_{rho<=r} binomial(D - rho + d - 1, d - 1).
long smoothness_row_count(int interior_faces, int degree, int smoothness, int dim);

/// Value rows at the unique boundary domain points of degree D' and the
/// boundary data sampled there (one column per velocity component).
struct BoundaryBlock {
  SparseMatrix B;
  Eigen::MatrixXd G;
  Eigen::MatrixXd points;
  std::vector<int> owner;
};

BoundaryBlock boundary_block(const SimplicialMesh& mesh, int degree, int collocation_degree, const VectorFunction& g,
                             int components);

/// Matrix-Market-style `row col value` dump (1-based, with a size header).
void write_coordinate_matrix(std::ostream& out, const SparseMatrix& m);

}  // namespace splocate
