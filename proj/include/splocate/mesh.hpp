#pragma once

#include "splocate/types.hpp"

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace splocate {

struct InteriorFace {
  std::vector<int> vertices;  // sorted global vertex ids
  int left;
  int right;
};

struct BoundaryFace {
  std::vector<int> vertices;  // sorted global vertex ids
  int owner;
};

/// Conforming triangulation (dim 2) or tetrahedralization (dim 3).
///
/// Construction orients every simplex positively, rejects degenerate or
/// non-conforming input and builds the face census. The object is immutable
/// afterwards.
class SimplicialMesh {
 public:
  /// `vertices` is nv x dim, `simplices` is ns x (dim+1) zero-based indices.
  SimplicialMesh(Eigen::MatrixXd vertices, Eigen::MatrixXi simplices);

  int dim() const { return static_cast<int>(vertices_.cols()); }
  int num_vertices() const { return static_cast<int>(vertices_.rows()); }
  int num_simplices() const { return static_cast<int>(simplices_.rows()); }

  const Eigen::MatrixXd& vertices() const { return vertices_; }
  const Eigen::MatrixXi& simplices() const { return simplices_; }
  Point vertex(int v) const { return vertices_.row(v).transpose(); }
  int simplex_vertex(int t, int m) const { return simplices_(t, m); }

  /// Signed d-volume (positive after construction).
  double volume(int t) const { return volumes_[t]; }

  /// Gradients of the barycentric coordinates of simplex t:
  /// row m holds grad(b_m), a (dim+1) x dim matrix.
  const Eigen::MatrixXd& barycentric_gradients(int t) const { return bary_grad_[t]; }

  /// Barycentric coordinates of x with respect to simplex t.
  Bary barycentric(int t, const Point& x) const;

  const std::vector<InteriorFace>& interior_faces() const { return interior_faces_; }
  const std::vector<BoundaryFace>& boundary_faces() const { return boundary_faces_; }

  /// True when the facet opposite local vertex m of simplex t is on the boundary.
  bool facet_on_boundary(int t, int m) const { return boundary_facet_[t][m]; }

  Point lower_corner() const { return vertices_.colwise().minCoeff().transpose(); }
  Point upper_corner() const { return vertices_.colwise().maxCoeff().transpose(); }

 private:
  Eigen::MatrixXd vertices_;
  Eigen::MatrixXi simplices_;
  std::vector<double> volumes_;
  std::vector<Eigen::MatrixXd> bary_grad_;
  std::vector<Eigen::MatrixXd> bary_inverse_;
  std::vector<InteriorFace> interior_faces_;
  std::vector<BoundaryFace> boundary_faces_;
  std::vector<std::array<bool, 4>> boundary_facet_;
};

using MeshPtr = std::shared_ptr<const SimplicialMesh>;

/// Uniform mesh of the box [lo, hi] with cell size h. 2D cells are split by
/// the lo->hi diagonal, 3D cells by the Kuhn 6-tetrahedron split.
SimplicialMesh uniform_box_mesh(const Point& lo, const Point& hi, double h);

/// Triangulates a simple polygon (ear clipping) and then refines uniformly
/// until the longest edge is at most `max_edge` (no refinement if <= 0).
SimplicialMesh polygon_mesh(const Eigen::MatrixX2d& loop, double max_edge = 0.0);

/// Red refinement: each triangle becomes 4, each tetrahedron 8.
SimplicialMesh refine_uniform(const SimplicialMesh& mesh);

/// Length of the longest edge.
double mesh_size(const SimplicialMesh& mesh);

/// Built-in stand-ins for the polygonal test domains.
Eigen::MatrixX2d l_shape_polygon();
Eigen::MatrixX2d pentagon_polygon();
Eigen::MatrixX2d notched_square_polygon();

/// Reads a vertex loop from a text file with one "x y" pair per line.
Eigen::MatrixX2d read_polygon(const std::string& path);

/// Plain-text mesh format: `dim nv ns`, nv vertex lines, ns simplex lines.
SimplicialMesh read_mesh(std::istream& in);
SimplicialMesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const SimplicialMesh& mesh);

/// Domain points of degree D' on every simplex, one row per (simplex, alpha).
struct DomainPointSet {
  Eigen::MatrixXd points;  // n x dim
  std::vector<int> owner;
  std::vector<MultiIndex> multi_index;
  std::vector<bool> on_boundary;

  int size() const { return static_cast<int>(owner.size()); }
};

DomainPointSet domain_points(const SimplicialMesh& mesh, int degree);

/// Domain points with coincident copies merged (tolerance 1e-12). The owner of
/// a merged point is the lowest simplex id among its copies; the boundary flag
/// is set if any copy is flagged.
struct UniquePointSet {
  Eigen::MatrixXd points;
  std::vector<int> owner;
  std::vector<bool> on_boundary;

  int size() const { return static_cast<int>(owner.size()); }
  Point point(int i) const { return points.row(i).transpose(); }
};

UniquePointSet unique_domain_points(const SimplicialMesh& mesh, int degree);

/// Coordinate-hash deduplication at an absolute tolerance.
class PointDeduplicator {
 public:
  explicit PointDeduplicator(double tolerance = 1e-12) : tol_(tolerance) {}

  /// Returns the id of an existing point within tolerance, or registers x
  /// under `new_id` and returns it.
  int find_or_insert(const Point& x, int new_id);

 private:
  double tol_;
  std::vector<Point> stored_;
  std::vector<int> ids_;
  std::unordered_map<std::size_t, std::vector<int>> buckets_;
};

/// Point location with a uniform bucket grid. Ties go to the lowest simplex id.
class PointLocator {
 public:
  explicit PointLocator(MeshPtr mesh, double tolerance = 1e-12);

  /// Owning simplex of x, or -1 if x lies outside every simplex.
  int locate(const Point& x) const;

  const SimplicialMesh& mesh() const { return *mesh_; }

 private:
  std::size_t bucket_of(const Point& x) const;

  MeshPtr mesh_;
  double tol_;
  Point lo_;
  Point cell_;
  Eigen::Vector3i counts_;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace splocate
