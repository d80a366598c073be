#include "splocate/mesh.hpp"

#include "splocate/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace splocate {

namespace {

using FaceKey = std::array<int, 3>;

FaceKey facet_key(const Eigen::MatrixXi& simplices, int t, int skip) {
  FaceKey key{-1, -1, -1};
  int n = 0;
  for (int m = 0; m < simplices.cols(); ++m) {
    if (m != skip) key[n++] = simplices(t, m);
  }
  std::sort(key.begin(), key.begin() + n);
  return key;
}

std::vector<int> key_vertices(const FaceKey& key, int count) {
  return std::vector<int>(key.begin(), key.begin() + count);
}

double factorial_of(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

SimplicialMesh::SimplicialMesh(Eigen::MatrixXd vertices, Eigen::MatrixXi simplices)
    : vertices_(std::move(vertices)), simplices_(std::move(simplices)) {
  const int d = dim();
  if (d != 2 && d != 3) throw Error("mesh dimension must be 2 or 3");
  if (simplices_.cols() != d + 1) throw Error("simplex arity does not match dimension");
  if (simplices_.rows() == 0) throw Error("mesh has no simplices");
  if ((simplices_.array() < 0).any() || (simplices_.array() >= num_vertices()).any()) {
    throw Error("simplex references a vertex out of range");
  }

  const int ns = num_simplices();
  volumes_.resize(ns);
  bary_grad_.resize(ns);
  bary_inverse_.resize(ns);
  boundary_facet_.assign(ns, {false, false, false, false});

  const double extent = (upper_corner() - lower_corner()).maxCoeff();
  const double vol_floor = 1e-14 * std::pow(extent, d);
  for (int t = 0; t < ns; ++t) {
    Eigen::MatrixXd edges(d, d);
    for (int m = 1; m <= d; ++m) {
      edges.col(m - 1) = (vertices_.row(simplices_(t, m)) - vertices_.row(simplices_(t, 0))).transpose();
    }
    double det = edges.determinant();
    if (std::abs(det) / factorial_of(d) <= vol_floor) {
      throw Error("degenerate simplex " + std::to_string(t));
    }
    if (det < 0) {
      std::swap(simplices_(t, d - 1), simplices_(t, d));
      edges.col(d - 2).swap(edges.col(d - 1));
      det = -det;
    }
    volumes_[t] = det / factorial_of(d);
    bary_inverse_[t] = edges.inverse();
    Eigen::MatrixXd grad(d + 1, d);
    grad.bottomRows(d) = bary_inverse_[t];
    grad.row(0) = -bary_inverse_[t].colwise().sum();
    bary_grad_[t] = std::move(grad);
  }

  std::map<FaceKey, std::vector<std::pair<int, int>>> census;
  for (int t = 0; t < ns; ++t) {
    for (int m = 0; m <= d; ++m) census[facet_key(simplices_, t, m)].emplace_back(t, m);
  }
  for (const auto& [key, owners] : census) {
    if (owners.size() == 1) {
      boundary_faces_.push_back({key_vertices(key, d), owners[0].first});
      boundary_facet_[owners[0].first][owners[0].second] = true;
    } else if (owners.size() == 2) {
      interior_faces_.push_back({key_vertices(key, d), owners[0].first, owners[1].first});
    } else {
      throw Error("non-conforming mesh: a facet is shared by more than two simplices");
    }
  }
}

Bary SimplicialMesh::barycentric(int t, const Point& x) const {
  const int d = dim();
  Bary b(d + 1);
  const Point rel = x - vertex(simplices_(t, 0));
  b.tail(d) = bary_inverse_[t] * rel;
  b(0) = 1.0 - b.tail(d).sum();
  return b;
}

SimplicialMesh uniform_box_mesh(const Point& lo, const Point& hi, double h) {
  const int d = static_cast<int>(lo.size());
  if (d != 2 && d != 3) throw Error("box mesh dimension must be 2 or 3");
  if (hi.size() != d) throw Error("box corners have different dimensions");
  if (!(h > 0)) throw Error("mesh size h must be positive");
  Eigen::Vector3i n = Eigen::Vector3i::Ones();
  for (int k = 0; k < d; ++k) {
    const double extent = hi(k) - lo(k);
    if (!(extent > 0)) throw Error("degenerate box");
    const double cells = extent / h;
    n(k) = static_cast<int>(std::lround(cells));
    if (n(k) < 1 || std::abs(cells - n(k)) > 1e-9 * std::max(1.0, cells)) {
      throw Error("h must divide every box extent into whole cells");
    }
  }

  const int nx = n(0) + 1;
  const int ny = n(1) + 1;
  const int nz = d == 3 ? n(2) + 1 : 1;
  Eigen::MatrixXd vertices(nx * ny * nz, d);
  auto vid = [&](int i, int j, int k) { return i + nx * (j + ny * k); };
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int v = vid(i, j, k);
        vertices(v, 0) = lo(0) + (hi(0) - lo(0)) * i / n(0);
        vertices(v, 1) = lo(1) + (hi(1) - lo(1)) * j / n(1);
        if (d == 3) vertices(v, 2) = lo(2) + (hi(2) - lo(2)) * k / n(2);
      }
    }
  }

  std::vector<std::array<int, 4>> simplices;
  if (d == 2) {
    for (int j = 0; j < n(1); ++j) {
      for (int i = 0; i < n(0); ++i) {
        const int v00 = vid(i, j, 0), v10 = vid(i + 1, j, 0);
        const int v01 = vid(i, j + 1, 0), v11 = vid(i + 1, j + 1, 0);
        simplices.push_back({v00, v10, v11, -1});
        simplices.push_back({v00, v11, v01, -1});
      }
    }
  } else {
    // Kuhn split: one tetrahedron per axis permutation, all sharing the
    // (0,0,0)->(1,1,1) diagonal.
    std::array<int, 3> perm{0, 1, 2};
    std::vector<std::array<int, 3>> perms;
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    for (int k = 0; k < n(2); ++k) {
      for (int j = 0; j < n(1); ++j) {
        for (int i = 0; i < n(0); ++i) {
          for (const auto& p : perms) {
            std::array<int, 3> c{i, j, k};
            std::array<int, 4> tet{};
            tet[0] = vid(c[0], c[1], c[2]);
            for (int s = 0; s < 3; ++s) {
              ++c[p[s]];
              tet[s + 1] = vid(c[0], c[1], c[2]);
            }
            simplices.push_back(tet);
          }
        }
      }
    }
  }

  Eigen::MatrixXi cells(static_cast<int>(simplices.size()), d + 1);
  for (int t = 0; t < cells.rows(); ++t) {
    for (int m = 0; m <= d; ++m) cells(t, m) = simplices[t][m];
  }
  return SimplicialMesh(std::move(vertices), std::move(cells));
}

double mesh_size(const SimplicialMesh& mesh) {
  if (mesh.num_simplices() == 0) throw Error("empty mesh");
  double longest = 0.0;
  const int d = mesh.dim();
  for (int t = 0; t < mesh.num_simplices(); ++t) {
    for (int a = 0; a <= d; ++a) {
      for (int b = a + 1; b <= d; ++b) {
        const double len = (mesh.vertex(mesh.simplex_vertex(t, a)) - mesh.vertex(mesh.simplex_vertex(t, b))).norm();
        longest = std::max(longest, len);
      }
    }
  }
  return longest;
}

SimplicialMesh refine_uniform(const SimplicialMesh& mesh) {
  const int d = mesh.dim();
  std::vector<Point> vertices;
  for (int v = 0; v < mesh.num_vertices(); ++v) vertices.push_back(mesh.vertex(v));
  std::map<std::pair<int, int>, int> midpoints;
  auto midpoint = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoints.find(key);
    if (it != midpoints.end()) return it->second;
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (mesh.vertex(a) + mesh.vertex(b)));
    midpoints.emplace(key, id);
    return id;
  };

  std::vector<std::array<int, 4>> children;
  for (int t = 0; t < mesh.num_simplices(); ++t) {
    std::array<int, 4> v{};
    for (int m = 0; m <= d; ++m) v[m] = mesh.simplex_vertex(t, m);
    if (d == 2) {
      const int m01 = midpoint(v[0], v[1]), m12 = midpoint(v[1], v[2]), m02 = midpoint(v[0], v[2]);
      children.push_back({v[0], m01, m02, -1});
      children.push_back({m01, v[1], m12, -1});
      children.push_back({m02, m12, v[2], -1});
      children.push_back({m01, m12, m02, -1});
    } else {
      const int m01 = midpoint(v[0], v[1]), m02 = midpoint(v[0], v[2]), m03 = midpoint(v[0], v[3]);
      const int m12 = midpoint(v[1], v[2]), m13 = midpoint(v[1], v[3]), m23 = midpoint(v[2], v[3]);
      children.push_back({v[0], m01, m02, m03});
      children.push_back({m01, v[1], m12, m13});
      children.push_back({m02, m12, v[2], m23});
      children.push_back({m03, m13, m23, v[3]});
      // Interior octahedron split along the m02-m13 diagonal.
      children.push_back({m01, m02, m03, m13});
      children.push_back({m01, m02, m12, m13});
      children.push_back({m02, m03, m13, m23});
      children.push_back({m02, m12, m13, m23});
    }
  }

  Eigen::MatrixXd verts(static_cast<int>(vertices.size()), d);
  for (int i = 0; i < verts.rows(); ++i) verts.row(i) = vertices[i].transpose();
  Eigen::MatrixXi cells(static_cast<int>(children.size()), d + 1);
  for (int t = 0; t < cells.rows(); ++t) {
    for (int m = 0; m <= d; ++m) cells(t, m) = children[t][m];
  }
  return SimplicialMesh(std::move(verts), std::move(cells));
}

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_intersect(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const Eigen::Vector2d& q1,
                        const Eigen::Vector2d& q2) {
  const double d1 = cross2(q2 - q1, p1 - q1);
  const double d2 = cross2(q2 - q1, p2 - q1);
  const double d3 = cross2(p2 - p1, q1 - p1);
  const double d4 = cross2(p2 - p1, q2 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  auto on_segment = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& p) {
    return p.x() >= std::min(a.x(), b.x()) && p.x() <= std::max(a.x(), b.x()) && p.y() >= std::min(a.y(), b.y()) &&
           p.y() <= std::max(a.y(), b.y());
  };
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

bool point_in_triangle(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                       const Eigen::Vector2d& c) {
  return cross2(b - a, p - a) >= 0 && cross2(c - b, p - b) >= 0 && cross2(a - c, p - c) >= 0;
}

}  // namespace

SimplicialMesh polygon_mesh(const Eigen::MatrixX2d& loop_in, double max_edge) {
  const int n = static_cast<int>(loop_in.rows());
  if (n < 3) throw Error("polygon needs at least 3 vertices");
  Eigen::MatrixX2d loop = loop_in;

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(loop.row(i), loop.row((i + 1) % n), loop.row(j), loop.row((j + 1) % n))) {
        throw Error("polygon is self-intersecting");
      }
    }
  }

  double area2 = 0.0;
  for (int i = 0; i < n; ++i) area2 += cross2(loop.row(i), loop.row((i + 1) % n));
  if (area2 == 0) throw Error("polygon has zero area");
  if (area2 < 0) loop = loop.colwise().reverse().eval();

  std::vector<int> remaining(n);
  for (int i = 0; i < n; ++i) remaining[i] = i;
  std::vector<std::array<int, 4>> triangles;
  while (remaining.size() > 3) {
    const int m = static_cast<int>(remaining.size());
    bool clipped = false;
    for (int k = 0; k < m && !clipped; ++k) {
      const int ia = remaining[(k + m - 1) % m], ib = remaining[k], ic = remaining[(k + 1) % m];
      const Eigen::Vector2d a = loop.row(ia), b = loop.row(ib), c = loop.row(ic);
      if (cross2(b - a, c - b) <= 0) continue;  // reflex or collinear corner
      bool contains = false;
      for (int q : remaining) {
        if (q == ia || q == ib || q == ic) continue;
        if (point_in_triangle(loop.row(q), a, b, c)) {
          contains = true;
          break;
        }
      }
      if (contains) continue;
      triangles.push_back({ia, ib, ic, -1});
      remaining.erase(remaining.begin() + k);
      clipped = true;
    }
    if (!clipped) throw Error("ear clipping failed; polygon is not simple");
  }
  triangles.push_back({remaining[0], remaining[1], remaining[2], -1});

  Eigen::MatrixXi cells(static_cast<int>(triangles.size()), 3);
  for (int t = 0; t < cells.rows(); ++t) cells.row(t) << triangles[t][0], triangles[t][1], triangles[t][2];
  SimplicialMesh mesh(Eigen::MatrixXd(loop), std::move(cells));
  if (max_edge > 0) {
    while (mesh_size(mesh) > max_edge * (1 + 1e-12)) mesh = refine_uniform(mesh);
  }
  return mesh;
}

Eigen::MatrixX2d l_shape_polygon() {
  Eigen::MatrixX2d p(6, 2);
  p << 0, 0, 1, 0, 1, 0.5, 0.5, 0.5, 0.5, 1, 0, 1;
  return p;
}

Eigen::MatrixX2d pentagon_polygon() {
  Eigen::MatrixX2d p(5, 2);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < 5; ++i) {
    const double angle = pi / 2 + 2 * pi * i / 5;
    p.row(i) << 0.5 + 0.5 * std::cos(angle), 0.5 + 0.5 * std::sin(angle);
  }
  return p;
}

Eigen::MatrixX2d notched_square_polygon() {
  Eigen::MatrixX2d p(8, 2);
  p << 0, 0, 1, 0, 1, 1, 0.625, 1, 0.625, 0.5, 0.375, 0.5, 0.375, 1, 0, 1;
  return p;
}

Eigen::MatrixX2d read_polygon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open polygon file " + path);
  std::vector<Eigen::Vector2d> pts;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double x, y;
    if (ls >> x >> y) pts.emplace_back(x, y);
  }
  Eigen::MatrixX2d loop(static_cast<int>(pts.size()), 2);
  for (int i = 0; i < loop.rows(); ++i) loop.row(i) = pts[i].transpose();
  return loop;
}

SimplicialMesh read_mesh(std::istream& in) {
  int d = 0, nv = 0, ns = 0;
  if (!(in >> d >> nv >> ns)) throw Error("mesh header must be `dim nv ns`");
  if ((d != 2 && d != 3) || nv <= 0 || ns <= 0) throw Error("invalid mesh header");
  Eigen::MatrixXd vertices(nv, d);
  for (int v = 0; v < nv; ++v) {
    for (int k = 0; k < d; ++k) {
      if (!(in >> vertices(v, k))) throw Error("truncated vertex list at vertex " + std::to_string(v));
    }
  }
  Eigen::MatrixXi simplices(ns, d + 1);
  for (int t = 0; t < ns; ++t) {
    for (int m = 0; m <= d; ++m) {
      if (!(in >> simplices(t, m))) throw Error("truncated simplex list at simplex " + std::to_string(t));
    }
  }
  return SimplicialMesh(std::move(vertices), std::move(simplices));
}

SimplicialMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file " + path);
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const SimplicialMesh& mesh) {
  const int d = mesh.dim();
  out << d << ' ' << mesh.num_vertices() << ' ' << mesh.num_simplices() << '\n';
  out.precision(17);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    for (int k = 0; k < d; ++k) out << (k ? " " : "") << mesh.vertices()(v, k);
    out << '\n';
  }
  for (int t = 0; t < mesh.num_simplices(); ++t) {
    for (int m = 0; m <= d; ++m) out << (m ? " " : "") << mesh.simplex_vertex(t, m);
    out << '\n';
  }
}

DomainPointSet domain_points(const SimplicialMesh& mesh, int degree) {
  if (degree < 1) throw Error("domain point degree must be >= 1");
  const int d = mesh.dim();
  const auto& indices = multi_indices(degree, d);
  const int per = indices.size();
  DomainPointSet set;
  const int total = mesh.num_simplices() * per;
  set.points.resize(total, d);
  set.owner.reserve(total);
  set.multi_index.reserve(total);
  set.on_boundary.reserve(total);
  int row = 0;
  for (int t = 0; t < mesh.num_simplices(); ++t) {
    for (int i = 0; i < per; ++i, ++row) {
      const MultiIndex& alpha = indices[i];
      Point x = Point::Zero(d);
      bool boundary = false;
      for (int m = 0; m <= d; ++m) {
        x += alpha(m) * mesh.vertex(mesh.simplex_vertex(t, m));
        if (alpha(m) == 0 && mesh.facet_on_boundary(t, m)) boundary = true;
      }
      set.points.row(row) = (x / degree).transpose();
      set.owner.push_back(t);
      set.multi_index.push_back(alpha);
      set.on_boundary.push_back(boundary);
    }
  }
  return set;
}

int PointDeduplicator::find_or_insert(const Point& x, int new_id) {
  const int d = static_cast<int>(x.size());
  std::array<long long, 3> cell{0, 0, 0};
  for (int k = 0; k < d; ++k) cell[k] = static_cast<long long>(std::floor(x(k) / tol_));
  auto hash_of = [](const std::array<long long, 3>& c) {
    std::size_t h = 1469598103934665603ull;
    for (long long v : c) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  };
  const int span = d == 3 ? 1 : 0;
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      for (int c = -span; c <= span; ++c) {
        const std::array<long long, 3> probe{cell[0] + a, cell[1] + b, cell[2] + c};
        auto it = buckets_.find(hash_of(probe));
        if (it == buckets_.end()) continue;
        for (int local : it->second) {
          if ((stored_[local] - x).lpNorm<Eigen::Infinity>() <= tol_) return ids_[local];
        }
      }
    }
  }
  buckets_[hash_of(cell)].push_back(static_cast<int>(stored_.size()));
  stored_.push_back(x);
  ids_.push_back(new_id);
  return new_id;
}

UniquePointSet unique_domain_points(const SimplicialMesh& mesh, int degree) {
  const DomainPointSet all = domain_points(mesh, degree);
  PointDeduplicator dedup;
  std::vector<int> first_row;
  UniquePointSet out;
  std::vector<bool> boundary;
  for (int row = 0; row < all.size(); ++row) {
    const int next = static_cast<int>(first_row.size());
    const int id = dedup.find_or_insert(all.points.row(row).transpose(), next);
    if (id == next) {
      first_row.push_back(row);
      out.owner.push_back(all.owner[row]);
      boundary.push_back(all.on_boundary[row]);
    } else if (all.on_boundary[row]) {
      boundary[id] = true;
    }
  }
  out.points.resize(static_cast<int>(first_row.size()), mesh.dim());
  for (int i = 0; i < out.points.rows(); ++i) out.points.row(i) = all.points.row(first_row[i]);
  out.on_boundary = std::move(boundary);
  return out;
}

PointLocator::PointLocator(MeshPtr mesh, double tolerance) : mesh_(std::move(mesh)), tol_(tolerance) {
  const SimplicialMesh& m = *mesh_;
  const int d = m.dim();
  lo_ = m.lower_corner();
  const Point hi = m.upper_corner();
  const int per_axis = std::max(1, static_cast<int>(std::round(std::pow(m.num_simplices(), 1.0 / d))));
  counts_ = Eigen::Vector3i::Ones();
  cell_ = Point::Ones(d);
  for (int k = 0; k < d; ++k) {
    counts_(k) = per_axis;
    cell_(k) = (hi(k) - lo_(k)) / per_axis;
  }
  buckets_.resize(static_cast<std::size_t>(counts_.prod()));
  for (int t = 0; t < m.num_simplices(); ++t) {
    Eigen::Vector3i a = Eigen::Vector3i::Zero(), b = Eigen::Vector3i::Zero();
    Point smin = m.vertex(m.simplex_vertex(t, 0)), smax = smin;
    for (int v = 1; v <= d; ++v) {
      smin = smin.cwiseMin(m.vertex(m.simplex_vertex(t, v)));
      smax = smax.cwiseMax(m.vertex(m.simplex_vertex(t, v)));
    }
    for (int k = 0; k < d; ++k) {
      const double pad = 1e-9 * cell_(k);
      a(k) = std::clamp(static_cast<int>(std::floor((smin(k) - pad - lo_(k)) / cell_(k))), 0, counts_(k) - 1);
      b(k) = std::clamp(static_cast<int>(std::floor((smax(k) + pad - lo_(k)) / cell_(k))), 0, counts_(k) - 1);
    }
    for (int k2 = a(2); k2 <= b(2); ++k2) {
      for (int k1 = a(1); k1 <= b(1); ++k1) {
        for (int k0 = a(0); k0 <= b(0); ++k0) {
          buckets_[static_cast<std::size_t>(k0 + counts_(0) * (k1 + counts_(1) * k2))].push_back(t);
        }
      }
    }
  }
}

std::size_t PointLocator::bucket_of(const Point& x) const {
  Eigen::Vector3i c = Eigen::Vector3i::Zero();
  for (int k = 0; k < x.size(); ++k) {
    c(k) = std::clamp(static_cast<int>(std::floor((x(k) - lo_(k)) / cell_(k))), 0, counts_(k) - 1);
  }
  return static_cast<std::size_t>(c(0) + counts_(0) * (c(1) + counts_(1) * c(2)));
}

int PointLocator::locate(const Point& x) const {
  for (int t : buckets_[bucket_of(x)]) {
    if (mesh_->barycentric(t, x).minCoeff() >= -tol_) return t;
  }
  return -1;
}

}  // namespace splocate
