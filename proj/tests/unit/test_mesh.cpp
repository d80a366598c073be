#include "splocate/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace splocate;

namespace {

Point p2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

Point p3(double x, double y, double z) {
  Point p(3);
  p << x, y, z;
  return p;
}

double total_volume(const SimplicialMesh& m) {
  double v = 0;
  for (int t = 0; t < m.num_simplices(); ++t) v += m.volume(t);
  return v;
}

// every face of every simplex, counted
std::map<std::vector<int>, int> face_count(const SimplicialMesh& m) {
  std::map<std::vector<int>, int> count;
  for (int t = 0; t < m.num_simplices(); ++t) {
    for (int skip = 0; skip <= m.dim(); ++skip) {
      std::vector<int> f;
      for (int k = 0; k <= m.dim(); ++k)
        if (k != skip) f.push_back(m.simplex_vertex(t, k));
      std::sort(f.begin(), f.end());
      ++count[f];
    }
  }
  return count;
}

}  // namespace

TEST_CASE("unit square h=1/2 census") {
  const SimplicialMesh m = uniform_box_mesh(p2(0, 0), p2(1, 1), 0.5);
  CHECK(m.num_simplices() == 8);
  CHECK(m.num_vertices() == 9);
  CHECK(m.interior_faces().size() == 8);
  CHECK(m.boundary_faces().size() == 8);
  // Euler: V - E + T = 1
  const long edges = static_cast<long>(m.interior_faces().size() + m.boundary_faces().size());
  CHECK(m.num_vertices() - edges + m.num_simplices() == 1);
  CHECK(total_volume(m) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("unit cube h=1/2 has 48 tetrahedra") {
  const SimplicialMesh m = uniform_box_mesh(p3(0, 0, 0), p3(1, 1, 1), 0.5);
  CHECK(m.num_simplices() == 48);
  CHECK(m.num_vertices() == 27);
  CHECK(total_volume(m) == doctest::Approx(1.0).epsilon(1e-14));
  for (const auto& [face, n] : face_count(m)) CHECK((n == 1 || n == 2));
}

TEST_CASE("orientation is positive and faces have two owners") {
  Eigen::MatrixXd v(4, 2);
  v << 0, 0, 1, 0, 1, 1, 0, 1;
  Eigen::MatrixXi s(2, 3);
  s << 0, 2, 1, 0, 3, 2;  // first one clockwise
  const SimplicialMesh m(v, s);
  CHECK(m.volume(0) > 0);
  CHECK(m.volume(1) > 0);
  REQUIRE(m.interior_faces().size() == 1);
  const InteriorFace& f = m.interior_faces()[0];
  CHECK(f.left != f.right);
  CHECK(f.vertices == std::vector<int>{0, 2});
}

TEST_CASE("degenerate simplex is rejected") {
  Eigen::MatrixXd v(3, 2);
  v << 0, 0, 1, 0, 2, 0;
  Eigen::MatrixXi s(1, 3);
  s << 0, 1, 2;
  CHECK_THROWS_AS(SimplicialMesh(v, s), Error);
}

TEST_CASE("facet with three owners is rejected") {
  Eigen::MatrixXd v(5, 2);
  v << 0, 0, 1, 0, 0.5, 1, 0.5, -1, 0.2, 2;
  Eigen::MatrixXi s(3, 3);
  s << 0, 1, 2, 0, 3, 1, 0, 1, 4;
  CHECK_THROWS_AS(SimplicialMesh(v, s), Error);
}

TEST_CASE("polygon triangulation conserves area") {
  Eigen::MatrixX2d square(4, 2);
  square << 0, 0, 1, 0, 1, 1, 0, 1;
  CHECK(total_volume(polygon_mesh(square)) == doctest::Approx(1.0).epsilon(1e-12));

  const SimplicialMesh l = polygon_mesh(l_shape_polygon());
  CHECK(total_volume(l) == doctest::Approx(0.75).epsilon(1e-12));
  for (const auto& [face, n] : face_count(l)) CHECK(n <= 2);
  for (const InteriorFace& f : l.interior_faces()) CHECK(f.left != f.right);

  const SimplicialMesh fine = polygon_mesh(l_shape_polygon(), 0.2);
  CHECK(mesh_size(fine) <= 0.2 + 1e-12);
  CHECK(total_volume(fine) == doctest::Approx(0.75).epsilon(1e-12));

  // clockwise input gives the same area
  Eigen::MatrixX2d cw = square.colwise().reverse();
  CHECK(total_volume(polygon_mesh(cw)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mesh size") {
  CHECK(mesh_size(uniform_box_mesh(p2(0, 0), p2(1, 1), 0.5)) == doctest::Approx(std::sqrt(2.0) / 2));
  Eigen::MatrixXd v(3, 2);
  v << 0, 0, 1, 0, 0, 1;
  Eigen::MatrixXi s(1, 3);
  s << 0, 1, 2;
  const SimplicialMesh tri(v, s);
  CHECK(mesh_size(tri) == doctest::Approx(std::sqrt(2.0)));
  CHECK(mesh_size(refine_uniform(tri)) == doctest::Approx(std::sqrt(2.0) / 2));

  const SimplicialMesh cube = uniform_box_mesh(p3(0, 0, 0), p3(1, 1, 1), 0.5);
  const SimplicialMesh fine = refine_uniform(cube);
  CHECK(fine.num_simplices() == 8 * 48);
  CHECK(total_volume(fine) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("domain point counts") {
  Eigen::MatrixXd v(3, 2);
  v << 0, 0, 1, 0, 0, 1;
  Eigen::MatrixXi s(1, 3);
  s << 0, 1, 2;
  const SimplicialMesh tri(v, s);
  CHECK(domain_points(tri, 2).size() == 6);
  CHECK(domain_points(tri, 7).size() == 36);

  Eigen::MatrixXd v3(4, 3);
  v3 << 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1;
  Eigen::MatrixXi s3(1, 4);
  s3 << 0, 1, 2, 3;
  CHECK(domain_points(SimplicialMesh(v3, s3), 2).size() == 10);

  // unique points of a uniform mesh form the (n D + 1)^2 lattice
  const SimplicialMesh m = uniform_box_mesh(p2(0, 0), p2(1, 1), 0.5);
  const UniquePointSet u = unique_domain_points(m, 2);
  CHECK(u.size() == 25);
  int boundary = 0;
  for (bool b : u.on_boundary) boundary += b;
  CHECK(boundary == 16);
  for (int i = 0; i < u.size(); ++i) {
    const Point x = u.point(i);
    const Bary b = m.barycentric(u.owner[i], x);
    CHECK(b.minCoeff() >= -1e-12);
  }
}

TEST_CASE("domain points are (sum alpha_m v_m) / D") {
  Eigen::MatrixXd v(3, 2);
  v << 0, 0, 2, 0, 0, 1;
  Eigen::MatrixXi s(1, 3);
  s << 0, 1, 2;
  const SimplicialMesh tri(v, s);
  const DomainPointSet d = domain_points(tri, 3);
  for (int i = 0; i < d.size(); ++i) {
    Point x = Point::Zero(2);
    for (int m = 0; m < 3; ++m) x += d.multi_index[i](m) * tri.vertex(tri.simplex_vertex(0, m)) / 3.0;
    CHECK((x - d.points.row(i).transpose()).norm() < 1e-14);
  }
}

TEST_CASE("point locator agrees with barycentric scan") {
  auto m = std::make_shared<const SimplicialMesh>(uniform_box_mesh(p2(0, 0), p2(1, 1), 0.25));
  const PointLocator loc(m);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    const Point x = p2(u(rng), u(rng));
    const int t = loc.locate(x);
    REQUIRE(t >= 0);
    CHECK(m->barycentric(t, x).minCoeff() >= -1e-12);
  }
  CHECK(loc.locate(p2(1.5, 0.5)) == -1);
  // a shared vertex goes to the lowest id
  const Point c = p2(0.5, 0.5);
  int lowest = -1;
  for (int t = 0; t < m->num_simplices() && lowest < 0; ++t)
    if (m->barycentric(t, c).minCoeff() >= -1e-12) lowest = t;
  CHECK(loc.locate(c) == lowest);
}

TEST_CASE("mesh text round trip") {
  const SimplicialMesh m = uniform_box_mesh(p3(0, 0, 0), p3(1, 1, 1), 0.5);
  std::stringstream io;
  write_mesh(io, m);
  const SimplicialMesh back = read_mesh(io);
  CHECK(back.num_simplices() == m.num_simplices());
  CHECK((back.vertices() - m.vertices()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.interior_faces().size() == m.interior_faces().size());

  std::stringstream bad("2 3 1\n0 0\n1 0\n0 1\n0 1 7\n");
  CHECK_THROWS_AS(read_mesh(bad), Error);
}

TEST_CASE("deduplicator merges within tolerance") {
  PointDeduplicator d(1e-12);
  CHECK(d.find_or_insert(p2(0.1, 0.2), 0) == 0);
  CHECK(d.find_or_insert(p2(0.1 + 1e-14, 0.2), 1) == 0);
  CHECK(d.find_or_insert(p2(0.1 + 1e-9, 0.2), 2) == 2);
  std::set<int> ids;
  for (int i = 0; i < 10; ++i) ids.insert(d.find_or_insert(p2(i / 3.0, 1.0 / 3.0), 10 + i));
  CHECK(ids.size() == 10);
}
