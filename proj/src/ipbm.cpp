#include "splocate/ipbm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace splocate {

namespace {

constexpr double kPi = std::numbers::pi;

Point vec2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

ImplicitDomain with_box(ImplicitDomain d, const Point& center, double rx, double ry) {
  d.lo = vec2(center(0) - rx, center(1) - ry);
  d.hi = vec2(center(0) + rx, center(1) + ry);
  return d;
}

// Distance from x to segment ab.
double segment_distance(const Eigen::Vector2d& x, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double t = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("domain parameter '" + item + "' is not key=value");
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error("domain parameter '" + item + "' has a non-numeric value");
    }
  }
  return out;
}

}  // namespace

ImplicitDomain disk_domain(const Point& center, double radius) {
  if (!(radius > 0)) throw Error("disk radius must be positive");
  ImplicitDomain d;
  d.type = "disk";
  d.phi = [center, radius](const Point& x) { return (x - center).norm() - radius; };
  d.boundary = [center, radius](double t) {
    return vec2(center(0) + radius * std::cos(2 * kPi * t), center(1) + radius * std::sin(2 * kPi * t));
  };
  return with_box(d, center, radius, radius);
}

ImplicitDomain ellipse_domain(const Point& center, double a, double b) {
  if (!(a > 0 && b > 0)) throw Error("ellipse semi-axes must be positive");
  ImplicitDomain d;
  d.type = "ellipse";
  d.phi = [center, a, b](const Point& x) {
    const double u = (x(0) - center(0)) / a, v = (x(1) - center(1)) / b;
    return u * u + v * v - 1.0;
  };
  d.boundary = [center, a, b](double t) {
    return vec2(center(0) + a * std::cos(2 * kPi * t), center(1) + b * std::sin(2 * kPi * t));
  };
  return with_box(d, center, a, b);
}

ImplicitDomain flower_domain(const Point& center, double r0, double amplitude, int lobes) {
  if (!(r0 > std::abs(amplitude))) throw Error("flower radius must exceed its amplitude");
  ImplicitDomain d;
  d.type = "flower";
  d.phi = [=](const Point& x) {
    const double dx = x(0) - center(0), dy = x(1) - center(1);
    return std::hypot(dx, dy) - (r0 + amplitude * std::cos(lobes * std::atan2(dy, dx)));
  };
  d.boundary = [=](double t) {
    const double th = 2 * kPi * t;
    const double r = r0 + amplitude * std::cos(lobes * th);
    return vec2(center(0) + r * std::cos(th), center(1) + r * std::sin(th));
  };
  const double R = r0 + std::abs(amplitude);
  return with_box(d, center, R, R);
}

ImplicitDomain rounded_square_domain(const Point& center, double half_width, double corner_radius) {
  if (!(half_width > 0 && corner_radius > 0 && corner_radius < half_width)) {
    throw Error("rounded square needs 0 < corner radius < half width");
  }
  ImplicitDomain d;
  d.type = "rounded_square";
  const double inner = half_width - corner_radius;
  d.phi = [=](const Point& x) {
    const double qx = std::abs(x(0) - center(0)) - inner, qy = std::abs(x(1) - center(1)) - inner;
    return std::hypot(std::max(qx, 0.0), std::max(qy, 0.0)) + std::min(std::max(qx, qy), 0.0) - corner_radius;
  };
  // Four straight sides of length 2*inner and four quarter arcs, walked CCW.
  const double side = 2 * inner, arc = 0.5 * kPi * corner_radius;
  const double total = 4 * side + 4 * arc;
  d.boundary = [=](double t) {
    double s = std::fmod(t, 1.0) * total;
    if (s < 0) s += total;
    // Right side from (inner + rc, -inner) upward, then the upper right arc;
    // the other quarters are rotations of that piece.
    const int quarter = std::min(3, static_cast<int>(s / (side + arc)));
    s -= quarter * (side + arc);
    double px, py;
    if (s < side) {
      px = inner + corner_radius;
      py = -inner + s;
    } else {
      const double th = (s - side) / corner_radius;
      px = inner + corner_radius * std::cos(th);
      py = inner + corner_radius * std::sin(th);
    }
    const double ang = quarter * 0.5 * kPi;
    const double c = std::cos(ang), sn = std::sin(ang);
    return vec2(center(0) + c * px - sn * py, center(1) + sn * px + c * py);
  };
  return with_box(d, center, half_width, half_width);
}

ImplicitDomain polygon_domain(const Eigen::MatrixX2d& loop) {
  const int n = static_cast<int>(loop.rows());
  if (n < 3) throw Error("polygon domain needs at least 3 vertices");
  ImplicitDomain d;
  d.type = "polygon";
  std::vector<double> cum(n + 1, 0.0);
  for (int i = 0; i < n; ++i) cum[i + 1] = cum[i] + (loop.row((i + 1) % n) - loop.row(i)).norm();
  if (!(cum[n] > 0)) throw Error("degenerate polygon");
  d.phi = [loop, n](const Point& x) {
    const Eigen::Vector2d p(x(0), x(1));
    double dist = std::numeric_limits<double>::infinity();
    bool inside = false;
    for (int i = 0, j = n - 1; i < n; j = i++) {
      const Eigen::Vector2d a = loop.row(j).transpose(), b = loop.row(i).transpose();
      dist = std::min(dist, segment_distance(p, a, b));
      if ((b(1) > p(1)) != (a(1) > p(1)) && p(0) < (a(0) - b(0)) * (p(1) - b(1)) / (a(1) - b(1)) + b(0)) {
        inside = !inside;
      }
    }
    return inside ? -dist : dist;
  };
  d.boundary = [loop, n, cum](double t) {
    double s = std::fmod(t, 1.0) * cum[n];
    if (s < 0) s += cum[n];
    const int i = std::min(n - 1, static_cast<int>(std::upper_bound(cum.begin(), cum.end(), s) - cum.begin()) - 1);
    const double w = (s - cum[i]) / (cum[i + 1] - cum[i]);
    const Eigen::RowVector2d p = (1 - w) * loop.row(i) + w * loop.row((i + 1) % n);
    return vec2(p(0), p(1));
  };
  d.lo = vec2(loop.col(0).minCoeff(), loop.col(1).minCoeff());
  d.hi = vec2(loop.col(0).maxCoeff(), loop.col(1).maxCoeff());
  return d;
}

ImplicitDomain full_mesh_domain(int dim) {
  ImplicitDomain d;
  d.type = "full";
  d.phi = [](const Point&) { return -1.0; };
  d.full_mesh = true;
  d.lo = Point::Constant(dim, -std::numeric_limits<double>::infinity());
  d.hi = Point::Constant(dim, std::numeric_limits<double>::infinity());
  return d;
}

ImplicitDomain parse_domain(const std::string& spec, int dim) {
  const auto colon = spec.find(':');
  const std::string type = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (type == "full") return full_mesh_domain(dim);
  if (dim != 2) throw Error("curved immersed domains are 2D only");
  if (type == "polygon") {
    if (rest.empty()) throw Error("polygon domain needs a file path");
    return polygon_domain(read_polygon(rest));
  }
  auto p = parse_params(rest);
  auto get = [&](const char* key, double fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    const double v = it->second;
    p.erase(it);
    return v;
  };
  const Point c = vec2(get("cx", 0.5), get("cy", 0.5));
  ImplicitDomain d;
  if (type == "disk") {
    d = disk_domain(c, get("r", 0.4));
  } else if (type == "ellipse") {
    const double a = get("a", 0.4);
    d = ellipse_domain(c, a, get("b", 0.25));
  } else if (type == "flower") {
    const double r0 = get("r0", 0.35), amp = get("amp", 0.1);
    d = flower_domain(c, r0, amp, static_cast<int>(get("k", 5)));
  } else if (type == "rounded_square") {
    const double half = get("half", 0.35);
    d = rounded_square_domain(c, half, get("radius", 0.1));
  } else {
    throw Error("unknown domain type '" + type + "'");
  }
  if (!p.empty()) throw Error("unknown parameter '" + p.begin()->first + "' for domain " + type);
  return d;
}

namespace {

// Cumulative chord length of a fine polyline through the boundary curve.
struct ArcTable {
  std::vector<double> t;
  std::vector<double> s;
};

ArcTable arc_table(const ImplicitDomain& domain) {
  if (!domain.boundary) throw Error("domain has no boundary parameterization");
  const int m = 20000;
  ArcTable a;
  a.t.resize(m + 1);
  a.s.resize(m + 1);
  Point prev = domain.boundary(0.0);
  a.s[0] = 0.0;
  for (int i = 1; i <= m; ++i) {
    a.t[i] = static_cast<double>(i) / m;
    const Point cur = domain.boundary(a.t[i]);
    a.s[i] = a.s[i - 1] + (cur - prev).norm();
    prev = cur;
  }
  if (!(a.s[m] > 0)) throw Error("degenerate boundary parameterization");
  return a;
}

}  // namespace

double boundary_length(const ImplicitDomain& domain) { return arc_table(domain).s.back(); }

Eigen::MatrixXd sample_boundary(const ImplicitDomain& domain, double spacing) {
  if (!(spacing > 0)) throw Error("boundary spacing must be positive");
  const ArcTable a = arc_table(domain);
  const double length = a.s.back();
  const int count = std::max(3, static_cast<int>(std::ceil(length / spacing - 1e-9)));
  Eigen::MatrixXd out(count, 2);
  for (int i = 0; i < count; ++i) {
    const double target = length * i / count;
    const auto it = std::upper_bound(a.s.begin(), a.s.end(), target);
    const std::size_t k = std::min<std::size_t>(a.s.size() - 1, std::max<std::size_t>(1, it - a.s.begin()));
    const double w = (target - a.s[k - 1]) / (a.s[k] - a.s[k - 1]);
    const double t = a.t[k - 1] + w * (a.t[k] - a.t[k - 1]);
    out.row(i) = domain.boundary(t).transpose();
  }
  return out;
}

Classification classify_collocation(const SimplicialMesh& mesh, int collocation_degree, const ImplicitDomain& domain,
                                    const std::vector<int>& extra_active) {
  if (!domain.phi) throw Error("domain has no level-set function");
  const UniquePointSet pts = unique_domain_points(mesh, collocation_degree);
  Classification c;
  c.active.assign(mesh.num_simplices(), false);
  std::vector<int> rows;
  for (int i = 0; i < pts.size(); ++i) {
    if (!pts.on_boundary[i] && domain.inside(pts.point(i))) rows.push_back(i);
  }
  c.interior.points.resize(static_cast<int>(rows.size()), mesh.dim());
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    c.interior.points.row(r) = pts.points.row(rows[r]);
    c.interior.owner.push_back(pts.owner[rows[r]]);
  }
  // A simplex is active when phi <= 0 at any of its vertices or domain points.
  const DomainPointSet all = domain_points(mesh, std::max(collocation_degree, 1));
  for (int i = 0; i < all.size(); ++i) {
    if (!c.active[all.owner[i]] && domain.inside(all.points.row(i).transpose())) c.active[all.owner[i]] = true;
  }
  // a curve passing through a simplex between its domain points still counts
  if (domain.boundary && !domain.full_mesh) {
    const Eigen::MatrixXd curve = sample_boundary(domain, mesh_size(mesh) / (4.0 * std::max(collocation_degree, 1)));
    for (Eigen::Index i = 0; i < curve.rows(); ++i) {
      const int t = locate_linear(mesh, curve.row(i).transpose());
      if (t >= 0) c.active[t] = true;
    }
  }
  for (int t : extra_active) c.active.at(t) = true;
  c.active_count = static_cast<int>(std::count(c.active.begin(), c.active.end(), true));
  return c;
}

CollocationPoints active_collocation(const SimplicialMesh& mesh, int collocation_degree,
                                     const std::vector<bool>& active) {
  const UniquePointSet pts = unique_domain_points(mesh, collocation_degree);
  // Merged points keep the lowest-id owner; any active copy qualifies.
  const DomainPointSet all = domain_points(mesh, collocation_degree);
  PointDeduplicator dedup;
  for (int i = 0; i < pts.size(); ++i) dedup.find_or_insert(pts.point(i), i);
  std::vector<int> owner(pts.size(), -1);
  for (int i = 0; i < all.size(); ++i) {
    if (!active[all.owner[i]]) continue;
    const int u = dedup.find_or_insert(all.points.row(i).transpose(), -1);
    if (u < 0) throw Error("domain point missing from the unique set");
    if (owner[u] < 0 || all.owner[i] < owner[u]) owner[u] = all.owner[i];
  }
  CollocationPoints out;
  std::vector<int> rows;
  for (int i = 0; i < pts.size(); ++i) {
    if (owner[i] >= 0 && !pts.on_boundary[i]) rows.push_back(i);
  }
  out.points.resize(static_cast<int>(rows.size()), mesh.dim());
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    out.points.row(r) = pts.points.row(rows[r]);
    out.owner.push_back(owner[rows[r]]);
  }
  return out;
}

AssemblyLayout ipbm_layout(const FlowProblem& problem, const ImplicitDomain& domain, const PenaltyConfig& config) {
  validate(problem);
  if (!(config.lambda > 0)) throw Error("penalty lambda must be positive");
  if (!(config.w_H > 0)) throw Error("smoothness weight must be positive");
  const SimplicialMesh& mesh = *problem.mesh;
  const int d = mesh.dim();
  if (domain.full_mesh) {
    AssemblyLayout layout = standard_layout(problem);
    layout.boundary_scale = std::sqrt(config.lambda);
    return layout;
  }
  if (d != 2) throw Error("curved immersed domains are 2D only");
  const Point mlo = mesh.lower_corner(), mhi = mesh.upper_corner();
  for (int k = 0; k < d; ++k) {
    if (domain.lo(k) < mlo(k) - 1e-12 || domain.hi(k) > mhi(k) + 1e-12) {
      throw Error("immersed domain extends outside the background mesh");
    }
  }
  const double spacing = config.boundary_spacing > 0 ? config.boundary_spacing : mesh_size(mesh) / problem.degree;
  const Eigen::MatrixXd eta = sample_boundary(domain, spacing);

  const PointLocator locator(problem.mesh);
  std::vector<int> eta_owner(eta.rows());
  for (int i = 0; i < eta.rows(); ++i) {
    eta_owner[i] = locator.locate(eta.row(i).transpose());
    if (eta_owner[i] < 0) throw Error("boundary sample lies outside the background mesh");
  }
  const Classification cls = classify_collocation(mesh, problem.collocation_degree, domain, eta_owner);
  if (cls.interior.size() == 0) throw Error("no collocation points inside the immersed domain");

  AssemblyLayout layout;
  layout.interior = config.exterior_rows ? active_collocation(mesh, problem.collocation_degree, cls.active)
                                         : cls.interior;
  layout.active = cls.active;
  layout.boundary_scale = std::sqrt(config.lambda);
  const int nb = basis_size(problem.degree, d);
  std::vector<Triplet> trip;
  layout.boundary_data.resize(eta.rows(), d);
  for (int i = 0; i < eta.rows(); ++i) {
    const Point x = eta.row(i).transpose();
    const LocalBasis lb = local_basis(mesh, problem.degree, eta_owner[i], x, kValues);
    for (int j = 0; j < nb; ++j) {
      if (lb.value(j) != 0.0) trip.emplace_back(i, eta_owner[i] * nb + j, lb.value(j));
    }
    layout.boundary_data.row(i) = problem.boundary(x).transpose();
  }
  layout.boundary_values.resize(eta.rows(), problem.field_size());
  layout.boundary_values.setFromTriplets(trip.begin(), trip.end());
  layout.velocity_smoothness = smoothness_matrix(mesh, problem.degree, problem.smoothness, cls.active).H;
  layout.pressure_smoothness = problem.pressure_r() == problem.smoothness
                                   ? layout.velocity_smoothness
                                   : smoothness_matrix(mesh, problem.degree, problem.pressure_r(), cls.active).H;
  return layout;
}

FlowSolution solve_ipbm(const FlowProblem& problem, const ImplicitDomain& domain, const PenaltyConfig& config,
                        const SolverOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const AssemblyLayout layout = ipbm_layout(problem, domain, config);
  const CollocationSystem sys = assemble_system(problem, layout, problem.viscosity);
  SolverOptions opts = options;
  opts.weights.smoothness *= config.w_H;
  const LeastSquaresResult ls = solve_least_squares(sys, opts);
  if (!ls.converged) throw Error("least squares solver did not converge");
  FlowSolution s = make_solution(problem, ls.x);
  s.residual_norm = ls.residual_norm;
  s.rank = ls.rank;
  s.rows = sys.rows();
  s.cols = sys.cols();
  s.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

NavierStokesResult solve_ipbm_navier_stokes(const FlowProblem& problem, const ImplicitDomain& domain,
                                            const PenaltyConfig& config, const ContinuationConfig& continuation,
                                            SolverOptions options) {
  const AssemblyLayout layout = ipbm_layout(problem, domain, config);
  options.weights.smoothness *= config.w_H;
  return solve_navier_stokes(problem, layout, continuation, options);
}

}  // namespace splocate
