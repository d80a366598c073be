#include "splocate/experiment.hpp"

#include <json.hpp>
#include <unsupported/Eigen/SparseExtra>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace splocate {

// Generated from configs/*.cfg at configure time.
const std::map<std::string, std::string>& builtin_preset_sources();

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  const auto slash = t.find('/');
  std::size_t used = 0;
  try {
    if (slash != std::string::npos) {
      const std::string num = trim(t.substr(0, slash)), den = trim(t.substr(slash + 1));
      const double a = std::stod(num, &used);
      if (used != num.size()) throw Error("");
      const double b = std::stod(den, &used);
      if (used != den.size() || b == 0.0) throw Error("");
      return a / b;
    }
    const double v = std::stod(t, &used);
    if (used != t.size()) throw Error("");
    return v;
  } catch (const std::exception&) {
    throw Error("not a number: '" + text + "'");
  }
}

int parse_int(const std::string& text) {
  const double v = parse_number(text);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw Error("not an integer: '" + text + "'");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw Error("not a boolean: '" + text + "'");
}

const std::set<std::string> kSections = {"experiment", "problem", "mesh",   "discretization", "viscosity",
                                          "continuation", "ipbm", "grid", "output",         "solver"};

void apply(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "name") c.name = value;
  else if (key == "problem") c.problem = value;
  else if (key == "equation") c.equation = value;
  else if (key == "mesh") c.mesh = split_list(value, ';');
  else if (key == "h") c.h = parse_number_list(value);
  else if (key == "degree") {
    c.degree.clear();
    for (const std::string& s : split_list(value)) c.degree.push_back(parse_int(s));
  } else if (key == "dprime") c.dprime = parse_int(value);
  else if (key == "smoothness") c.smoothness = parse_int(value);
  else if (key == "pressure_smoothness") c.pressure_smoothness = parse_int(value);
  else if (key == "mu") c.mu = split_list(value, value.find(';') != std::string::npos ? ';' : ',');
  else if (key == "reynolds") c.reynolds = parse_number_list(value);
  else if (key == "rayleigh") c.params.rayleigh = parse_number(value);
  else if (key == "wave_number") c.params.wave_number = parse_int(value);
  else if (key == "mu0") c.continuation.mu0 = parse_number(value);
  else if (key == "decade_factor") c.continuation.decade_factor = parse_number(value);
  else if (key == "epsilon") c.continuation.epsilon = parse_number(value);
  else if (key == "max_newton") c.continuation.max_newton = parse_int(value);
  else if (key == "max_continuation") c.continuation.max_continuation = parse_int(value);
  else if (key == "domain") c.domain = split_list(value, ';');
  else if (key == "lambda") c.penalty.lambda = parse_number(value);
  else if (key == "boundary_spacing") c.penalty.boundary_spacing = parse_number(value);
  else if (key == "w_H") c.penalty.w_H = parse_number(value);
  else if (key == "exterior_rows") c.penalty.exterior_rows = parse_bool(value);
  else if (key == "solver") c.solver = value;
  else if (key == "grid_n") c.grid_n = parse_int(value);
  else if (key == "paper_grid") c.paper_grid = parse_bool(value);
  else if (key == "repeat") c.repeat = parse_int(value);
  else if (key == "out_dir") c.out_dir = value;
  else if (key == "dump_h") c.dump_h = value;
  else if (key == "trace") c.trace = value;
  else if (key == "sample_grid") c.sample_grid = parse_int(value);
  else throw Error("unknown key '" + key + "'");
}

void check(const ExperimentConfig& c) {
  bool known = false;
  for (const CatalogEntry& e : problem_catalog()) known = known || e.id == c.problem;
  if (!known) throw Error("unknown problem '" + c.problem + "'");
  if (c.equation != "stokes" && c.equation != "navier_stokes") throw Error("equation must be stokes or navier_stokes");
  if (c.problem == "cavity" && c.equation != "navier_stokes") throw Error("the cavity is a Navier-Stokes problem");
  if (c.h.empty() || c.degree.empty() || c.mesh.empty()) throw Error("h, degree and mesh lists must not be empty");
  if (!c.domain.empty() && (c.mesh.size() != 1 || c.mesh[0] != "box")) {
    throw Error("immersed domains need a box background mesh");
  }
  for (double h : c.h) {
    if (!(h > 0)) throw Error("mesh sizes must be positive");
  }
  for (int D : c.degree) {
    if (c.smoothness >= D) throw Error("smoothness must be below the degree");
  }
  if (c.dprime && *c.dprime < 1) throw Error("dprime must be at least 1");
  if (c.mu.empty() && c.reynolds.empty()) throw Error("no viscosity given");
  if (!c.reynolds.empty() && c.problem != "kovasznay") throw Error("reynolds sweeps apply to kovasznay only");
  if (!(c.penalty.lambda > 0)) throw Error("lambda must be positive");
  if (c.solver != "spqr" && c.solver != "lscg") throw Error("solver must be spqr or lscg");
  if (c.repeat < 1) throw Error("repeat must be at least 1");
  if (c.sample_grid < 0 || c.grid_n < 0) throw Error("grid sizes must be nonnegative");
}

ExperimentConfig parse_text(const std::string& text, const std::string& source) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    // a leading ';' marks a comment line, elsewhere ';' separates list items
    std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty() || body.front() == ';') continue;
    auto where = [&] { return source + ":" + std::to_string(number) + ": "; };
    if (body.front() == '[') {
      if (body.back() != ']') throw Error(where() + "unterminated section header");
      const std::string section = trim(body.substr(1, body.size() - 2));
      if (!kSections.count(section)) throw Error(where() + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw Error(where() + "expected key = value");
    const std::string key = trim(body.substr(0, eq));
    try {
      apply(c, key, trim(body.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(where() + e.what());
    }
  }
  return c;
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  throw Error("unsupported JSON value " + v.dump());
}

std::string domain_spec(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (!v.is_object() || !v.contains("type")) throw Error("domain object needs a type");
  std::string spec = v.at("type").get<std::string>();
  std::string params;
  for (auto p = v.begin(); p != v.end(); ++p) {
    if (p.key() == "type") continue;
    if (p.key() == "path") {
      spec += ":" + p.value().get<std::string>();
      continue;
    }
    params += (params.empty() ? "" : ",") + p.key() + "=" + json_scalar(p.value());
  }
  if (!params.empty()) spec += ":" + params;
  return spec;
}

void apply_json(ExperimentConfig& c, const nlohmann::json& obj, const std::string& source, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& key = it.key();
    const nlohmann::json& v = it.value();
    const std::string field = path.empty() ? key : path + "." + key;
    try {
      if (key == "domain" && (v.is_object() || v.is_array())) {
        c.domain.clear();
        for (const auto& d : v.is_array() ? v : nlohmann::json::array({v})) c.domain.push_back(domain_spec(d));
      } else if (v.is_object()) {
        if (!path.empty() || !kSections.count(key)) throw Error("unknown section");
        apply_json(c, v, source, field);
      } else if (v.is_array()) {
        std::string joined;
        const std::string sep = key == "mu" || key == "mesh" || key == "domain" ? ";" : ",";
        for (const auto& item : v) joined += (joined.empty() ? "" : sep) + json_scalar(item);
        apply(c, key, joined);
      } else {
        apply(c, key, json_scalar(v));
      }
    } catch (const Error& e) {
      throw Error(source + ": field '" + field + "': " + e.what());
    }
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string fmt_h(double h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", h);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

MeshPtr build_mesh(const std::string& spec, const ExactSolution* ex, int dim, double h) {
  if (spec == "box") {
    Point lo = Point::Zero(dim), hi = Point::Ones(dim);
    if (ex) {
      lo = ex->domain_lo;
      hi = ex->domain_hi;
    }
    return std::make_shared<SimplicialMesh>(uniform_box_mesh(lo, hi, h));
  }
  if (spec.rfind("polygon:", 0) == 0) {
    if (dim != 2) throw Error("polygon meshes are 2D");
    const std::string what = spec.substr(8);
    Eigen::MatrixX2d loop;
    if (what == "lshape") loop = l_shape_polygon();
    else if (what == "pentagon") loop = pentagon_polygon();
    else if (what == "notched") loop = notched_square_polygon();
    else loop = read_polygon(what);
    return std::make_shared<SimplicialMesh>(polygon_mesh(loop, h));
  }
  if (spec.rfind("file:", 0) == 0) {
    auto mesh = std::make_shared<SimplicialMesh>(read_mesh_file(spec.substr(5)));
    if (mesh->dim() != dim) throw Error("mesh file dimension does not match the problem");
    return mesh;
  }
  throw Error("unknown mesh spec '" + spec + "'");
}

int problem_dim(const std::string& id) {
  for (const CatalogEntry& e : problem_catalog()) {
    if (e.id == id) return e.dim;
  }
  throw Error("unknown problem '" + id + "'");
}

struct SweepPoint {
  std::string mesh;
  std::string domain;
  int degree;
  std::string mu;
  double reynolds;
  double h;
};

std::vector<SweepPoint> sweep(const ExperimentConfig& c) {
  std::vector<SweepPoint> out;
  const std::vector<std::string> domains = c.domain.empty() ? std::vector<std::string>{""} : c.domain;
  for (const std::string& mesh : c.mesh) {
    for (const std::string& dom : domains) {
      for (int D : c.degree) {
        if (!c.reynolds.empty()) {
          for (double re : c.reynolds) {
            for (double h : c.h) out.push_back({mesh, dom, D, "", re, h});
          }
        } else {
          for (const std::string& m : c.mu) {
            for (double h : c.h) out.push_back({mesh, dom, D, m, 0.0, h});
          }
        }
      }
    }
  }
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& s : split_list(text)) out.push_back(parse_number(s));
  if (out.empty()) throw Error("empty number list");
  return out;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig c;
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(t);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(source + ": " + e.what());
    }
    apply_json(c, j, source, "");
  } else {
    c = parse_text(text, source);
  }
  try {
    check(c);
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  ExperimentConfig c = parse_config(buf.str(), path);
  return c;
}

const std::map<std::string, std::string>& preset_sources() { return builtin_preset_sources(); }

namespace {

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> a = {{"convergence-ns-u3", "table10"}};
  return a;
}

}  // namespace

ExperimentConfig preset(const std::string& name) {
  std::string key = name;
  if (auto a = aliases().find(name); a != aliases().end()) key = a->second;
  const auto& src = preset_sources();
  const auto it = src.find(key);
  if (it == src.end()) throw Error("unknown preset '" + name + "'");
  ExperimentConfig c = parse_config(it->second, "preset " + key);
  c.name = name;
  return c;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : preset_sources()) names.push_back(k);
  for (const auto& [k, v] : aliases()) names.push_back(k);
  return names;
}

std::string experiment_csv_header() {
  return "experiment,problem,equation,mesh,domain,h,degree,dprime,smoothness,mu,reynolds,rows,cols,rank,newton_steps,"
         "l2_velocity,rate_l2,h1_velocity,rate_h1,l2_pressure,rate_p,div_sup,residual_L,grid_n,points,wall_time";
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename onto '" + path + "': " + ec.message());
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* log) {
  check(config);
  const int dim = problem_dim(config.problem);
  const bool ns = config.equation == "navier_stokes";
  const bool cavity = config.problem == "cavity";

  SolverOptions options;
  if (config.solver == "lscg") options.backend = LeastSquaresBackend::Iterative;

  ExperimentResult result;
  std::string trace_csv = "run,stage,iter,nu,diff_norm,residual,seconds\n";
  std::string samples_csv;
  std::string h_dump;

  const std::vector<SweepPoint> points = sweep(config);
  for (std::size_t run = 0; run < points.size(); ++run) {
    const SweepPoint& sp = points[run];
    ExactParams params = config.params;
    if (sp.reynolds > 0) params.reynolds = sp.reynolds;
    std::optional<ExactSolution> ex;
    if (!cavity) ex = exact(config.problem, params);

    FlowProblem p;
    p.mesh = build_mesh(sp.mesh, ex ? &*ex : nullptr, dim, sp.h);
    p.degree = sp.degree;
    p.collocation_degree = config.dprime.value_or(sp.degree);
    p.smoothness = config.smoothness;
    p.pressure_smoothness = config.pressure_smoothness;
    p.viscosity = sp.reynolds > 0 ? constant_viscosity(1.0 / sp.reynolds) : parse_viscosity(sp.mu, ns);
    if (cavity) {
      p.source = [](const Point& x) { return Point::Zero(x.size()); };
      p.boundary = cavity_lid;
    } else {
      p.source = ns ? rhs_navier_stokes(*ex, p.viscosity) : rhs_stokes(*ex, p.viscosity);
      p.boundary = ex->velocity;
    }
    std::optional<ImplicitDomain> domain;
    if (!sp.domain.empty()) domain = parse_domain(sp.domain, dim);
    PointFilter filter;
    if (domain) filter = [d = *domain](const Point& x) { return d.inside(x); };

    if (run == 0 && !config.dump_h.empty()) {
      const AssemblyLayout layout = domain ? ipbm_layout(p, *domain, config.penalty) : standard_layout(p);
      const std::string tmp = config.dump_h + ".mtx.tmp";
      if (!Eigen::saveMarket(layout.velocity_smoothness, tmp)) throw Error("cannot write smoothness matrix");
      std::ifstream in(tmp);
      std::stringstream buf;
      buf << in.rdbuf();
      in.close();
      std::filesystem::remove(tmp);
      h_dump = buf.str();
    }

    FlowSolution sol;
    NewtonTrace trace;
    std::vector<double> times;
    for (int k = 0; k < config.repeat; ++k) {
      if (ns) {
        NavierStokesResult r = domain ? solve_ipbm_navier_stokes(p, *domain, config.penalty, config.continuation, options)
                                      : solve_navier_stokes(p, config.continuation, options);
        sol = std::move(r.solution);
        trace = std::move(r.trace);
      } else {
        sol = domain ? solve_ipbm(p, *domain, config.penalty, options) : solve_stokes(p, options);
      }
      times.push_back(sol.wall_time);
    }

    GridSpec grid = config.paper_grid ? GridSpec::paper(dim) : GridSpec{config.grid_n, {}, {}};
    RunRecord rec;
    rec.mesh = sp.mesh;
    rec.domain = sp.domain;
    rec.h = sp.h;
    if (sp.mesh.rfind("file:", 0) == 0) rec.h = mesh_size(*p.mesh);
    rec.degree = sp.degree;
    rec.dprime = p.collocation_degree;
    rec.mu = sp.reynolds > 0 ? p.viscosity.id() : sp.mu;
    rec.reynolds = sp.reynolds;
    rec.rows = sol.rows;
    rec.cols = sol.cols;
    rec.rank = sol.rank;
    rec.newton_steps = static_cast<int>(trace.steps.size());
    rec.has_exact = ex.has_value();
    if (ex) {
      rec.report = grid_errors(sol, *ex, grid, filter);
    } else {
      rec.report.div_sup = div_sup(sol, grid, filter);
      rec.report.grid_n = grid.resolved_n(dim);
    }
    rec.report.residual_L = residual_L(sol, p.viscosity, p.source, grid, filter, ns);
    rec.report.wall_time = median(times);

    for (const NewtonStep& s : trace.steps) {
      char line[224];
      std::snprintf(line, sizeof line, "%zu,%d,%d,%.6e,%.6e,%.6e,%.4f\n", run, s.stage, s.iteration, s.nu, s.diff_norm,
                    s.residual, s.seconds);
      trace_csv += line;
    }
    if (config.sample_grid > 0) {
      if (samples_csv.empty()) {
        samples_csv = dim == 2 ? "run,x,y,u1,u2,p\n" : "run,x,y,z,u1,u2,u3,p\n";
      }
      const double shift = sol.gauge_shift;
      for_each_grid_point(sol, GridSpec{config.sample_grid, {}, {}}, filter, false,
                          [&](const Point& x, const FieldSample& s) {
                            std::string line = std::to_string(run);
                            char buf[40];
                            for (int k = 0; k < dim; ++k) {
                              std::snprintf(buf, sizeof buf, ",%.9g", x(k));
                              line += buf;
                            }
                            for (int k = 0; k < dim; ++k) {
                              std::snprintf(buf, sizeof buf, ",%.9e", s.u(k));
                              line += buf;
                            }
                            std::snprintf(buf, sizeof buf, ",%.9e\n", s.p + shift);
                            samples_csv += line + buf;
                          });
    }
    if (log) {
      char line[256];
      std::snprintf(line, sizeof line, "[%s] h=%s D=%d mu=%s: l2=%.3e h1=%.3e p=%.3e div=%.3e (%.2fs)\n",
                    config.name.c_str(), fmt_h(rec.h).c_str(), rec.degree, rec.mu.c_str(), rec.report.l2_velocity,
                    rec.report.h1_velocity, rec.report.l2_pressure, rec.report.div_sup, rec.report.wall_time);
      *log << line << std::flush;
    }
    result.runs.push_back(std::move(rec));
  }

  // rates over consecutive mesh sizes within each (degree, viscosity) group
  const std::size_t nh = config.h.size();
  if (nh > 1) {
    for (std::size_t g = 0; g < result.runs.size(); g += nh) {
      std::vector<double> hs, l2, h1, lp;
      for (std::size_t j = g; j < g + nh; ++j) {
        hs.push_back(result.runs[j].h);
        l2.push_back(result.runs[j].report.l2_velocity);
        h1.push_back(result.runs[j].report.h1_velocity);
        lp.push_back(result.runs[j].report.l2_pressure);
      }
      if (!result.runs[g].has_exact) continue;
      const auto r2 = convergence_rates(l2, hs), r1 = convergence_rates(h1, hs), rp = convergence_rates(lp, hs);
      // rate j belongs to the finer mesh of the pair
      for (std::size_t j = 0; j + 1 < nh; ++j) {
        result.runs[g + j + 1].rate_l2 = r2[j];
        result.runs[g + j + 1].rate_h1 = r1[j];
        result.runs[g + j + 1].rate_p = rp[j];
      }
    }
  }

  std::string csv = experiment_csv_header() + "\n";
  for (const RunRecord& r : result.runs) {
    const ErrorReport& e = r.report;
    std::string row = csv_field(config.name) + "," + config.problem + "," + config.equation + "," +
                      csv_field(r.mesh) + "," + csv_field(r.domain) + "," + fmt_h(r.h) + "," +
                      std::to_string(r.degree) + "," + std::to_string(r.dprime) + "," +
                      std::to_string(config.smoothness) + "," + csv_field(r.mu) + "," +
                      (r.reynolds > 0 ? fmt_h(r.reynolds) : "") + "," + std::to_string(r.rows) + "," +
                      std::to_string(r.cols) + "," + std::to_string(r.rank) + "," + std::to_string(r.newton_steps) +
                      ",";
    if (r.has_exact) {
      row += fmt(e.l2_velocity) + "," + fmt_opt(r.rate_l2) + "," + fmt(e.h1_velocity) + "," + fmt_opt(r.rate_h1) +
             "," + fmt(e.l2_pressure) + "," + fmt_opt(r.rate_p) + ",";
    } else {
      row += ",,,,,,";
    }
    row += fmt(e.div_sup) + "," + fmt(e.residual_L) + "," + std::to_string(e.grid_n) + "," +
           std::to_string(e.points) + "," + fmt(e.wall_time) + "\n";
    csv += row;
  }
  result.csv = std::move(csv);

  // side files only after every run succeeded
  if (!config.trace.empty()) write_atomic(config.trace, trace_csv);
  if (!config.dump_h.empty()) write_atomic(config.dump_h, h_dump);
  if (config.sample_grid > 0) {
    write_atomic((std::filesystem::path(config.out_dir) / (config.name + "_samples.csv")).string(), samples_csv);
  }
  return result;
}

std::string run_and_write(const ExperimentConfig& config, std::ostream* log) {
  ExperimentResult r = run_experiment(config, log);
  const std::string path = (std::filesystem::path(config.out_dir) / (config.name + ".csv")).string();
  write_atomic(path, r.csv);
  return path;
}

void list_problems(std::ostream& out) {
  out << "problems:\n";
  char line[256];
  for (const CatalogEntry& e : problem_catalog()) {
    std::snprintf(line, sizeof line, "  %-10s %dD  %-26s %-20s %s\n", e.id.c_str(), e.dim, e.domain.c_str(),
                  e.parameters.c_str(), e.description.c_str());
    out << line;
  }
  out << "viscosities:\n  <number> | const:<number> | mu1 ... mu9 [:nu_min=,nu_max=,kappa=,r=]\n";
  out << "immersed domains:\n  disk | ellipse | flower | rounded_square | polygon:<file> | full\n";
}

}  // namespace splocate
