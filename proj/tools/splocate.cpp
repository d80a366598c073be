#include "splocate/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace splocate;

int main(int argc, char** argv) {
  CLI::App app{"Spline collocation solver for Stokes and Navier-Stokes problems"};
  app.require_subcommand(1);

  std::string preset_name, config_path, mesh_file, mu, h, degree, out_dir, dump_h, trace;
  std::optional<int> dprime, smoothness, sample_grid, grid_n, repeat;
  std::optional<double> lambda;
  bool paper_grid = false, quiet = false;

  CLI::App* run = app.add_subcommand("run", "run a preset or a config file");
  run->set_help_flag("--help", "print this help");  // --h is the mesh size
  run->add_option("preset,--preset", preset_name, "built-in preset (see list-presets)");
  run->add_option("--config", config_path, "config file (key = value sections, or JSON)");
  run->add_option("--mu", mu, "viscosity list, e.g. 1,1e-4 or mu3;mu5");
  run->add_option("--degree", degree, "spline degree list");
  run->add_option("--dprime", dprime, "collocation degree");
  run->add_option("--smoothness", smoothness, "smoothness r");
  run->add_option("--h", h, "mesh sizes, e.g. 1/2,1/4,1/8");
  run->add_option("--lambda", lambda, "boundary penalty for immersed domains");
  run->add_flag("--paper-grid", paper_grid, "evaluate errors on the 1501^2 / 101^3 grid");
  run->add_option("--grid", grid_n, "evaluation grid points per axis");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--mesh", mesh_file, "mesh file replacing the configured mesh");
  run->add_option("--dump-h", dump_h, "write the smoothness matrix (Matrix Market)");
  run->add_option("--trace", trace, "write the Newton trace as CSV");
  run->add_option("--sample-grid", sample_grid, "write solution samples on an n x n grid");
  run->add_option("--repeat", repeat, "solve repeatedly and report the median time");
  run->add_flag("-q,--quiet", quiet, "no progress lines");

  app.add_subcommand("list-problems", "print the problem catalog");
  app.add_subcommand("list-presets", "print the built-in presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list-problems")) {
      list_problems(std::cout);
      return 0;
    }
    if (app.got_subcommand("list-presets")) {
      for (const std::string& n : preset_names()) std::cout << n << "\n";
      return 0;
    }
    if (preset_name.empty() == config_path.empty()) {
      std::cerr << "error: give exactly one of a preset or --config\n";
      return 2;
    }
    ExperimentConfig c;
    if (config_path.empty()) {
      try {
        c = preset(preset_name);
      } catch (const Error& e) {
        std::cerr << "error: " << e.what() << " (see list-presets)\n";
        return 2;
      }
    } else {
      c = load_config(config_path);
    }
    // flags override the file; the merged text goes through the same parser checks
    std::string extra;
    if (!mu.empty()) extra += "mu = " + mu + "\n";
    if (!degree.empty()) extra += "degree = " + degree + "\n";
    if (!h.empty()) extra += "h = " + h + "\n";
    if (!mesh_file.empty()) extra += "mesh = file:" + mesh_file + "\n";
    if (!extra.empty()) {
      const ExperimentConfig o = parse_config("problem = " + c.problem + "\nequation = " + c.equation + "\n" + extra,
                                              "command line");
      if (!mu.empty()) {
        c.mu = o.mu;
        c.reynolds.clear();
      }
      if (!degree.empty()) c.degree = o.degree;
      if (!h.empty()) c.h = o.h;
      if (!mesh_file.empty()) c.mesh = o.mesh;
    }
    if (dprime) c.dprime = *dprime;
    if (smoothness) c.smoothness = *smoothness;
    if (lambda) c.penalty.lambda = *lambda;
    if (paper_grid) c.paper_grid = true;
    if (grid_n) c.grid_n = *grid_n;
    if (!out_dir.empty()) c.out_dir = out_dir;
    if (!dump_h.empty()) c.dump_h = dump_h;
    if (!trace.empty()) c.trace = trace;
    if (sample_grid) c.sample_grid = *sample_grid;
    if (repeat) c.repeat = *repeat;

    const std::string path = run_and_write(c, quiet ? nullptr : &std::cerr);
    std::cout << path << "\n";
    return 0;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!trace.empty()) e.trace().write_csv(std::cerr);
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
