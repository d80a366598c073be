#pragma once

#include "splocate/error_eval.hpp"
#include "splocate/ipbm.hpp"
#include "splocate/navier_stokes.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace splocate {

/// Declarative description of one table: a sweep over mesh sizes, degrees and
/// viscosities (or Reynolds numbers) for one problem.
struct ExperimentConfig {
  std::string name = "experiment";
  std::string problem = "u1";
  std::string equation = "stokes";  // stokes | navier_stokes
  std::vector<std::string> mesh = {"box"};  // box | polygon:<name|path> | file:<path>
  std::vector<double> h = {0.5};
  std::vector<int> degree = {7};
  std::optional<int> dprime;  // defaults to the degree
  int smoothness = 2;
  std::optional<int> pressure_smoothness;
  std::vector<std::string> mu = {"1"};
  std::vector<double> reynolds;  // kovasznay: sets mu = 1/Re per run
  ExactParams params;

  ContinuationConfig continuation;
  std::vector<std::string> domain;  // immersed domain specs; empty: body-fitted mesh
  PenaltyConfig penalty;

  std::string solver = "spqr";  // spqr | lscg
  int grid_n = 0;
  bool paper_grid = false;
  int repeat = 1;

  std::string out_dir = ".";
  std::string dump_h;
  std::string trace;
  int sample_grid = 0;

  bool immersed() const { return !domain.empty(); }
};

/// Lists: numbers and degrees split on ',', mesh and domain specs on ';', mu
/// on ';' when present and ',' otherwise.
/// Parses "key = value" lines grouped by optional [section] headers, or a JSON
/// object when the text starts with '{'. Errors name the offending line.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Built-in presets (configs/*.cfg compiled in) and their aliases.
const std::map<std::string, std::string>& preset_sources();
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// "1/2,1/4,0.125" -> {0.5, 0.25, 0.125}.
std::vector<double> parse_number_list(const std::string& text);

struct RunRecord {
  std::string mesh;
  std::string domain;
  double h = 0.0;
  int degree = 0;
  int dprime = 0;
  std::string mu;
  double reynolds = 0.0;
  long rows = 0;
  long cols = 0;
  long rank = 0;
  int newton_steps = 0;
  bool has_exact = true;
  ErrorReport report;
  std::optional<double> rate_l2;
  std::optional<double> rate_h1;
  std::optional<double> rate_p;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;
  std::string csv;  // complete CSV text
};

/// Runs every sweep point and fills rates over consecutive mesh sizes. Side
/// files (trace, samples, H dump) are written as requested; nothing is
/// written to `out_dir` unless every run succeeds.
ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Runs and writes <out_dir>/<name>.csv atomically. Returns the CSV path.
std::string run_and_write(const ExperimentConfig& config, std::ostream* log = nullptr);

std::string experiment_csv_header();

/// Writes `content` to `path` through a temporary file and a rename.
void write_atomic(const std::string& path, const std::string& content);

void list_problems(std::ostream& out);

}  // namespace splocate
