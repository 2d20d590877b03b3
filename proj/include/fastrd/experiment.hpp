#pragma once

#include "fastrd/run.hpp"

#include "json.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fastrd {

enum class ExperimentKind { Convergence, Snapshots, EpsilonSweep, ImplicitComparison, GrowthFactors };
enum class SweepAxis { Time, Space };
enum class ErrorField { U, V, P, W };
/// How the comparison sweep ties h to tau: tau/h^2 = ratio or tau/h = ratio.
enum class Coupling { TauOverH2, TauOverH };

/// Geometric family step_j = step_0 / factor^j, j = 0..levels, with a
/// self-reference at step_0 / 2^reference_levels. factor must be a power of 2.
struct ConvergenceSweep {
  SweepAxis axis = SweepAxis::Time;
  int factor = 2;
  int levels = 10;
  int reference_levels = 13;
  ErrorField field = ErrorField::U;
  bool operator==(const ConvergenceSweep&) const = default;
};

/// Semi-implicit runs at tau = run.tau / factor^j against fully implicit
/// runs on the same (tau, h) for every listed epsilon.
struct ComparisonSweep {
  int factor = 2;
  int levels = 2;
  Coupling coupling = Coupling::TauOverH2;
  double ratio = 0.05;
  ErrorField field = ErrorField::W;
  bool operator==(const ComparisonSweep&) const = default;
};

/// Random queries per limit-state case. r and r_eps are drawn log-uniformly.
struct GrowthSampling {
  int samples = 10000;
  unsigned long long seed = 1;
  double r_min = 1e-4;
  double r_max = 1e4;
  double r_eps_min = 1e-6;
  double r_eps_max = 1e6;
  double state_max = 1.0;  // upper end for v* and u*
  bool operator==(const GrowthSampling&) const = default;
};

/// Built-in checks evaluated after a run; any failure maps to exit code 3.
struct Expectations {
  std::vector<double> orders_inf;  // per table row from the second on
  std::vector<double> orders_2;
  double order_tol = 0.03;
  std::optional<double> anchor_sweep_value;
  std::optional<double> anchor_e_inf;
  double anchor_rel_tol = 0.05;
  std::optional<std::pair<double, double>> slope_range;
  bool width_strictly_decreasing = false;
  bool error_decreasing = false;
  bool bounds = false;
  bool front_advances = false;  // +x1 motion of the lambda/2 crossing
  bool initial_w_monotone = false;
  bool roots_in_unit_interval = false;
  bool operator==(const Expectations&) const = default;
};

struct ExperimentSpec {
  std::string name;
  ExperimentKind kind = ExperimentKind::Snapshots;
  RunConfig run;
  ConvergenceSweep convergence;
  ComparisonSweep comparison;
  std::vector<double> epsilons;
  GrowthSampling growth;
  Expectations expect;
  bool operator==(const ExperimentSpec&) const = default;
};

/// Raised for malformed or invalid configurations. Every entry of
/// diagnostics() names the offending key.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
  std::vector<std::string> diagnostics_;
};

std::string kind_name(ExperimentKind k);

/// Violations of the experiment's invariants, each prefixed with its key path.
std::vector<std::string> validate(const ExperimentSpec& spec);

/// Parses and validates. Throws ConfigError listing every problem found.
ExperimentSpec parse_spec(const nlohmann::json& j);
nlohmann::json serialize_spec(const ExperimentSpec& spec);

/// Reads a JSON file. Throws std::runtime_error on I/O failure and
/// ConfigError on content problems.
ExperimentSpec load_spec(const std::string& path);

/// Result of validate_config: a spec, or the reasons there is none.
struct ValidationResult {
  std::optional<ExperimentSpec> spec;
  std::vector<std::string> diagnostics;
};
ValidationResult validate_config(const std::string& path);

/// Directory holding the shipped preset files.
std::string preset_directory();
std::vector<std::string> list_presets();
std::string preset_path(const std::string& name);

struct RunRecord {
  std::string label;
  double seconds = 0.0;
  bool ok = true;
  std::string error;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunReport {
  std::vector<RunRecord> runs;
  std::vector<CheckResult> checks;
  std::vector<std::string> files;

  bool solver_failed() const;
  bool checks_failed() const;
};

struct RunOptions {
  std::string out_dir = ".";
  int threads = 0;  // 0 selects the available hardware threads
};

/// Executes every run the experiment implies on a worker pool, writes the CSV
/// outputs through a single writer and evaluates the expectations. A failed
/// run is recorded and the others continue.
RunReport run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

}  // namespace fastrd
