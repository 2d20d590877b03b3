#include "fastrd/experiment.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kSolverFailure = 2;
constexpr int kCheckFailure = 3;

struct Flags {
  std::string out_dir = ".";
  int threads = 0;
  bool quiet = false;
};

int execute(const fastrd::ExperimentSpec& spec, const Flags& flags) {
  fastrd::RunReport report;
  try {
    report = fastrd::run_experiment(spec, {flags.out_dir, flags.threads});
  } catch (const fastrd::ConfigError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "config: " << d << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  }
  for (const auto& r : report.runs) {
    if (!r.ok) std::cerr << "run failed: " << r.label << ": " << r.error << "\n";
    else if (!flags.quiet) std::printf("run %-40s %9.3f s\n", r.label.c_str(), r.seconds);
  }
  if (!flags.quiet)
    for (const auto& f : report.files) std::printf("wrote %s\n", f.c_str());
  for (const auto& c : report.checks) {
    if (!flags.quiet || !c.pass)
      std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
  }
  if (report.solver_failed()) return kSolverFailure;
  if (report.checks_failed()) return kCheckFailure;
  return kOk;
}

int load_and_run(const std::string& path, const Flags& flags) {
  fastrd::ExperimentSpec spec;
  try {
    spec = fastrd::load_spec(path);
  } catch (const fastrd::ConfigError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "config: " << d << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kConfigError;
  }
  return execute(spec, flags);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-implicit solvers for the fast reaction-diffusion system"};
  app.require_subcommand(1);

  Flags flags;
  app.add_option("--out-dir", flags.out_dir, "Directory for CSV output")->capture_default_str();
  app.add_option("--threads", flags.threads, "Worker threads (0 = available cores)")->check(CLI::NonNegativeNumber);
  app.add_flag("--quiet", flags.quiet, "Only report failures");

  std::string config;
  auto* run = app.add_subcommand("run", "Run an experiment config file");
  run->add_option("config", config, "JSON experiment config")->required();

  std::string name;
  auto* preset = app.add_subcommand("preset", "Run a shipped preset by name");
  preset->add_option("name", name, "Preset name (see list-presets)")->required();

  auto* list = app.add_subcommand("list-presets", "List shipped presets");

  auto* check = app.add_subcommand("validate", "Validate a config file without running it");
  check->add_option("config", config, "JSON experiment config")->required();

  for (auto* sub : {run, preset, list, check}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (*list) {
    for (const auto& p : fastrd::list_presets()) std::printf("%s\n", p.c_str());
    return kOk;
  }
  if (*check) {
    const auto result = [&] {
      try {
        return fastrd::validate_config(config);
      } catch (const std::exception& e) {
        return fastrd::ValidationResult{std::nullopt, {e.what()}};
      }
    }();
    if (!result.spec) {
      for (const auto& d : result.diagnostics) std::cerr << "config: " << d << "\n";
      return kConfigError;
    }
    if (!flags.quiet)
      std::printf("ok: %s (%s)\n", result.spec->name.c_str(), fastrd::kind_name(result.spec->kind).c_str());
    return kOk;
  }
  if (*preset) {
    std::string path;
    try {
      path = fastrd::preset_path(name);
    } catch (const fastrd::ConfigError& e) {
      for (const auto& d : e.diagnostics()) std::cerr << "config: " << d << "\n";
      return kConfigError;
    }
    return load_and_run(path, flags);
  }
  return load_and_run(config, flags);
}
