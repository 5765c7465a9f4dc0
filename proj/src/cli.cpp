#include "hdeuler/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hdeuler/calibration.hpp"
#include "hdeuler/config.hpp"
#include "hdeuler/series_io.hpp"
#include "hdeuler/verification.hpp"

namespace hdeuler {

namespace {

using nlohmann::json;

Dimension checked_dimension(int d) {
  if (d < Dimension::kMin || d > Dimension::kMax) {
    throw ConfigError("d", "dimension " + std::to_string(d) + " outside the supported range 4..8");
  }
  return Dimension(d);
}

int report_result(const json& report, const std::string& path, std::ostream& out) {
  write_json(path, report);
  const bool ok = report.at("passed").get<bool>();
  for (const auto& c : report.at("checks")) {
    out << (c.at("passed").get<bool>() ? "PASS " : "FAIL ") << c.at("name").get<std::string>()
        << " value=" << c.at("value").dump() << " limit=" << c.at("limit").dump() << '\n';
  }
  out << (ok ? "all checks passed" : "some checks failed") << "; report written to " << path << '\n';
  return ok ? kExitPass : kExitCheckFailed;
}

int simulate(const std::string& config_path, int workers, std::ostream& out) {
  const SimulationConfig cfg = parse_config(config_path);
  if (workers < 1) throw ConfigError("workers", "must be >= 1");
  RunOptions options;
  options.workers = workers;
  const RunResult result = run(cfg, options);
  write_series_csv(cfg.output_path, result.records);
  const std::string sidecar = sidecar_path(cfg.output_path);
  write_json(sidecar, run_sidecar(cfg, result, cfg.output_path));
  out << "wrote " << result.records.size() << " records to " << cfg.output_path << " ("
      << result.wall_seconds << " s)\n";
  if (result.aborted) {
    out << "run aborted at t = " << result.abort_time << ": " << result.abort_reason << '\n';
    return kExitCheckFailed;
  }
  return kExitPass;
}

// Dimension and constant source recorded in a run sidecar, when present.
std::optional<json> load_sidecar(const std::string& series) {
  const std::string path = sidecar_path(series);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    return json::parse(in);
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

int envelopes(const std::string& series, std::string out_path, std::optional<int> d_flag,
              std::optional<std::string> constants, std::ostream& out) {
  const auto records = read_series_csv(series);
  if (records.empty()) throw IoError("series '" + series + "' has no records");
  const auto sidecar = load_sidecar(series);
  int d = 0;
  if (d_flag) {
    d = *d_flag;
  } else if (sidecar && sidecar->contains("config")) {
    d = sidecar->at("config").value("d", 0);
  } else {
    throw ConfigError("d", "no --d given and no sidecar next to the series");
  }
  const Dimension dim = checked_dimension(d);
  std::string source = "calibrated";
  if (constants) {
    source = *constants;
  } else if (sidecar && sidecar->contains("config")) {
    source = sidecar->at("config").value("envelope_constant_source", source);
  }
  const bool fitted = parse_envelope_constant_source(source) == EnvelopeConstantSource::fitted;
  if (out_path.empty()) {
    const std::filesystem::path p(series);
    out_path = default_output_dir() + "/" + p.stem().string() + "_envelopes.csv";
  }
  const double c_cal = calibrated_constant(dim);
  const auto cols = envelope_columns(records, dim, c_cal, fitted);
  write_text(out_path, format_envelope_csv(records, cols));
  const auto report = envelope_report(cols, dim, source, c_cal, series);
  const std::string json_path = sidecar_path(out_path);
  write_json(json_path, report);
  for (const auto& c : cols) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.quantity
        << ") min_margin=" << c.min_margin << '\n';
  }
  out << "wrote " << out_path << " and " << json_path << '\n';
  return report.at("passed").get<bool>() ? kExitPass : kExitCheckFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Axisymmetric swirl-free Euler laboratory in R^d, d = 4..8", "hdeuler"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(HDEULER_VERSION));

  int d = 4;
  std::string out_path;
  auto* vk = app.add_subcommand("verify-kernel", "Check the kernel against its analytic properties");
  vk->add_option("--d", d, "Dimension (4..8)")->required();
  vk->add_option("--out", out_path, "JSON report path");

  std::size_t sweep = 20;
  int workers = 1;
  auto* ve = app.add_subcommand("verify-estimates", "Calibration sweep and estimate checks");
  ve->add_option("--d", d, "Dimension (4..8)")->required();
  ve->add_option("--sweep", sweep, "Number of calibration family members")->check(CLI::PositiveNumber);
  ve->add_option("--out", out_path, "JSON report path");
  ve->add_option("--workers", workers, "Worker threads for velocity evaluation");

  std::string config_path;
  auto* sim = app.add_subcommand("simulate", "Run a particle simulation from a config file");
  sim->add_option("--config", config_path, "Flat key = value config file")->required();
  sim->add_option("--workers", workers, "Worker threads for velocity evaluation");

  std::string series;
  std::optional<int> env_d;
  std::optional<std::string> constants;
  auto* env = app.add_subcommand("envelopes", "Append envelope columns and flags to a series CSV");
  env->add_option("--series", series, "Simulation CSV")->required();
  env->add_option("--out", out_path, "Output CSV (a .json report is written next to it)");
  env->add_option("--d", env_d, "Dimension (default: from the run sidecar)");
  env->add_option("--constants", constants, "calibrated or fitted (default: from the sidecar)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForVersion&) {
    out << HDEULER_VERSION << '\n';
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*vk) {
      const Dimension dim = checked_dimension(d);
      if (out_path.empty()) out_path = default_output_dir() + "/kernel_d" + std::to_string(d) + ".json";
      return report_result(verify_kernel_report(dim), out_path, out);
    }
    if (*ve) {
      const Dimension dim = checked_dimension(d);
      if (workers < 1) throw ConfigError("workers", "must be >= 1");
      if (out_path.empty()) {
        out_path = default_output_dir() + "/estimates_d" + std::to_string(d) + ".json";
      }
      return report_result(verify_estimates_report(dim, sweep, workers), out_path, out);
    }
    if (*sim) return simulate(config_path, workers, out);
    if (*env) return envelopes(series, out_path, env_d, constants, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace hdeuler
