#include "hdeuler/series_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace hdeuler {

namespace {

using Field = double DiagnosticsRecord::*;

const std::array<Field, 14> kFields = {
    &DiagnosticsRecord::t,          &DiagnosticsRecord::omega_sup,
    &DiagnosticsRecord::ur_sup,     &DiagnosticsRecord::S,
    &DiagnosticsRecord::R,          &DiagnosticsRecord::xi_l1,
    &DiagnosticsRecord::xi_l2,      &DiagnosticsRecord::xi_linf,
    &DiagnosticsRecord::r_omega_l1, &DiagnosticsRecord::rd2_omega_l1,
    &DiagnosticsRecord::omega_over_rd2_l1, &DiagnosticsRecord::angular_impulse,
    &DiagnosticsRecord::fs_product, &DiagnosticsRecord::distortion,
};

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void append_row(std::string& out, const DiagnosticsRecord& rec) {
  for (std::size_t k = 0; k < kFields.size(); ++k) {
    if (k > 0) out += ',';
    append_number(out, rec.*kFields[k]);
  }
}

std::string header() {
  std::string h;
  for (const auto& c : series_columns()) {
    if (!h.empty()) h += ',';
    h += c;
  }
  return h;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

const std::vector<std::string>& series_columns() {
  static const std::vector<std::string> cols = {
      "t",     "omega_sup", "ur_sup", "S",          "R",            "xi_l1",
      "xi_l2", "xi_linf",   "r_omega_l1", "rd2_omega_l1", "omega_over_rd2_l1",
      "angular_impulse", "fs_product", "distortion"};
  return cols;
}

std::string format_series_csv(std::span<const DiagnosticsRecord> records) {
  std::string out = header() + '\n';
  for (const auto& rec : records) {
    append_row(out, rec);
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

void write_series_csv(const std::string& path, std::span<const DiagnosticsRecord> records) {
  write_text(path, format_series_csv(records));
}

std::vector<DiagnosticsRecord> read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read series '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("series '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto names = split(line);
  std::map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < names.size(); ++i) where[names[i]] = i;
  std::array<std::size_t, 14> index{};
  for (std::size_t k = 0; k < kFields.size(); ++k) {
    const auto it = where.find(series_columns()[k]);
    if (it == where.end()) {
      throw IoError("series '" + path + "' is missing column '" + series_columns()[k] + "'");
    }
    index[k] = it->second;
  }
  std::vector<DiagnosticsRecord> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != names.size()) {
      throw IoError("series '" + path + "' row " + std::to_string(row) + " has " +
                    std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(names.size()));
    }
    DiagnosticsRecord rec;
    for (std::size_t k = 0; k < kFields.size(); ++k) {
      const auto& c = cells[index[k]];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size()) {
        throw IoError("series '" + path + "' row " + std::to_string(row) + ": bad value '" + c +
                      "' in column '" + series_columns()[k] + "'");
      }
      rec.*kFields[k] = v;
    }
    out.push_back(rec);
  }
  return out;
}

std::string sidecar_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  if (p.extension() == ".csv") return p.replace_extension(".json").string();
  return csv_path + ".json";
}

nlohmann::json config_to_json(const SimulationConfig& cfg) {
  return {
      {"d", cfg.d.value()},
      {"kind", std::string(to_string(cfg.profile.kind))},
      {"r0", cfg.profile.r0},
      {"z0", cfg.profile.z0},
      {"sigma", cfg.profile.sigma},
      {"amplitude", cfg.profile.amplitude},
      {"separation", cfg.profile.effective_separation()},
      {"n_particles", cfg.n_particles},
      {"dt", cfg.dt},
      {"t_end", cfg.t_end},
      {"delta", cfg.delta},
      {"output_every", cfg.output_every},
      {"envelope_constant_source", to_string(cfg.envelope_constant_source)},
      {"output_path", cfg.output_path},
  };
}

nlohmann::json run_sidecar(const SimulationConfig& cfg, const RunResult& result,
                           const std::string& series_path) {
  return {
      {"schema", "hdeuler.run/1"},
      {"version", HDEULER_VERSION},
      {"config", config_to_json(cfg)},
      {"series", series_path},
      {"records", result.records.size()},
      {"particles", result.final_state.size()},
      {"steps", result.steps},
      {"status", result.aborted ? "aborted" : "completed"},
      {"abort_reason", result.abort_reason},
      {"abort_time", result.abort_time},
      {"timing", {{"wall_seconds", result.wall_seconds}}},
  };
}

nlohmann::json envelope_report(std::span<const EnvelopeColumn> columns, Dimension d,
                               const std::string& constant_source, double c_cal,
                               const std::string& series_path) {
  nlohmann::json envs = nlohmann::json::array();
  bool all = true;
  for (const auto& c : columns) {
    envs.push_back({{"name", c.name},
                    {"quantity", c.quantity},
                    {"kind", c.kind},
                    {"constants", c.constants},
                    {"passed", c.passed},
                    {"min_margin", c.min_margin}});
    all = all && c.passed;
  }
  return {{"schema", "hdeuler.envelopes/1"},
          {"version", HDEULER_VERSION},
          {"d", d.value()},
          {"constant_source", constant_source},
          {"c_cal", c_cal},
          {"series", series_path},
          {"passed", all},
          {"envelopes", envs}};
}

std::string format_envelope_csv(std::span<const DiagnosticsRecord> records,
                                std::span<const EnvelopeColumn> columns) {
  std::string out = header();
  for (const auto& c : columns) out += ',' + c.name + ',' + c.name + "_pass";
  out += '\n';
  for (std::size_t i = 0; i < records.size(); ++i) {
    append_row(out, records[i]);
    for (const auto& c : columns) {
      out += ',';
      append_number(out, c.bound[i]);
      out += c.pass[i] ? ",1" : ",0";
    }
    out += '\n';
  }
  return out;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  write_text(path, doc.dump(2) + '\n');
}

}  // namespace hdeuler
