#pragma once

// File formats shared with downstream tooling: the diagnostics CSV, its
// JSON sidecar and the envelope report.

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hdeuler/simulator.hpp"

namespace hdeuler {

/// Header of every series CSV, in order.
const std::vector<std::string>& series_columns();

/// Values printed with %.17g so the file round-trips exactly.
std::string format_series_csv(std::span<const DiagnosticsRecord> records);
void write_series_csv(const std::string& path, std::span<const DiagnosticsRecord> records);

/// Throws IoError for an unreadable file, a missing column (named in the
/// message) or a malformed value. Extra columns are ignored.
std::vector<DiagnosticsRecord> read_series_csv(const std::string& path);

/// `<stem>.json` next to a `<stem>.csv` (or `<path>.json` otherwise).
std::string sidecar_path(const std::string& csv_path);

nlohmann::json config_to_json(const SimulationConfig& cfg);

/// Sidecar schema "hdeuler.run/1":
///   {schema, version, config{...}, series, records, steps,
///    status: "completed" | "aborted", abort_reason, abort_time,
///    timing{wall_seconds}}
nlohmann::json run_sidecar(const SimulationConfig& cfg, const RunResult& result,
                           const std::string& series_path);

/// Envelope report schema "hdeuler.envelopes/1":
///   {schema, version, d, constant_source, c_cal, series, passed,
///    envelopes: [{name, quantity, kind, constants{...}, passed, min_margin}]}
nlohmann::json envelope_report(std::span<const EnvelopeColumn> columns, Dimension d,
                               const std::string& constant_source, double c_cal,
                               const std::string& series_path);

/// Series CSV with, per envelope, a bound column `<name>` and a 0/1 flag
/// column `<name>_pass` appended.
std::string format_envelope_csv(std::span<const DiagnosticsRecord> records,
                                std::span<const EnvelopeColumn> columns);

void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const nlohmann::json& doc);

}  // namespace hdeuler
