#pragma once

#include <string>

#include "hdeuler/simulator.hpp"

namespace hdeuler {

/// Directory for outputs without an explicit path: $HDEULER_OUT_DIR, else ".".
std::string default_output_dir();

/// Parses a flat `key = value` file into a validated SimulationConfig.
///
/// Keys: d, kind, r0, z0, sigma, amplitude, separation, n_particles, dt,
/// t_end, delta, output_every, envelope_constant_source, output_path.
/// Blank lines and text after '#' are ignored. Omitted keys keep the
/// SimulationConfig defaults; output_path defaults to
/// <default_output_dir()>/series.csv. Errors are ConfigError naming the key
/// ("config" for an unreadable file).
SimulationConfig parse_config(const std::string& path);

/// Same, from the file's text.
SimulationConfig parse_config_text(const std::string& text);

}  // namespace hdeuler
