#include "hdeuler/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace hdeuler {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw ConfigError(key, "expected a real number, got '" + v + "'");
  }
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
  return x;
}

std::size_t to_count(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < 1) throw ConfigError(key, "must be >= 1");
  return static_cast<std::size_t>(x);
}

}  // namespace

std::string default_output_dir() {
  const char* env = std::getenv("HDEULER_OUT_DIR");
  return env != nullptr && *env != '\0' ? std::string(env) : std::string(".");
}

SimulationConfig parse_config_text(const std::string& text) {
  SimulationConfig cfg;
  cfg.output_path = default_output_dir() + "/series.csv";
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config", "line " + std::to_string(number) + " is not key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
    if (value.empty()) throw ConfigError(key, "empty value");

    if (key == "d") {
      const long long d = to_integer(key, value);
      if (d < Dimension::kMin || d > Dimension::kMax) {
        throw ConfigError(key, "dimension " + value + " outside the supported range 4..8");
      }
      cfg.d = Dimension(static_cast<int>(d));
    } else if (key == "kind") {
      cfg.profile.kind = parse_profile_kind(value);
    } else if (key == "r0") {
      cfg.profile.r0 = to_real(key, value);
    } else if (key == "z0") {
      cfg.profile.z0 = to_real(key, value);
    } else if (key == "sigma") {
      cfg.profile.sigma = to_real(key, value);
    } else if (key == "amplitude") {
      cfg.profile.amplitude = to_real(key, value);
    } else if (key == "separation") {
      cfg.profile.separation = to_real(key, value);
    } else if (key == "n_particles") {
      cfg.n_particles = to_count(key, value);
    } else if (key == "dt") {
      cfg.dt = to_real(key, value);
    } else if (key == "t_end") {
      cfg.t_end = to_real(key, value);
    } else if (key == "delta") {
      cfg.delta = to_real(key, value);
    } else if (key == "output_every") {
      cfg.output_every = to_count(key, value);
    } else if (key == "envelope_constant_source") {
      cfg.envelope_constant_source = parse_envelope_constant_source(value);
    } else if (key == "output_path") {
      cfg.output_path = value;
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  cfg.validate();
  return cfg;
}

SimulationConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

}  // namespace hdeuler
