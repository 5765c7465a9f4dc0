#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hdeuler/config.hpp"
#include "hdeuler/series_io.hpp"

using namespace hdeuler;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hdeuler_test_io";
  fs::create_directories(dir);
  return dir / name;
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::vector<DiagnosticsRecord> some_records() {
  std::vector<DiagnosticsRecord> rs(3);
  for (int i = 0; i < 3; ++i) {
    rs[i].t = 0.1 * i;
    rs[i].omega_sup = 1.0 / 3.0 + i;
    rs[i].ur_sup = 0.123456789012345678 * (i + 1);
    rs[i].S = 1.4;
    rs[i].R = 1.0 + 1e-17 * i;
    rs[i].angular_impulse = -2.5e-300;
    rs[i].fs_product = 3.0e12;
    rs[i].xi_l1 = rs[i].xi_linf = rs[i].rd2_omega_l1 = rs[i].r_omega_l1 = 1.0;
  }
  return rs;
}

}  // namespace

TEST_CASE("series CSV header") {
  const auto& cols = series_columns();
  REQUIRE(cols.size() >= 9);
  CHECK(cols[0] == "t");
  for (const char* c : {"omega_sup", "ur_sup", "S", "R", "xi_l1", "xi_l2", "xi_linf", "r_omega_l1",
                        "rd2_omega_l1", "omega_over_rd2_l1", "angular_impulse", "fs_product"}) {
    CHECK(std::find(cols.begin(), cols.end(), c) != cols.end());
  }
  const auto text = format_series_csv(some_records());
  CHECK(text.substr(0, 2) == "t,");
}

TEST_CASE("series CSV round-trips exactly") {
  const auto rs = some_records();
  const auto path = scratch("roundtrip.csv").string();
  write_series_csv(path, rs);
  const auto back = read_series_csv(path);
  REQUIRE(back.size() == rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    CHECK(back[i].t == rs[i].t);
    CHECK(back[i].omega_sup == rs[i].omega_sup);
    CHECK(back[i].ur_sup == rs[i].ur_sup);
    CHECK(back[i].R == rs[i].R);
    CHECK(back[i].angular_impulse == rs[i].angular_impulse);
    CHECK(back[i].fs_product == rs[i].fs_product);
  }
  CHECK(format_series_csv(back) == format_series_csv(rs));
}

TEST_CASE("reading names a missing column") {
  const auto path = scratch("missing.csv");
  put(path, "t,omega_sup\n0,1\n");
  try {
    read_series_csv(path.string());
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("ur_sup") != std::string::npos);
  }
  CHECK_THROWS_AS(read_series_csv(scratch("absent.csv").string()), IoError);
  auto text = format_series_csv(some_records());
  text += "1,x\n";
  put(scratch("bad.csv"), text);
  CHECK_THROWS_AS(read_series_csv(scratch("bad.csv").string()), IoError);
}

TEST_CASE("sidecar naming") {
  CHECK(sidecar_path("out/series.csv") == "out/series.json");
  CHECK(sidecar_path("run") == "run.json");
}

TEST_CASE("sidecar and envelope report schemas") {
  SimulationConfig cfg;
  cfg.output_path = "x.csv";
  RunResult r;
  r.records = some_records();
  const auto doc = run_sidecar(cfg, r, "x.csv");
  CHECK(doc.at("schema") == "hdeuler.run/1");
  CHECK(doc.at("status") == "completed");
  CHECK(doc.at("config").at("d") == 4);
  CHECK(doc.at("config").at("envelope_constant_source") == "calibrated");
  const auto cols = envelope_columns(r.records, Dimension(4), 0.04, false);
  const auto rep = envelope_report(cols, Dimension(4), "calibrated", 0.04, "x.csv");
  CHECK(rep.at("schema") == "hdeuler.envelopes/1");
  CHECK(rep.at("envelopes").size() == cols.size());
  const auto csv = format_envelope_csv(r.records, cols);
  CHECK(csv.find(",thm1_omega,thm1_omega_pass") != std::string::npos);
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config_text(
      "# ring in five dimensions\n"
      "d = 5\n"
      "kind = ring_pair\n"
      "sigma = 0.08   # narrow\n"
      "n_particles = 2048\n"
      "t_end = 1.5\n"
      "envelope_constant_source = fitted\n"
      "output_path = runs/a.csv\n");
  CHECK(cfg.d.value() == 5);
  CHECK(cfg.profile.kind == ProfileKind::ring_pair);
  CHECK(cfg.profile.sigma == 0.08);
  CHECK(cfg.n_particles == 2048);
  CHECK(cfg.t_end == 1.5);
  CHECK(cfg.dt == 0.01);
  CHECK(cfg.envelope_constant_source == EnvelopeConstantSource::fitted);
  CHECK(cfg.output_path == "runs/a.csv");
  CHECK(parse_config_text("").output_path == default_output_dir() + "/series.csv");
}

TEST_CASE("config errors name the key") {
  auto key_of = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  CHECK(key_of("d = 9\n") == "d");
  CHECK(key_of("d = 3\n") == "d");
  CHECK(key_of("colour = red\n") == "colour");
  CHECK(key_of("dt = 0.1\ndt = 0.2\n") == "dt");
  CHECK(key_of("dt = fast\n") == "dt");
  CHECK(key_of("delta = 0\n") == "delta");
  CHECK(key_of("kind = donut\n") == "kind");
  CHECK(key_of("no equals sign\n") == "config");
  CHECK_THROWS_AS(parse_config(scratch("nope.cfg").string()), ConfigError);
  try {
    parse_config_text("d = 12\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("4..8") != std::string::npos);
  }
}
