#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hdeuler/cli.hpp"

using namespace hdeuler;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "hdeuler");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "hdeuler_test_cli";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(call({}).code == kExitUsage);
  CHECK(call({"frobnicate"}).code == kExitUsage);
  CHECK(call({"verify-kernel"}).code == kExitUsage);
  const auto bad_d = call({"verify-kernel", "--d", "9"});
  CHECK(bad_d.code == kExitUsage);
  CHECK(bad_d.err.find("4..8") != std::string::npos);
  CHECK(call({"envelopes", "--series", (scratch() / "absent.csv").string(), "--d", "4"}).code ==
        kExitUsage);
  CHECK(call({"simulate", "--config", (scratch() / "absent.cfg").string()}).code == kExitUsage);
  CHECK(call({"--help"}).code == kExitPass);
}

TEST_CASE("verify-kernel passes and writes its report") {
  const auto path = scratch() / "kernel_d4.json";
  const auto r = call({"verify-kernel", "--d", "4", "--out", path.string()});
  CHECK(r.code == kExitPass);
  CHECK(fs::exists(path));
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("simulate is byte-reproducible and feeds envelopes") {
  const auto dir = scratch();
  auto write_cfg = [&](const std::string& name) {
    const auto cfg = dir / (name + ".cfg");
    std::ofstream(cfg) << "n_particles = 120\ndt = 0.05\nt_end = 0.2\noutput_every = 1\n"
                       << "output_path = " << (dir / (name + ".csv")).string() << "\n";
    return cfg.string();
  };
  CHECK(call({"simulate", "--config", write_cfg("a")}).code == kExitPass);
  CHECK(call({"simulate", "--config", write_cfg("b")}).code == kExitPass);
  const auto a = slurp(dir / "a.csv");
  CHECK(!a.empty());
  CHECK(a == slurp(dir / "b.csv"));
  CHECK(fs::exists(dir / "a.json"));

  const auto env_csv = dir / "a_env.csv";
  const auto e = call({"envelopes", "--series", (dir / "a.csv").string(), "--out", env_csv.string()});
  CHECK(e.code == kExitPass);
  CHECK(fs::exists(env_csv));
  CHECK(fs::exists(dir / "a_env.json"));
  CHECK(slurp(env_csv).find("lemma24_omega_pass") != std::string::npos);
}
