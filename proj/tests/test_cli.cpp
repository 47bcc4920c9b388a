#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tricav/config.hpp"

using namespace tricav;
namespace fs = std::filesystem;

namespace {

const fs::path data_dir = fs::path(TRICAV_TEST_DIR) / "data";
const fs::path golden_dir = fs::path(TRICAV_TEST_DIR) / "golden";
const fs::path config_dir = fs::path(TRICAV_TEST_DIR) / ".." / "configs";

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& command, const std::string& config, const std::string& extra = "") {
  const fs::path out = fs::temp_directory_path() / ("tricav_cli_test_" + command + ".out");
  fs::remove(out);
  const std::string cmd = std::string(TRICAV_CLI) + " " + command + " --config " + (data_dir / config).string() +
                          " --out " + out.string() + " " + extra + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, fs::exists(out) ? slurp(out) : ""};
  fs::remove(out);
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) v.push_back(f);
  return v;
}

}  // namespace

TEST_CASE("config round trip is idempotent") {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(config_dir)) files.push_back(e.path());
  for (const auto& e : fs::directory_iterator(data_dir))
    if (e.path().filename().string().rfind("bad_", 0) != 0) files.push_back(e.path());
  REQUIRE(files.size() >= 10);
  for (const auto& f : files) {
    CAPTURE(f.string());
    const auto once = config::to_json(config::load(f.string()));
    const auto twice = config::to_json(config::parse(once));
    CHECK(once == twice);
    CHECK(once.dump() == twice.dump());
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config::load((data_dir / "bad_unknown_key.json").string()), config::ConfigError);
  CHECK_THROWS_AS(config::parse_text("{\"quadrature\": {\"rel_tol\": \"tight\"}}"), config::ConfigError);
  CHECK_THROWS_AS(config::parse_text("{\"output\": {\"format\": \"xlsx\"}}"), config::ConfigError);
  CHECK_THROWS_AS(config::parse_text("not json"), config::ConfigError);
  const auto c = config::parse_text("{}");
  CHECK_THROWS_AS(config::require_for(c, "observables"), config::ConfigError);
  CHECK_THROWS_AS(config::require_for(c, "atom"), config::ConfigError);
  const auto sys = config::load((data_dir / "teq.json").string());
  CHECK(sys.system->geometry.d12 == 1e-6);
  CHECK(sys.system->T2 == sys.system->Te);
  CHECK(sys.accuracy.quad.rel_tol == 1e-3);
  CHECK_THROWS_AS(config::require_for(sys, "nonadditivity-map"), config::ConfigError);
  const auto inf = config::load((data_dir / "map.json").string());
  CHECK(std::isinf(inf.system->geometry.delta1));
}

TEST_CASE("cli: golden headers, equilibrium nulls and determinism") {
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"observables", "observables_eq.json"}, {"pressure-sweep", "sweep.json"}, {"nonadditivity-map", "map.json"},
      {"teq", "teq.json"},                   {"atom", "atom.json"},
  };
  for (const auto& [command, config] : runs) {
    CAPTURE(command);
    const Run a = run_cli(command, config);
    CHECK(a.code == 0);
    const auto got = lines(a.out);
    const auto want = lines(slurp(golden_dir / (command + ".header")));
    REQUIRE(got.size() > 2);
    REQUIRE(want.size() == 2);
    CHECK(got[0] == want[0]);
    CHECK(got[1] == want[1]);
    const Run b = run_cli(command, config);
    CHECK(a.out == b.out);
  }

  const auto obs = lines(run_cli("observables", "observables_eq.json").out);
  const auto head = fields(obs[1]);
  for (std::size_t r = 2; r < 5; ++r) {
    const auto row = fields(obs[r]);
    for (std::size_t c = 0; c < head.size(); ++c)
      if (head[c].rfind("H_", 0) == 0) CHECK(std::stod(row[c]) == 0.0);
  }
}

TEST_CASE("cli: exit codes, magnitude output and structured text") {
  CHECK(run_cli("observables", "bad_unknown_key.json").code == 1);
  CHECK(run_cli("observables", "bad_negative_gap.json").code == 1);
  CHECK(run_cli("observables", "does_not_exist.json").code == 1);
  CHECK(run_cli("atom", "teq.json").code == 1);

  const Run failed = run_cli("teq", "teq_vacuum_middle.json");
  CHECK(failed.code == 2);
  const auto rows = lines(failed.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].find("nan") != std::string::npos);
  CHECK(rows[2].find("vacuum") != std::string::npos);

  const auto plain = lines(run_cli("pressure-sweep", "sweep.json").out);
  const auto mag = lines(run_cli("pressure-sweep", "sweep.json", "--magnitude").out);
  REQUIRE(plain.size() == mag.size());
  for (std::size_t r = 2; r < plain.size(); ++r) {
    const auto p = fields(plain[r]), m = fields(mag[r]);
    CHECK(std::stod(p[1]) < 0.0);
    CHECK(std::stod(m[1]) == -std::stod(p[1]));
    CHECK(m[3] == p[3]);  // dimensionless column untouched
  }

  const fs::path cfg = fs::temp_directory_path() / "tricav_cli_structured.json";
  {
    auto j = nlohmann::json::parse(slurp(data_dir / "map.json"));
    j["output"] = {{"format", "structured-text"}};
    std::ofstream(cfg) << j.dump();
  }
  const fs::path out = fs::temp_directory_path() / "tricav_cli_structured.out";
  const std::string cmd =
      std::string(TRICAV_CLI) + " nonadditivity-map --config " + cfg.string() + " --out " + out.string();
  REQUIRE(std::system(cmd.c_str()) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["command"] == "nonadditivity-map");
  CHECK(doc["rows"].size() == 4);
  CHECK(doc["columns"][4] == "nonadditivity");
  fs::remove(cfg);
  fs::remove(out);
}

TEST_CASE("cli: worker count does not change the output") {
  CHECK(run_cli("nonadditivity-map", "map.json", "--workers 1").out ==
        run_cli("nonadditivity-map", "map.json", "--workers 3").out);
  CHECK(run_cli("teq", "teq.json", "--workers 1").out == run_cli("teq", "teq.json", "--workers 2").out);
}
