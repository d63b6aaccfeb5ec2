#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "nlohmann/json.hpp"

namespace {

int run_cli(const std::string& args, const std::string& tag) {
  const std::string cmd = std::string(HMT_SIM_BIN) + " " + args + " > cli_" + tag +
                          ".out 2> cli_" + tag + ".err";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) fields.push_back(item);
    if (!fields.empty()) rows.push_back(std::move(fields));
  }
  return rows;
}

const std::string kHeader =
    "x,metric,value,ci,receiver,channel-kind,spread,seed,config-hash,delta_t,delta_f";

}  // namespace

TEST_CASE("cli: help, version, and missing subcommand") {
  CHECK(run_cli("--help", "help") == 0);
  const auto help = slurp("cli_help.out");
  CHECK(help.find("sinr-curve") != std::string::npos);
  CHECK(help.find("validate") != std::string::npos);
  CHECK(run_cli("--version", "version") == 0);
  CHECK(run_cli("", "nosub") == 2);
  CHECK(run_cli("frobnicate", "badsub") == 2);
}

TEST_CASE("cli: small measured curve with manifest, reruns bit-identical") {
  const std::string args =
      "sinr-curve --channel uni --spread 0.2 --realizations 8 --snr 0,20 --seed 7 "
      "--out cli_sinr.csv --manifest cli_sinr.mf.json";
  REQUIRE(run_cli(args, "sinr") == 0);

  auto rows = read_csv("cli_sinr.csv");
  REQUIRE(rows.size() == 5);
  std::ostringstream h;
  for (std::size_t i = 0; i < rows[0].size(); ++i) h << (i ? "," : "") << rows[0][i];
  CHECK(h.str() == kHeader);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    REQUIRE(rows[r].size() == 11);
    CHECK(rows[r][1] == "sinr_db");
    CHECK(rows[r][5] == "uni");
    CHECK(rows[r][7] == "7");
    CHECK(rows[r][8].size() == 16);
    CHECK(rows[r][8] == rows[1][8]);
  }

  const auto m = nlohmann::json::parse(slurp("cli_sinr.mf.json"));
  CHECK(m["command"] == "sinr-curve");
  CHECK(m["seed"] == 7);
  CHECK(!m["finished"].get<std::string>().empty());
  CHECK(m["outputs"][0] == "cli_sinr.csv");
  CHECK(m["config"].contains("scattering.kind"));

  const std::string first = slurp("cli_sinr.csv");
  REQUIRE(run_cli(args, "sinr2") == 0);
  CHECK(slurp("cli_sinr.csv") == first);
}

TEST_CASE("cli: searched-bound receiver pins its offsets in the output") {
  REQUIRE(run_cli("sinr-curve --channel uni --spread 0.2 --realizations 4 --snr 20 "
                  "--receiver ub --out cli_ub.csv",
                  "ub") == 0);
  const auto rows = read_csv("cli_ub.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][4] == "ub");
  CHECK(std::abs(std::stod(rows[1][9]) - 1.074570e-5) < 1e-7);
  CHECK(std::abs(std::stod(rows[1][10])) < 1.0);
}

TEST_CASE("cli: malformed invocations exit with a usage error") {
  CHECK(run_cli("sinr-curve --channel bogus --realizations 4 --snr 20", "badchan") == 2);
  CHECK(run_cli("validate --sigma -1", "badsigma") == 2);
  CHECK(run_cli("spread-sweep --spreads '' --realizations 4", "badspreads") == 2);
  CHECK(run_cli("sinr-curve --no-such-flag 1", "badflag") == 2);
  CHECK(run_cli("sinr-curve --realizations 1 --snr 20", "badreal") == 2);
}

TEST_CASE("cli: validation suite reports green") {
  REQUIRE(run_cli("validate --report cli_report.json --manifest cli_val.mf.json", "val") == 0);
  const auto out = slurp("cli_val.out");
  CHECK(out.find("overall: PASS") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp("cli_report.json"));
  CHECK(j["schema"] == "validate-report/1");
  CHECK(j["all_passed"].get<bool>());
  REQUIRE(j["reports"].is_array());
  CHECK(j["reports"].size() == 3);
  for (const auto& r : j["reports"]) {
    CHECK(r["all_passed"].get<bool>());
    CHECK(r["checks"].size() >= 2);
  }
}

TEST_CASE("cli: robustness sweep emits all three receivers") {
  REQUIRE(run_cli("robustness --channel exp --spread 0.1 --realizations 6 --snr 0 "
                  "--est-error uniform-half-span --out cli_rob.csv",
                  "rob") == 0);
  const auto rows = read_csv("cli_rob.csv");
  REQUIRE(rows.size() == 4);
  std::vector<std::string> names;
  for (std::size_t r = 1; r < rows.size(); ++r) names.push_back(rows[r][4]);
  CHECK(std::count(names.begin(), names.end(), "ub") == 1);
  CHECK(std::count(names.begin(), names.end(), "maxsinr-esterr") == 1);
  CHECK(std::count(names.begin(), names.end(), "tpr") == 1);
  for (std::size_t r = 1; r < rows.size(); ++r) CHECK(rows[r][5] == "exp");
}

TEST_CASE("cli: bit error curve and spread sweep label their axes") {
  REQUIRE(run_cli("ber-curve --channel uni --spread 0.2 --realizations 3 --ebn0 30 "
                  "--out cli_ber.csv",
                  "ber") == 0);
  const auto ber = read_csv("cli_ber.csv");
  REQUIRE(ber.size() >= 2);
  for (std::size_t r = 1; r < ber.size(); ++r) {
    CHECK(ber[r][1] == "ber");
    CHECK(ber[r][0] == "30");
    const double v = std::stod(ber[r][2]);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }

  REQUIRE(run_cli("spread-sweep --channel uni --spreads 0.07,0.2 --realizations 4 "
                  "--receiver tpr --out cli_sweep.csv",
                  "sweep") == 0);
  const auto sw = read_csv("cli_sweep.csv");
  REQUIRE(sw.size() == 3);
  CHECK(std::stod(sw[1][0]) == 0.07);
  CHECK(std::stod(sw[2][0]) == 0.2);
  CHECK(std::stod(sw[1][2]) > std::stod(sw[2][2]));  // less spread, higher level
}
