#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csv_reader.hpp"
#include "xrsim/cli.hpp"

namespace fs = std::filesystem;
using xrsim::cli::run;

namespace {

const std::string kScenarios = XRSIM_SCENARIO_DIR;
const std::string kCase1 = kScenarios + "/casestudy1.json";
const std::string kCase2 = kScenarios + "/casestudy2.json";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "xrsim");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("xrsim_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
  std::size_t entries() const {
    return static_cast<std::size_t>(
        std::distance(fs::directory_iterator(path), fs::directory_iterator()));
  }
};

void write(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

constexpr const char* kMonteCarlo = R"({
  "device": {"sensor_throughput": 1e9, "render_throughput": 1e10, "compute_time": 0.001},
  "uplink_payload": {"kind": "features", "count": 85},
  "downlink_payload": {"kind": "blob", "bits": 1000},
  "channel": {"bandwidth_hz": 1000, "mode": {"monte_carlo": {"trials": 300}}},
  "sweep": {"start_db": -5, "stop_db": 5, "step_db": 2.5, "schemes": ["deepsc"]}
})";

// Parses a report in either format into rows of strings so that the two
// encodings can be compared field by field.
std::vector<std::vector<std::string>> rows_of_csv(const std::string& text) {
  auto rows = testcsv::parse(text);
  rows.erase(rows.begin());
  return rows;
}

std::vector<std::string> header_of_csv(const std::string& text) {
  return testcsv::parse(text).front();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("budget on the first case study") {
  const Result r = cli({"budget", "--scenario", kCase1});
  REQUIRE(r.code == 0);
  const auto rows = testcsv::parse(r.out);
  CHECK(rows[0] == std::vector<std::string>{"label", "payload_bits", "window_s",
                                            "required_rate_bps", "band", "feasible"});
  CHECK(rows[1] == std::vector<std::string>{"uplink_image", "1600000", "0.00125", "1.28e+09",
                                            "within", "true"});
}

TEST_CASE("every subcommand: csv and json carry the same rows") {
  const std::vector<std::pair<std::string, std::string>> runs{
      {"budget", kCase1}, {"sweep", kCase1},    {"sense", kCase1},
      {"render", kCase1}, {"simulate", kCase1}, {"broadcast", kCase2}};
  for (const auto& [cmd, scenario] : runs) {
    CAPTURE(cmd);
    const Result csv = cli({cmd, "--scenario", scenario});
    const Result json = cli({cmd, "--scenario", scenario, "--format", "json"});
    REQUIRE(csv.code == 0);
    REQUIRE(json.code == 0);
    const auto header = header_of_csv(csv.out);
    const auto rows = rows_of_csv(csv.out);
    const auto doc = nlohmann::ordered_json::parse(json.out);
    REQUIRE(doc.size() == rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      REQUIRE(doc[r].size() == header.size());
      std::size_t c = 0;
      for (const auto& [key, value] : doc[r].items()) {
        CHECK(key == header[c]);
        const std::string& cell = rows[r][c];
        if (value.is_boolean())
          CHECK(cell == (value.get<bool>() ? "true" : "false"));
        else if (value.is_number_integer())
          CHECK(std::stoll(cell) == value.get<std::int64_t>());
        else if (value.is_number())
          CHECK(std::stod(cell) == value.get<double>());
        else
          CHECK(cell == value.get<std::string>());
        ++c;
      }
    }
  }
}

TEST_CASE("identical inputs and seed give byte-identical files") {
  TempDir dir("determinism");
  write(dir / "mc.json", kMonteCarlo);
  for (const char* cmd : {"sweep", "budget", "sense", "render", "simulate"}) {
    const std::string scenario = std::string(cmd) == "sweep" ? dir / "mc.json" : kCase1;
    CAPTURE(cmd);
    REQUIRE(cli({cmd, "--scenario", scenario, "--seed", "7", "--out", dir / "a.csv", "--quiet"}).code == 0);
    REQUIRE(cli({cmd, "--scenario", scenario, "--seed", "7", "--out", dir / "b.csv", "--quiet"}).code == 0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(!slurp(dir / "a.csv").empty());
  }
}

TEST_CASE("--seed overrides the scenario seed") {
  TempDir dir("seed");
  write(dir / "mc.json", kMonteCarlo);
  // Monte-Carlo without a seed is a validation error unless --seed supplies one.
  const Result missing = cli({"sweep", "--scenario", dir / "mc.json"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("/channel/seed") != std::string::npos);
  const Result a = cli({"sweep", "--scenario", dir / "mc.json", "--seed", "7"});
  const Result b = cli({"sweep", "--scenario", dir / "mc.json", "--seed", "8"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out != b.out);
  CHECK(header_of_csv(a.out) ==
        std::vector<std::string>{"scheme", "snr_db", "feature_mse", "task_proxy",
                                 "payload_bits", "outage"});
  CHECK(rows_of_csv(a.out).size() == 5);
}

TEST_CASE("missing scenario is a usage error with no output") {
  TempDir dir("missing");
  const Result r = cli({"simulate", "--scenario", dir / "nope.json", "--out", dir / "out.csv"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("--scenario") != std::string::npos);
  CHECK(dir.entries() == 0);
}

TEST_CASE("validation failures exit 1 and write nothing") {
  TempDir dir("invalid");
  std::string text = slurp(kCase1);
  text.replace(text.find("\"sensor_throughput\": 2e9"), 24, "\"sensor_throughput\": 0");
  write(dir / "bad.json", text);
  const Result r = cli({"simulate", "--scenario", dir / "bad.json", "--out", dir / "out.csv"});
  CHECK(r.code == 1);
  CHECK(r.err.find("scenario.validate: /device/sensor_throughput") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out.csv"));

  write(dir / "syntax.json", "{\"device\": }");
  CHECK(cli({"budget", "--scenario", dir / "syntax.json"}).code == 1);

  // Sections a subcommand needs must be present.
  const Result no_section = cli({"broadcast", "--scenario", kCase1, "--out", dir / "b.csv"});
  CHECK(no_section.code == 1);
  CHECK(no_section.err.find("broadcast") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "b.csv"));
  CHECK(dir.entries() == 2);
}

TEST_CASE("usage errors exit 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"teleport", "--scenario", kCase1}).code == 2);
  CHECK(cli({"budget"}).code == 2);
  CHECK(cli({"budget", "--scenario", kCase1, "--format", "xml"}).code == 2);
  CHECK(cli({"budget", "sweep", "--scenario", kCase1}).code == 2);
  CHECK(cli({"budget", "--scenario", kCase1, "--seed", "-3"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("mask and budget side outputs") {
  TempDir dir("side");
  REQUIRE(cli({"sense", "--scenario", kCase1, "--mask-out", dir / "mask.json", "--out",
               dir / "s.csv", "--quiet"}).code == 0);
  const auto mask = nlohmann::json::parse(slurp(dir / "mask.json"));
  CHECK(mask["h"] == 1000);
  CHECK(mask["w"] == 2000);
  REQUIRE(cli({"render", "--scenario", kCase1, "--budget-out", dir / "b.csv", "--out",
               dir / "r.csv", "--quiet"}).code == 0);
  const auto budget = testcsv::parse(slurp(dir / "b.csv"));
  CHECK(budget.size() == 1 + 2'000'000);
  CHECK(budget[0] == std::vector<std::string>{"y", "x", "samples"});
}

TEST_CASE("relative weight files resolve against the scenario") {
  TempDir dir("relative");
  write(dir / "rel.csv", "t,y,x,weight\n0,0,1,1\n");
  write(dir / "s.json", R"({
    "device": {"sensor_throughput": 1e9, "render_throughput": 1e10, "compute_time": 0.001},
    "uplink_payload": {"kind": "blob", "bits": 10},
    "downlink_payload": {"kind": "blob", "bits": 10},
    "channel": {"bandwidth_hz": 1000},
    "sensing": {"grid": {"t": 1, "h": 2, "w": 2}, "relevance": {"kind": "csv", "path": "rel.csv"},
                "coverage_target": 1.0}
  })");
  const Result r = cli({"sense", "--scenario", dir / "s.json"});
  REQUIRE(r.code == 0);
  CHECK(rows_of_csv(r.out)[1][4] == "1");
  fs::remove(dir / "rel.csv");
  CHECK(cli({"sense", "--scenario", dir / "s.json"}).code == 2);
}

TEST_CASE("the installed binary reports exit codes") {
  TempDir dir("binary");
  const std::string bin = XRSIM_CLI_PATH;
  const auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  CHECK(status(bin + " budget --scenario " + kCase1) == 0);
  CHECK(status(bin + " simulate --scenario " + dir / "missing.json") == 2);
  CHECK(status(bin + " frobnicate") == 2);
  CHECK(dir.entries() == 0);
}

}  // TEST_SUITE
