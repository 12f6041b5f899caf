#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "gnsharp/cli.hpp"
#include "gnsharp/io.hpp"

using namespace gnsharp;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("io_cli") {
  TEST_CASE("constants report matches the golden file") {
    const auto r = run_cli({"constants", "--p", "2", "--q", "4", "--group", "euclidean2"});
    REQUIRE(r.code == kExitPass);
    const json got = json::parse(r.out);
    const json golden = json::parse(read_text(GNSHARP_SOURCE_DIR "/tests/golden/constants_p2_q4_euclidean2.json"));
    CHECK(got.at("schema_version") == kSchemaVersion);
    CHECK(got.at("kind") == "constants");
    for (const char* key : {"M1", "M2", "theta", "marcinkiewicz_bound", "alpha_tilde", "sphere_measure"})
      CHECK(got.at(key).get<double>() == doctest::Approx(golden.at(key).get<double>()).epsilon(1e-12));
    CHECK(got["c1_envelope"]["value"].get<double>() ==
          doctest::Approx(golden["c1_envelope"]["value"].get<double>()).epsilon(1e-12));
  }

  TEST_CASE("hypothesis violations exit before any compute") {
    auto r = run_cli({"constants", "--p", "2", "--q", "1.5"});
    CHECK(r.code == kExitError);
    CHECK(r.err.find("requires q > p") != std::string::npos);
    r = run_cli({"ground-state", "--group", "euclidean1", "--p", "2", "--q", "4", "--N", "64", "--L", "40"});
    CHECK(r.code == kExitError);
    CHECK(r.err.find("hypothesis violated") != std::string::npos);
    r = run_cli({"verify", "bgw", "--a", "0.5", "--q", "2"});
    CHECK(r.code == kExitError);
    CHECK(r.err.find("a > Q/q") != std::string::npos);
    CHECK_THROWS_AS(validate_hypotheses("constants", RunConfig{.p = 1.0}), HypothesisError);
  }

  TEST_CASE("relaxed hypotheses are recorded") {
    const auto r = run_cli({"ground-state", "--group", "euclidean1", "--p", "2", "--q", "4", "--N", "1024", "--L",
                            "200", "--allow-outside-hypotheses"});
    CHECK(r.code == kExitPass);
    CHECK(json::parse(r.out).at("outside_hypotheses") == true);
  }

  TEST_CASE("parse errors and help") {
    CHECK(run_cli({"--help"}).code == 0);
    CHECK(run_cli({"frobnicate"}).code == kExitError);
    CHECK(run_cli({"constants", "--p", "abc"}).code == kExitError);
    CHECK(run_cli({}).code == kExitError);
  }

  TEST_CASE("ground-state report") {
    const auto r = run_cli({"ground-state", "--N", "128", "--L", "30"});
    REQUIRE(r.code == kExitPass);
    const json j = json::parse(r.out);
    CHECK(j.at("kind") == "ground_state");
    CHECK(j.at("mass").get<double>() == doctest::Approx(11.70).epsilon(1e-3));
    CHECK(j.at("residuals").size() == 3);
  }

  TEST_CASE("verify gn is byte-identical across runs and exits 2 on failure") {
    const std::vector<std::string> args{"verify", "gn", "--count", "8", "--N", "64", "--seed", "7"};
    const auto a = run_cli(args), b = run_cli(args);
    CHECK(a.code == kExitPass);
    CHECK(a.out == b.out);
    CHECK(json::parse(a.out).at("pass") == true);
    auto failing = args;
    failing.insert(failing.end(), {"--c1", "1e-3"});
    CHECK(run_cli(failing).code == kExitFail);
  }

  TEST_CASE("reports and CSV go to files") {
    const auto dir = std::filesystem::temp_directory_path() / "gnsharp_cli_test";
    std::filesystem::remove_all(dir);
    const auto r = run_cli({"verify", "gn", "--count", "4", "--N", "32", "--out", (dir / "r.json").string(), "--csv",
                            (dir / "r.csv").string()});
    CHECK(r.code == kExitPass);
    const json j = json::parse(read_text(dir / "r.json"));
    CHECK(j.at("schema_version") == kSchemaVersion);
    const std::string csv = read_text(dir / "r.csv");
    CHECK(csv.rfind("index,ratio", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("calibration JSON roundtrip") {
    BWCalibration c{2.0, 2.0, 0.4, 2.718281828459045, 1e5, 1e-6, "gaussians"};
    const auto back = bw_calibration_from_json(wrap_report("bw-calibration", {{"calibration", to_json(c)}}));
    CHECK(back.c4 == c.c4);
    CHECK(back.c1_empirical == c.c1_empirical);
    CHECK(back.family == c.family);
  }

  TEST_CASE("non-finite numbers are written as strings") {
    VerificationReport r;
    r.max_ratio = std::numeric_limits<double>::infinity();
    r.ratios = {1.0, std::numeric_limits<double>::quiet_NaN()};
    const json j = to_json(r);
    CHECK(j.at("max") == "inf");
    CHECK(j.at("ratios")[1] == "nan");
  }
}
