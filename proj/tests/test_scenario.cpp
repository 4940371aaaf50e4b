#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "qcdma/scenario.hpp"

namespace fs = std::filesystem;

namespace {

const char* kCoherentScenario = R"({
  "system": {"users": 2, "chips": 16, "pulse_duration": 1e-9, "coupler": "balanced"},
  "users": [
    {"state": {"coherent": {"alpha": [1.0, 0.0]}}, "code": {"seed": 7}},
    {"state": {"coherent": {"alpha": [1.0, 0.0]}}, "code": {"seed": 8}}
  ],
  "filter": {"mode": "windowed", "taps": 9, "bandwidth": {"signal_multiples": 1.0}},
  "run": {"receivers": [0, 1]}
})";

const char* kTwoUserPhotonScenario = R"({
  "system": {"users": 2, "chips": 16, "pulse_duration": 1e-9, "coupler": "balanced"},
  "users": [
    {"state": "single-photon", "code": {"seed": 7}},
    {"state": "single-photon", "code": {"seed": 8}}
  ],
  "filter": {"mode": "grid-complementary", "taps": 9, "bandwidth": {"signal_multiples": 1.0}, "grid_size": 2048},
  "run": {"receivers": [0]}
})";

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const qcdma::Artifact* find_artifact(const std::vector<qcdma::Artifact>& artifacts, const std::string& name) {
    for (const auto& a : artifacts)
        if (a.name == name) return &a;
    return nullptr;
}

}  // namespace

TEST_CASE("scenario parsing and defaults") {
    const auto sc = qcdma::parse_scenario(kCoherentScenario);
    CHECK(sc.user_count == 2);
    CHECK(sc.n_c == 16);
    CHECK(sc.filter.bandwidth_cycles_per_chip == doctest::Approx(1.0 / 16.0));
    CHECK(sc.run.receivers == std::vector<std::size_t>{0, 1});
    CHECK(sc.code_for(0).length() == 16);
    CHECK(sc.code_for(0).chips() == qcdma::SpreadingCode::random(16, 7).chips());
    CHECK(sc.build_coupler().size() == 2);
}

TEST_CASE("schema errors carry the JSON path") {
    CHECK_THROWS_AS(qcdma::parse_scenario("not json"), qcdma::ScenarioError);
    try {
        qcdma::parse_scenario(R"({"system": {"users": 2, "chips": 4, "pulse_duration": 1e-9}})");
        FAIL("expected a ScenarioError");
    } catch (const qcdma::ScenarioError& e) {
        CHECK(e.where == "/system/coupler");
    }
    try {
        qcdma::parse_scenario(R"({
          "system": {"users": 1, "chips": 4, "pulse_duration": 1e-9, "coupler": "balanced"},
          "users": [{"state": "off", "code": {"chips": [1, -1, 2, 1]}}],
          "filter": {"mode": "all-pass"}
        })");
        FAIL("expected a ScenarioError");
    } catch (const qcdma::ScenarioError& e) {
        CHECK(e.where == "/users/0/code/chips");
    }
}

TEST_CASE("mixed transmitter kinds are rejected") {
    const std::string text = R"({
      "system": {"users": 2, "chips": 4, "pulse_duration": 1e-9, "coupler": "balanced"},
      "users": [
        {"state": "single-photon", "code": {"seed": 1}},
        {"state": {"coherent": {"alpha": [1, 0]}}, "code": {"seed": 2}}
      ],
      "filter": {"mode": "all-pass"}
    })";
    CHECK_THROWS_AS(qcdma::parse_scenario(text), qcdma::ScenarioError);
}

TEST_CASE("coherent run produces the expected artifacts") {
    const auto sc = qcdma::parse_scenario(kCoherentScenario);
    const auto artifacts = qcdma::run_artifacts(sc);
    CHECK(find_artifact(artifacts, "receiver0_intensity.csv") != nullptr);
    CHECK(find_artifact(artifacts, "receiver1_intensity.csv") != nullptr);
    CHECK(find_artifact(artifacts, "receiver0_photon_stats.json") != nullptr);
    CHECK(find_artifact(artifacts, "coefficients_s1_r0.csv") != nullptr);
    const auto* stats = find_artifact(artifacts, "receiver0_photon_stats.json");
    CHECK(stats->contents.find("mean_total_energy") != std::string::npos);
    CHECK(stats->contents.find("mean_mode_projected") != std::string::npos);
}

TEST_CASE("runs are byte-identical for identical scenarios") {
    const auto sc = qcdma::parse_scenario(kCoherentScenario);
    const auto a = qcdma::run_artifacts(sc);
    const auto b = qcdma::run_artifacts(sc);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        CHECK(a[i].contents == b[i].contents);
    }
}

TEST_CASE("two-user photon run emits the receiver report") {
    const auto sc = qcdma::parse_scenario(kTwoUserPhotonScenario);
    const auto artifacts = qcdma::run_artifacts(sc);
    const auto* report = find_artifact(artifacts, "twouser_report.json");
    REQUIRE(report != nullptr);
    CHECK(report->contents.find("exact_pmf_both_on") != std::string::npos);
    CHECK(report->contents.find("\"c_dd\"") != std::string::npos);
    // the grid-complementary pair keeps the exact pmf normalized
    const auto pos = report->contents.find("\"exact_pmf_sum\": ");
    REQUIRE(pos != std::string::npos);
    const double sum = std::strtod(report->contents.c_str() + pos + 17, nullptr);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("three-user photon run goes through the exact engine") {
    const std::string text = R"({
      "system": {"users": 3, "chips": 4, "pulse_duration": 1e-9, "coupler": "balanced"},
      "users": [
        {"state": "single-photon", "code": {"seed": 1}},
        {"state": "single-photon", "code": {"seed": 2}},
        {"state": "off", "code": {"seed": 3}}
      ],
      "filter": {"mode": "all-pass"},
      "run": {"receivers": [0]}
    })";
    const auto artifacts = qcdma::run_artifacts(qcdma::parse_scenario(text));
    const auto* stats = find_artifact(artifacts, "receiver0_photon_stats.json");
    REQUIRE(stats != nullptr);
    CHECK(stats->contents.find("exact-engine") != std::string::npos);
}

TEST_CASE("engine capacity cap raises the dedicated error") {
    const std::string text = R"({
      "system": {"users": 3, "chips": 8, "pulse_duration": 1e-9, "coupler": "balanced"},
      "users": [
        {"state": "single-photon", "code": {"seed": 1}},
        {"state": "single-photon", "code": {"seed": 2}},
        {"state": "single-photon", "code": {"seed": 3}}
      ],
      "filter": {"mode": "all-pass"},
      "run": {"max_engine_modes": 8}
    })";
    CHECK_THROWS_AS(qcdma::run_artifacts(qcdma::parse_scenario(text)), qcdma::CapacityError);
}

TEST_CASE("design command emits taps and response tables") {
    const auto sc = qcdma::parse_scenario(kCoherentScenario);
    const auto artifacts = qcdma::design_filter_artifacts(sc);
    REQUIRE(artifacts.size() == 2);
    CHECK(artifacts[0].name == "filter_taps.csv");
    CHECK(artifacts[0].contents.find("# unitarity_defect=") != std::string::npos);
    CHECK(artifacts[1].contents.find("omega_tc_over_pi") != std::string::npos);
}

#ifdef QCDMA_CLI_PATH
namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QCDMA_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("command-line interface round trip") {
    const fs::path dir = fs::temp_directory_path() / "qcdma_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path scenario = dir / "scenario.json";
    { std::ofstream(scenario) << kCoherentScenario; }

    CHECK(run_cli("run " + scenario.string() + " --out " + (dir / "out").string()) == 0);
    CHECK(fs::exists(dir / "out" / "receiver0_intensity.csv"));
    CHECK(fs::exists(dir / "out" / "receiver1_photon_stats.json"));

    CHECK(run_cli("design-filter " + scenario.string() + " --out " + (dir / "design").string()) == 0);
    CHECK(fs::exists(dir / "design" / "filter_response.csv"));

    // run twice: outputs must be byte-identical
    CHECK(run_cli("run " + scenario.string() + " --out " + (dir / "out2").string()) == 0);
    CHECK(slurp(dir / "out" / "receiver0_intensity.csv") == slurp(dir / "out2" / "receiver0_intensity.csv"));

    // config errors exit 2
    { std::ofstream(dir / "bad.json") << "{}"; }
    CHECK(run_cli("run " + (dir / "bad.json").string()) == 2);

    // capacity cap exits 4
    {
        std::ofstream(dir / "cap.json") << R"({
          "system": {"users": 3, "chips": 8, "pulse_duration": 1e-9, "coupler": "balanced"},
          "users": [
            {"state": "single-photon", "code": {"seed": 1}},
            {"state": "single-photon", "code": {"seed": 2}},
            {"state": "single-photon", "code": {"seed": 3}}
          ],
          "filter": {"mode": "all-pass"},
          "run": {"max_engine_modes": 8}
        })";
    }
    CHECK(run_cli("run " + (dir / "cap.json").string()) == 4);
    fs::remove_all(dir);
}

TEST_CASE("verify subcommand: quick pass and injected fault") {
    CHECK(run_cli("verify --quick") == 0);
    CHECK(run_cli("verify --quick --inject-fault") == 3);
}
#endif

TEST_CASE("single transmitter leaves the other receiver nearly dark") {
    const std::string text = R"({
      "system": {"users": 2, "chips": 100, "pulse_duration": 1e-9, "coupler": "balanced"},
      "users": [
        {"state": "single-photon", "code": {"seed": 42}},
        {"state": "off", "code": {"seed": 43}}
      ],
      "filter": {"mode": "grid-complementary", "taps": 101, "bandwidth": {"signal_multiples": 1.0}},
      "run": {"receivers": [0, 1]}
    })";
    const auto artifacts = qcdma::run_artifacts(qcdma::parse_scenario(text));
    const auto* stats1 = find_artifact(artifacts, "receiver1_photon_stats.json");
    REQUIRE(stats1 != nullptr);
    // receiver 1 sees only residual interference: p(0) stays above 0.9
    const auto pos = stats1->contents.find("\"pmf\": [");
    REQUIRE(pos != std::string::npos);
    const double p0 = std::strtod(stats1->contents.c_str() + pos + 8, nullptr);
    CHECK(p0 >= 0.9);
    // while the intended receiver recovers a sizable share
    const auto* stats0 = find_artifact(artifacts, "receiver0_photon_stats.json");
    const auto pos0 = stats0->contents.find("\"pmf\": [");
    const double p0_own = std::strtod(stats0->contents.c_str() + pos0 + 8, nullptr);
    CHECK(p0_own <= 0.65);  // 1 - D/2 with D >= 0.8 through the balanced split
}

TEST_CASE("all transmitters off produce zero output") {
    const std::string text = R"({
      "system": {"users": 2, "chips": 8, "pulse_duration": 1e-9, "coupler": "balanced"},
      "users": [
        {"state": "off", "code": {"seed": 1}},
        {"state": "off", "code": {"seed": 2}}
      ],
      "filter": {"mode": "all-pass"},
      "run": {"receivers": [0]}
    })";
    const auto artifacts = qcdma::run_artifacts(qcdma::parse_scenario(text));
    const auto* stats = find_artifact(artifacts, "receiver0_photon_stats.json");
    REQUIRE(stats != nullptr);
    CHECK(stats->contents.find("1.0") != std::string::npos);  // pmf = [1.0]
    const auto* intensity = find_artifact(artifacts, "receiver0_intensity.csv");
    REQUIRE(intensity != nullptr);
    CHECK(intensity->contents.find("0,0,0,0") != std::string::npos);
}

// Coherent alpha=1 and a single photon have the same average intensity
// trace but different counting statistics.
TEST_CASE("coherent and single-photon runs share intensities, not statistics") {
    const char* base = R"({
      "system": {"users": 2, "chips": 16, "pulse_duration": 1e-9, "coupler": "balanced"},
      "users": [
        {"state": %s, "code": {"seed": 5}},
        {"state": "off", "code": {"seed": 6}}
      ],
      "filter": {"mode": "grid-complementary", "taps": 9, "bandwidth": {"signal_multiples": 1.0}, "grid_size": 2048},
      "run": {"receivers": [0]}
    })";
    char coherent_text[1024], photon_text[1024];
    std::snprintf(coherent_text, sizeof coherent_text, base, "{\"coherent\": {\"alpha\": [1.0, 0.0]}}");
    std::snprintf(photon_text, sizeof photon_text, base, "\"single-photon\"");
    const auto coh = qcdma::run_artifacts(qcdma::parse_scenario(coherent_text));
    const auto pho = qcdma::run_artifacts(qcdma::parse_scenario(photon_text));
    const auto* ci = find_artifact(coh, "receiver0_intensity.csv");
    const auto* pi = find_artifact(pho, "receiver0_intensity.csv");
    REQUIRE(ci != nullptr);
    REQUIRE(pi != nullptr);
    CHECK(ci->contents == pi->contents);
    const auto* cs = find_artifact(coh, "receiver0_photon_stats.json");
    const auto* ps = find_artifact(pho, "receiver0_photon_stats.json");
    CHECK(cs->contents != ps->contents);
    CHECK(cs->contents.find("coherent") != std::string::npos);
    CHECK(ps->contents.find("single-photon") != std::string::npos);
}
