// qcdma: scenario runner for the spread-spectrum quantum CDMA simulator.
//
// Exit codes: 0 ok, 2 configuration error, 3 invariant failure, 4 capacity cap.
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "qcdma/scenario.hpp"
#include "qcdma/textio.hpp"
#include "qcdma/verify.hpp"

namespace {

int run_design(const std::string& scenario_path, const std::string& out_dir) {
    const qcdma::Scenario sc = qcdma::load_scenario(scenario_path);
    qcdma::write_artifacts(out_dir, qcdma::design_filter_artifacts(sc));
    std::printf("wrote filter_taps.csv and filter_response.csv to %s\n", out_dir.c_str());
    return 0;
}

int run_run(const std::string& scenario_path, const std::string& out_dir) {
    const qcdma::Scenario sc = qcdma::load_scenario(scenario_path);
    const auto artifacts = qcdma::run_artifacts(sc);
    qcdma::write_artifacts(out_dir, artifacts);
    std::printf("wrote %zu artifacts to %s\n", artifacts.size(), out_dir.c_str());
    return 0;
}

int run_verify(bool quick, bool inject_fault, const std::string& json_path) {
    qcdma::VerifyOptions options;
    options.scale = quick ? qcdma::VerifyScale::quick : qcdma::VerifyScale::full;
    options.inject_fault = inject_fault;
    const auto results = qcdma::run_invariant_suite(options);
    for (const auto& r : results) std::printf("%s\n", qcdma::format_check_line(r).c_str());
    if (!json_path.empty()) qcdma::textio::write_file(json_path, qcdma::checks_to_json(results));
    return qcdma::all_passed(results) ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spread-spectrum quantum CDMA simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out", json_path;
    bool quick = false, inject_fault = false;

    auto* design = app.add_subcommand("design-filter", "design the scenario's filter and dump taps/response");
    design->add_option("scenario", scenario_path, "scenario JSON file")->required();
    design->add_option("-o,--out", out_dir, "output directory");

    auto* run = app.add_subcommand("run", "propagate the scenario and write receiver outputs");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("-o,--out", out_dir, "output directory");

    auto* verify = app.add_subcommand("verify", "run the invariant suite");
    verify->add_flag("--quick", quick, "reduced sweep sizes (smoke scale)");
    verify->add_flag("--inject-fault", inject_fault, "add a deliberately broken filter check (must fail)");
    verify->add_option("--json", json_path, "also write a machine-readable report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (design->parsed()) return run_design(scenario_path, out_dir);
        if (run->parsed()) return run_run(scenario_path, out_dir);
        return run_verify(quick, inject_fault, json_path);
    } catch (const qcdma::ScenarioError& e) {
        std::fprintf(stderr, "configuration error at %s\n", e.what());
        return 2;
    } catch (const qcdma::CapacityError& e) {
        std::fprintf(stderr, "capacity cap: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
