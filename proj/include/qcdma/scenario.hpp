// Scenario files: schema validation, construction of the system blocks,
// and the run/design commands that produce the output artifacts.
#ifndef QCDMA_SCENARIO_HPP
#define QCDMA_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcdma/channel.hpp"
#include "qcdma/chipgrid.hpp"
#include "qcdma/codes.hpp"
#include "qcdma/coherent.hpp"
#include "qcdma/filter.hpp"

namespace qcdma {

// Configuration problem; `where` is the JSON pointer of the offending field.
class ScenarioError : public std::runtime_error {
  public:
    ScenarioError(std::string where_, const std::string& what_)
        : std::runtime_error(where_ + ": " + what_), where(std::move(where_)) {}
    std::string where;
};

// A request that exceeds the exact-engine capacity limits; callers map this
// to its own exit code so scripts can tell it apart from bad input.
class CapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct UserSpec {
    enum class Kind { off, coherent, single_photon };
    Kind kind = Kind::off;
    cplx alpha{1.0, 0.0};
    std::optional<std::vector<int>> explicit_code;
    std::uint64_t code_seed = 0;
    bool balanced_code = false;
};

struct FilterSpec {
    enum class Mode { all_pass, windowed, grid_complementary };
    Mode mode = Mode::windowed;
    std::size_t taps = 1;
    double bandwidth_cycles_per_chip = 0.0;  // resolved from the bandwidth block
    FilterDesignOptions options;
};

struct RunSpec {
    std::vector<std::size_t> receivers;
    int n_max = 3;
    std::size_t max_engine_modes = 4096;
    std::vector<std::uint64_t> seeds;  // reserved for sweep commands
};

struct Scenario {
    std::size_t user_count = 0;
    std::size_t n_c = 0;
    double t_p = 0.0;
    bool balanced_coupler = true;
    std::vector<cplx> coupler_entries;  // row-major, when not balanced
    std::vector<UserSpec> users;
    FilterSpec filter;
    RunSpec run;

    ChipGrid build_grid() const { return ChipGrid(t_p, n_c); }
    SpreadingCode code_for(std::size_t s) const;
    BroadcastMatrix build_coupler() const;
    FilterPair build_filter() const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

// One output file: name relative to the output directory, plus contents.
struct Artifact {
    std::string name;
    std::string contents;
};

// Filter design command: tap table and frequency-response table.
std::vector<Artifact> design_filter_artifacts(const Scenario& sc);

// Full run: per-receiver intensity traces, photon statistics, coefficient
// dumps, and (two single-photon users) the closed-form receiver report.
std::vector<Artifact> run_artifacts(const Scenario& sc);

void write_artifacts(const std::string& directory, const std::vector<Artifact>& artifacts);

}  // namespace qcdma

#endif
