#include "qcdma/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <filesystem>
#include <sstream>

#include "json.hpp"

#include "qcdma/fock.hpp"
#include "qcdma/textio.hpp"
#include "qcdma/twouser.hpp"

namespace qcdma {

namespace {

using json = nlohmann::ordered_json;

const json& require(const json& j, const char* field, const std::string& path) {
    if (!j.is_object()) throw ScenarioError(path, "expected an object");
    auto it = j.find(field);
    if (it == j.end()) throw ScenarioError(path + "/" + field, "missing required field");
    return *it;
}

double require_number(const json& j, const char* field, const std::string& path) {
    const json& v = require(j, field, path);
    if (!v.is_number()) throw ScenarioError(path + "/" + field, "expected a number");
    return v.get<double>();
}

std::size_t require_count(const json& j, const char* field, const std::string& path) {
    const json& v = require(j, field, path);
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0)
        throw ScenarioError(path + "/" + field, "expected a positive integer");
    return v.get<std::size_t>();
}

cplx parse_complex(const json& v, const std::string& path) {
    if (v.is_number()) return cplx(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cplx(v[0].get<double>(), v[1].get<double>());
    throw ScenarioError(path, "expected a number or [re, im]");
}

UserSpec parse_user(const json& j, const std::string& path) {
    UserSpec u;
    const json& state = require(j, "state", path);
    if (state.is_string()) {
        const std::string s = state.get<std::string>();
        if (s == "off")
            u.kind = UserSpec::Kind::off;
        else if (s == "single-photon")
            u.kind = UserSpec::Kind::single_photon;
        else
            throw ScenarioError(path + "/state", "expected \"off\", \"single-photon\", or {\"coherent\": ...}");
    } else if (state.is_object() && state.contains("coherent")) {
        u.kind = UserSpec::Kind::coherent;
        u.alpha = parse_complex(require(state["coherent"], "alpha", path + "/state/coherent"),
                                path + "/state/coherent/alpha");
    } else {
        throw ScenarioError(path + "/state", "expected \"off\", \"single-photon\", or {\"coherent\": ...}");
    }
    const json& code = require(j, "code", path);
    if (code.contains("chips")) {
        const json& chips = code["chips"];
        if (!chips.is_array() || chips.empty()) throw ScenarioError(path + "/code/chips", "expected a +1/-1 array");
        std::vector<int> v;
        for (const auto& c : chips) {
            if (!c.is_number_integer() || (c.get<int>() != 1 && c.get<int>() != -1))
                throw ScenarioError(path + "/code/chips", "chips must be +1 or -1");
            v.push_back(c.get<int>());
        }
        u.explicit_code = std::move(v);
    } else if (code.contains("seed")) {
        if (!code["seed"].is_number_unsigned()) throw ScenarioError(path + "/code/seed", "expected an unsigned integer");
        u.code_seed = code["seed"].get<std::uint64_t>();
        u.balanced_code = code.value("balanced", false);
    } else {
        throw ScenarioError(path + "/code", "expected {\"seed\": n} or {\"chips\": [...]}");
    }
    return u;
}

FilterSpec parse_filter(const json& j, std::size_t n_c, const std::string& path) {
    FilterSpec f;
    const std::string mode = require(j, "mode", path).get<std::string>();
    if (mode == "all-pass") {
        f.mode = FilterSpec::Mode::all_pass;
        return f;
    }
    if (mode == "windowed")
        f.mode = FilterSpec::Mode::windowed;
    else if (mode == "grid-complementary")
        f.mode = FilterSpec::Mode::grid_complementary;
    else
        throw ScenarioError(path + "/mode", "expected all-pass, windowed, or grid-complementary");
    f.taps = require_count(j, "taps", path);
    const json& bw = require(j, "bandwidth", path);
    if (bw.contains("cycles_per_chip"))
        f.bandwidth_cycles_per_chip = bw["cycles_per_chip"].get<double>();
    else if (bw.contains("signal_multiples"))
        f.bandwidth_cycles_per_chip = bw["signal_multiples"].get<double>() / static_cast<double>(n_c);
    else
        throw ScenarioError(path + "/bandwidth", "expected cycles_per_chip or signal_multiples");
    if (!(f.bandwidth_cycles_per_chip > 0.0) || f.bandwidth_cycles_per_chip > 0.5)
        throw ScenarioError(path + "/bandwidth", "resolved bandwidth must lie in (0, 0.5] cycles per chip");
    if (j.contains("window")) {
        const std::string w = j["window"].get<std::string>();
        if (w == "hamming")
            f.options.window = Window::hamming;
        else if (w == "hann")
            f.options.window = Window::hann;
        else if (w == "blackman")
            f.options.window = Window::blackman;
        else if (w == "rectangular")
            f.options.window = Window::rectangular;
        else
            throw ScenarioError(path + "/window", "unknown window");
    }
    if (j.contains("grid_size")) f.options.grid_size = j["grid_size"].get<std::size_t>();
    if (j.contains("measure_grid")) f.options.measure_grid_size = j["measure_grid"].get<std::size_t>();
    if (j.contains("headroom")) f.options.headroom = j["headroom"].get<double>();
    if (j.contains("calibrate_3db")) f.options.calibrate_3db = j["calibrate_3db"].get<bool>();
    return f;
}

}  // namespace

SpreadingCode Scenario::code_for(std::size_t s) const {
    const UserSpec& u = users.at(s);
    if (u.explicit_code) return SpreadingCode(*u.explicit_code);
    return u.balanced_code ? SpreadingCode::balanced_random(n_c, u.code_seed)
                           : SpreadingCode::random(n_c, u.code_seed);
}

BroadcastMatrix Scenario::build_coupler() const {
    if (!balanced_coupler) return BroadcastMatrix::from_entries(user_count, coupler_entries);
    return user_count == 2 ? BroadcastMatrix::balanced_two_user() : BroadcastMatrix::balanced(user_count);
}

FilterPair Scenario::build_filter() const {
    switch (filter.mode) {
        case FilterSpec::Mode::all_pass: return FilterPair::all_pass();
        case FilterSpec::Mode::windowed:
            return FilterPair::design_windowed(n_c, filter.taps, filter.bandwidth_cycles_per_chip, filter.options);
        case FilterSpec::Mode::grid_complementary:
            return FilterPair::design_grid_complementary(n_c, filter.taps, filter.bandwidth_cycles_per_chip,
                                                         filter.options);
    }
    throw ScenarioError("/filter/mode", "unknown mode");
}

namespace {

Scenario parse_scenario_checked(const json& j);

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ScenarioError("/", std::string("not valid JSON: ") + e.what());
    }
    try {
        return parse_scenario_checked(j);
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        // wrong JSON value types surface from the library; keep exit-code 2 semantics
        throw ScenarioError("/", std::string("malformed field: ") + e.what());
    }
}

namespace {

Scenario parse_scenario_checked(const json& j) {
    Scenario sc;
    const json& system = require(j, "system", "");
    sc.user_count = require_count(system, "users", "/system");
    sc.n_c = require_count(system, "chips", "/system");
    sc.t_p = require_number(system, "pulse_duration", "/system");
    if (!(sc.t_p > 0.0)) throw ScenarioError("/system/pulse_duration", "must be positive");

    const json& coupler = require(system, "coupler", "/system");
    if (coupler.is_string() && coupler.get<std::string>() == "balanced") {
        sc.balanced_coupler = true;
    } else if (coupler.is_object() && coupler.contains("matrix")) {
        sc.balanced_coupler = false;
        const json& rows = coupler["matrix"];
        if (!rows.is_array() || rows.size() != sc.user_count)
            throw ScenarioError("/system/coupler/matrix", "expected users x users rows");
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!rows[r].is_array() || rows[r].size() != sc.user_count)
                throw ScenarioError("/system/coupler/matrix", "expected users x users rows");
            for (std::size_t s = 0; s < rows[r].size(); ++s)
                sc.coupler_entries.push_back(
                    parse_complex(rows[r][s], "/system/coupler/matrix/" + std::to_string(r)));
        }
    } else {
        throw ScenarioError("/system/coupler", "expected \"balanced\" or {\"matrix\": [...]}");
    }

    const json& users = require(j, "users", "");
    if (!users.is_array() || users.size() != sc.user_count)
        throw ScenarioError("/users", "expected exactly system.users entries");
    for (std::size_t s = 0; s < users.size(); ++s)
        sc.users.push_back(parse_user(users[s], "/users/" + std::to_string(s)));
    for (std::size_t s = 0; s < sc.users.size(); ++s)
        if (sc.users[s].explicit_code && sc.users[s].explicit_code->size() != sc.n_c)
            throw ScenarioError("/users/" + std::to_string(s) + "/code/chips", "length must equal system.chips");

    sc.filter = parse_filter(require(j, "filter", ""), sc.n_c, "/filter");

    if (j.contains("run")) {
        const json& run = j["run"];
        if (run.contains("receivers"))
            for (const auto& r : run["receivers"]) {
                const auto idx = r.get<std::size_t>();
                if (idx >= sc.user_count) throw ScenarioError("/run/receivers", "receiver index out of range");
                sc.run.receivers.push_back(idx);
            }
        if (run.contains("n_max")) sc.run.n_max = run["n_max"].get<int>();
        if (run.contains("max_engine_modes")) sc.run.max_engine_modes = run["max_engine_modes"].get<std::size_t>();
        if (run.contains("seeds"))
            for (const auto& s : run["seeds"]) sc.run.seeds.push_back(s.get<std::uint64_t>());
    }
    if (sc.run.receivers.empty())
        for (std::size_t r = 0; r < sc.user_count; ++r) sc.run.receivers.push_back(r);

    // A scenario mixing wave-like and particle-like transmitters has no
    // closed form and no exact-engine support for the coherent part.
    bool any_coherent = false, any_photon = false;
    for (const auto& u : sc.users) {
        any_coherent |= u.kind == UserSpec::Kind::coherent;
        any_photon |= u.kind == UserSpec::Kind::single_photon;
    }
    if (any_coherent && any_photon)
        throw ScenarioError("/users", "coherent and single-photon transmitters cannot be mixed in one run");
    return sc;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ScenarioError("/", "cannot open scenario file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scenario(ss.str());
}

namespace {

json complex_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

json code_json(const SpreadingCode& code) {
    json a = json::array();
    for (int c : code.chips()) a.push_back(c);
    return a;
}

Artifact coefficients_csv(const std::string& name, const CoefficientSeries& series, const FilterPair& fp) {
    const std::size_t rows = std::max(series.d.size(), series.f.size());
    textio::CsvColumn q{"q", {}}, dr{"re_D", {}}, di{"im_D", {}}, fr{"re_F", {}}, fi{"im_F", {}};
    for (std::size_t i = 0; i < rows; ++i) {
        q.values.push_back(static_cast<double>(i));
        dr.values.push_back(i < series.d.size() ? series.d[i].real() : 0.0);
        di.values.push_back(i < series.d.size() ? series.d[i].imag() : 0.0);
        fr.values.push_back(i < series.f.size() ? series.f[i].real() : 0.0);
        fi.values.push_back(i < series.f.size() ? series.f[i].imag() : 0.0);
    }
    return {name, textio::csv({{"q_delay", std::to_string(fp.q_delay())},
                               {"unitarity_defect", textio::g17(fp.unitarity_defect())}},
                              {q, dr, di, fr, fi})};
}

Artifact intensity_csv(const std::string& name, const std::vector<double>& photons_per_chip,
                       const ChipGrid& grid) {
    textio::CsvColumn t{"t_over_tc", {}}, ts{"t_seconds", {}}, per_s{"photons_per_second", {}},
        per_chip{"photons_per_chip", {}};
    const double rate = static_cast<double>(grid.chip_count) / grid.pulse_duration;
    for (std::size_t q = 0; q < photons_per_chip.size(); ++q) {
        t.values.push_back(static_cast<double>(q));
        ts.values.push_back(static_cast<double>(q) * grid.chip_duration());
        per_s.values.push_back(photons_per_chip[q] * rate);
        per_chip.values.push_back(photons_per_chip[q]);
    }
    return {name, textio::csv({{"chip_duration_seconds", textio::g17(grid.chip_duration())}},
                              {t, ts, per_s, per_chip})};
}

std::vector<Artifact> run_coherent(const Scenario& sc, const ChipGrid& grid, const BroadcastMatrix& coupler,
                                   const FilterPair& fp) {
    std::vector<Artifact> out;
    std::vector<CoherentUser> users;
    for (std::size_t s = 0; s < sc.user_count; ++s)
        users.push_back({sc.users[s].kind == UserSpec::Kind::coherent, sc.users[s].alpha, sc.code_for(s)});

    for (std::size_t r : sc.run.receivers) {
        CoherentScenario cs{grid, coupler, fp, users, r};
        const CoherentOutput o = propagate(cs);
        std::vector<double> per_chip(o.segment_amplitudes.size());
        for (std::size_t q = 0; q < per_chip.size(); ++q) per_chip[q] = intensity_per_chip(o, q);
        out.push_back(intensity_csv("receiver" + std::to_string(r) + "_intensity.csv", per_chip, grid));

        const auto stats = photon_statistics(o, PoissonMeanConvention::total_energy);
        json stats_json;
        stats_json["receiver"] = r;
        stats_json["kind"] = "coherent";
        stats_json["pmf_convention"] = "total_energy";
        stats_json["mean_total_energy"] = o.mean_total_energy();
        stats_json["mean_mode_projected"] = o.mean_mode_projected();
        stats_json["pmf"] = stats.pmf_prefix();
        out.push_back({"receiver" + std::to_string(r) + "_photon_stats.json", stats_json.dump(2) + "\n"});

        for (std::size_t s = 0; s < sc.user_count; ++s) {
            if (!users[s].on) continue;
            const auto series = coded_coefficients(fp, users[s].code, users[r].code);
            out.push_back(coefficients_csv(
                "coefficients_s" + std::to_string(s) + "_r" + std::to_string(r) + ".csv", series, fp));
        }
    }
    return out;
}

std::vector<Artifact> run_two_user_photon(const Scenario& sc, const ChipGrid& grid,
                                          const BroadcastMatrix& coupler, const FilterPair& fp) {
    std::vector<Artifact> out;
    const SpreadingCode code0 = sc.code_for(0), code1 = sc.code_for(1);
    const bool on0 = sc.users[0].kind == UserSpec::Kind::single_photon;
    const bool on1 = sc.users[1].kind == UserSpec::Kind::single_photon;
    const auto coeffs = filtered_coefficients(code0, code1, fp);

    json report;
    report["codes"] = {code_json(code0), code_json(code1)};
    report["active_users"] = json::array();
    if (on0) report["active_users"].push_back(0);
    if (on1) report["active_users"].push_back(1);
    report["correlation"] = coeffs.correlation;
    report["transmission_energy_matched"] = coeffs.big_d;
    report["transmission_energy_cross"] = coeffs.big_d01;
    report["residual_dd"] = coeffs.residual_dd;
    report["residual_ff"] = coeffs.residual_ff;
    report["coefficients"] = {
        {"c_1p1", coeffs.c_1p1},   {"c_0", coeffs.c_0}, {"c_1k", coeffs.c_1k}, {"c_dd", coeffs.c_dd},
        {"c_fqd", coeffs.c_fqd},   {"c_fd", coeffs.c_fd}, {"c_d1k", coeffs.c_d1k}, {"c_f0k", coeffs.c_f0k},
        {"c_d", coeffs.c_d},       {"c_f", coeffs.c_f}, {"c_ff", coeffs.c_ff}, {"cc_0", coeffs.cc_0},
    };
    const auto exact = exact_pmf(coeffs);
    report["exact_pmf_both_on"] = {exact[0], exact[1], exact[2]};
    report["exact_pmf_sum"] = exact[0] + exact[1] + exact[2];
    const ActiveSet active = on0 && on1 ? ActiveSet::both
                            : on0       ? ActiveSet::user0
                            : on1       ? ActiveSet::user1
                                        : ActiveSet::none;
    const auto approx = approximate_pmf(active, coeffs.big_d, coeffs.big_d01);
    report["approximate_pmf"] = {approx[0], approx[1], approx[2]};
    out.push_back({"twouser_report.json", report.dump(2) + "\n"});

    std::vector<int> photons{on0 ? 1 : 0, on1 ? 1 : 0};
    for (std::size_t r : sc.run.receivers) {
        const SpreadingCode& decode = r == 0 ? code0 : code1;
        std::vector<CoefficientSeries> per_user{coded_coefficients(fp, code0, decode),
                                                coded_coefficients(fp, code1, decode)};
        std::size_t support = 0;
        for (const auto& s : per_user) support = std::max(support, s.d.size());
        std::vector<double> per_chip(support, 0.0);
        for (std::size_t q = 0; q < support; ++q)
            per_chip[q] = number_state_intensity_per_chip(coupler, per_user, photons, r, q);
        out.push_back(intensity_csv("receiver" + std::to_string(r) + "_intensity.csv", per_chip, grid));

        json stats;
        stats["receiver"] = r;
        stats["kind"] = "single-photon";
        stats["route"] = "closed-form-two-user";
        if (on0 && on1) {
            const auto c = r == 0 ? coeffs : filtered_coefficients(code1, code0, fp);
            const auto pmf = exact_pmf(c);
            stats["pmf"] = {pmf[0], pmf[1], pmf[2]};
        } else if (on0 || on1) {
            const std::size_t s = on0 ? 0 : 1;
            const auto& series = per_user[s];
            const double p1 = 0.5 * series.total_d_energy();
            const double p0 = 0.5 * (1.0 + series.total_f_energy());
            stats["pmf"] = {p0, p1};
        } else {
            stats["pmf"] = {1.0};
        }
        out.push_back({"receiver" + std::to_string(r) + "_photon_stats.json", stats.dump(2) + "\n"});

        for (std::size_t s = 0; s < 2; ++s) {
            if (!photons[s]) continue;
            out.push_back(coefficients_csv(
                "coefficients_s" + std::to_string(s) + "_r" + std::to_string(r) + ".csv", per_user[s], fp));
        }
    }
    return out;
}

std::vector<Artifact> run_engine_photon(const Scenario& sc, const ChipGrid& grid,
                                        const BroadcastMatrix& coupler, const FilterPair& fp) {
    std::vector<Artifact> out;
    const std::size_t m = sc.user_count;
    int active = 0;
    for (const auto& u : sc.users) active += u.kind == UserSpec::Kind::single_photon;
    if (active > sc.run.n_max)
        throw CapacityError("exact engine photon cap exceeded: " + std::to_string(active) +
                            " photons > run.n_max = " + std::to_string(sc.run.n_max));
    const std::size_t segments = (fp.transmission_taps().size() + sc.n_c - 1) +
                                 (fp.reflection_taps().size() + sc.n_c - 1);
    const std::size_t modes = m * segments;
    if (modes > sc.run.max_engine_modes)
        throw CapacityError(
            "exact engine mode cap exceeded: " + std::to_string(modes) + " output modes > run.max_engine_modes = " +
            std::to_string(sc.run.max_engine_modes) +
            " (memory grows with modes^photons; raise run.max_engine_modes or use a shorter filter)");

    std::vector<SpreadingCode> codes;
    for (std::size_t s = 0; s < m; ++s) codes.push_back(sc.code_for(s));

    FockState st = FockState::vacuum(sc.run.n_max);
    std::vector<ModeLabel> mode_list;
    std::vector<cplx> weights;
    for (std::size_t s = 0; s < m; ++s) {
        if (sc.users[s].kind != UserSpec::Kind::single_photon) continue;
        mode_list.clear();
        weights.clear();
        for (std::uint32_t k = 0; k < sc.n_c; ++k) {
            mode_list.push_back(ModeLabel::chip(static_cast<std::uint16_t>(s), k));
            weights.emplace_back(1.0 / std::sqrt(static_cast<double>(sc.n_c)), 0.0);
        }
        st = st.tensor_product(FockState::number_state(mode_list, weights, 1, sc.run.n_max));
    }
    for (std::size_t s = 0; s < m; ++s)
        if (sc.users[s].kind == UserSpec::Kind::single_photon)
            st = st.apply_code(codes[s], static_cast<std::uint16_t>(s));
    st = st.apply_linear_map(broadcast_map(coupler, sc.n_c));
    for (std::size_t r = 0; r < m; ++r) st = st.apply_code(codes[r], static_cast<std::uint16_t>(r), true);
    st = st.apply_linear_map(filter_map(fp, m, sc.n_c));

    std::vector<int> photons(m, 0);
    for (std::size_t s = 0; s < m; ++s) photons[s] = sc.users[s].kind == UserSpec::Kind::single_photon ? 1 : 0;

    for (std::size_t r : sc.run.receivers) {
        const auto pmf = st.photon_distribution([r](const ModeLabel& mode) {
            return mode.stage == ModeLabel::Stage::filtered && mode.party == r &&
                   mode.port == ModeLabel::Port::transmitted;
        });
        json stats;
        stats["receiver"] = r;
        stats["kind"] = "single-photon";
        stats["route"] = "exact-engine";
        stats["pmf"] = pmf;
        out.push_back({"receiver" + std::to_string(r) + "_photon_stats.json", stats.dump(2) + "\n"});

        std::vector<CoefficientSeries> per_user;
        for (std::size_t s = 0; s < m; ++s) per_user.push_back(coded_coefficients(fp, codes[s], codes[r]));
        std::size_t support = 0;
        for (const auto& series : per_user) support = std::max(support, series.d.size());
        std::vector<double> per_chip(support, 0.0);
        for (std::size_t q = 0; q < support; ++q)
            per_chip[q] = number_state_intensity_per_chip(coupler, per_user, photons, r, q);
        out.push_back(intensity_csv("receiver" + std::to_string(r) + "_intensity.csv", per_chip, grid));
    }
    return out;
}

}  // namespace

std::vector<Artifact> design_filter_artifacts(const Scenario& sc) {
    const FilterPair fp = sc.build_filter();
    std::vector<Artifact> out;

    const auto& d = fp.transmission_taps();
    const auto& f = fp.reflection_taps();
    const std::size_t rows = std::max(d.size(), f.size());
    textio::CsvColumn l{"l", {}}, dr{"re_d", {}}, di{"im_d", {}}, fr{"re_f", {}}, fi{"im_f", {}};
    for (std::size_t i = 0; i < rows; ++i) {
        l.values.push_back(static_cast<double>(i));
        dr.values.push_back(i < d.size() ? d[i].real() : 0.0);
        di.values.push_back(i < d.size() ? d[i].imag() : 0.0);
        fr.values.push_back(i < f.size() ? f[i].real() : 0.0);
        fi.values.push_back(i < f.size() ? f[i].imag() : 0.0);
    }
    out.push_back({"filter_taps.csv",
                   textio::csv({{"mode", fp.mode()},
                                {"taps", std::to_string(sc.filter.taps)},
                                {"bandwidth_cycles_per_chip", textio::g17(sc.filter.bandwidth_cycles_per_chip)},
                                {"q_delay", std::to_string(fp.q_delay())},
                                {"tap_scale", textio::g17(fp.tap_scale())},
                                {"unitarity_defect", textio::g17(fp.unitarity_defect())}},
                               {l, dr, di, fr, fi})});

    const std::size_t points = 2048;
    textio::CsvColumn omega{"omega_tc_over_pi", {}}, ht2{"abs_HT_squared", {}}, hr2{"abs_HR_squared", {}};
    for (std::size_t i = 0; i <= points; ++i) {
        const double w = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(points);
        omega.values.push_back(w);
        ht2.values.push_back(std::norm(fp.transmission_response(w * 3.14159265358979323846)));
        hr2.values.push_back(std::norm(fp.reflection_response(w * 3.14159265358979323846)));
    }
    out.push_back({"filter_response.csv",
                   textio::csv({{"unitarity_defect", textio::g17(fp.unitarity_defect())}}, {omega, ht2, hr2})});
    return out;
}

std::vector<Artifact> run_artifacts(const Scenario& sc) {
    const ChipGrid grid = sc.build_grid();
    const BroadcastMatrix coupler = sc.build_coupler();
    const FilterPair fp = sc.build_filter();

    bool any_coherent = false, any_photon = false;
    for (const auto& u : sc.users) {
        any_coherent |= u.kind == UserSpec::Kind::coherent;
        any_photon |= u.kind == UserSpec::Kind::single_photon;
    }
    if (any_photon) {
        if (sc.user_count == 2 && sc.balanced_coupler) return run_two_user_photon(sc, grid, coupler, fp);
        return run_engine_photon(sc, grid, coupler, fp);
    }
    return run_coherent(sc, grid, coupler, fp);
}

void write_artifacts(const std::string& directory, const std::vector<Artifact>& artifacts) {
    std::filesystem::create_directories(directory);
    for (const auto& a : artifacts) textio::write_file((std::filesystem::path(directory) / a.name).string(), a.contents);
}

}  // namespace qcdma
