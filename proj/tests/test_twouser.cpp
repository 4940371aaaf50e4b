#include <stdexcept>
#include <cmath>
#include <complex>
#include <numeric>

#include "doctest.h"
#include "qcdma/codes.hpp"
#include "qcdma/filter.hpp"
#include "qcdma/twouser.hpp"

using qcdma::ActiveSet;
using qcdma::cplx;
using qcdma::FilterPair;
using qcdma::SpreadingCode;

TEST_CASE("identical codes collapse the decoded mixture") {
    const auto code = SpreadingCode::random(8, 1);
    const auto w = qcdma::decoded_mixture(code, code);
    CHECK(w.two_photon == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w.vacuum == doctest::Approx(0.5).epsilon(1e-15));
    for (double v : w.one_photon_k) CHECK(v == 0.0);
    CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("orthogonal codes give the quarter/quarter/uniform mixture") {
    const auto c0 = SpreadingCode({1, 1, 1, 1});
    const auto c1 = SpreadingCode({1, 1, -1, -1});
    REQUIRE(qcdma::correlation(c0, c1) == 0.0);
    const auto w = qcdma::decoded_mixture(c0, c1);
    CHECK(w.two_photon == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(w.vacuum == doctest::Approx(0.25).epsilon(1e-15));
    for (double v : w.one_photon_k) CHECK(v == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
    CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mixture weights always sum to one") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const std::size_t n_c = 2 + seed % 9;
        const auto w = qcdma::decoded_mixture(SpreadingCode::random(n_c, seed),
                                              SpreadingCode::random(n_c, seed + 99));
        CHECK(std::abs(w.sum() - 1.0) <= 1e-12);
        for (double v : w.one_photon_k) CHECK(v >= 0.0);
    }
}

TEST_CASE("matched-only transmission through the all-pass filter") {
    const auto code = SpreadingCode::random(8, 5);
    const auto c = qcdma::filtered_coefficients(code, code, FilterPair::all_pass());
    CHECK(c.big_d == doctest::Approx(1.0).epsilon(1e-14));
    const auto pmf = qcdma::approximate_pmf(ActiveSet::user0, c.big_d, c.big_d01);
    CHECK(pmf[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(pmf[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("exact pmf sums to one whenever the filter pair is exact") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::size_t n_c = 4 + 4 * (seed % 3);
        const auto fp = FilterPair::design_grid_complementary(n_c, 9, 1.0 / static_cast<double>(n_c),
                                                              {.grid_size = 2048});
        const auto c = qcdma::filtered_coefficients(SpreadingCode::random(n_c, seed),
                                                    SpreadingCode::random(n_c, seed + 7), fp);
        const auto pmf = qcdma::exact_pmf(c);
        CHECK(std::abs(pmf[0] + pmf[1] + pmf[2] - 1.0) <= 1e-9);
        for (double p : pmf) CHECK(p >= 0.0);
    }
}

// Algebraic identity behind the random-phase shortcut: the pair weight
// equals 1/4 (sum|A|^2)(sum|B|^2) + 1/4 |sum A conj(B)|^2 for any series.
TEST_CASE("pair-weight closed form holds for complex taps") {
    const std::vector<cplx> d{cplx(0.4, 0.1), cplx(0.3, -0.2), cplx(0.1, 0.05)};
    const std::vector<cplx> f{cplx(0.2, 0.3), cplx(-0.1, 0.1), cplx(0.0, -0.25)};
    const auto fp = FilterPair::from_taps(d, f, 1);
    const std::size_t n_c = 4;
    const auto c0 = SpreadingCode::random(n_c, 13);
    const auto c1 = SpreadingCode::random(n_c, 14);
    const auto c = qcdma::filtered_coefficients(c0, c1, fp);
    const auto plain = qcdma::plain_coefficients(fp, n_c);
    const auto cross = qcdma::coded_coefficients(fp, c0, c1);
    cplx dot(0.0);
    for (std::size_t q = 0; q < plain.d.size(); ++q) dot += cross.d[q] * std::conj(plain.d[q]);
    const double expected = 0.25 * plain.total_d_energy() * cross.total_d_energy() + 0.25 * std::norm(dot);
    CHECK(c.c_dd == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("random-phase approximation quality is reported, not assumed") {
    const std::size_t n_c = 32;
    const auto fp = FilterPair::design_grid_complementary(n_c, 17, 1.0 / n_c, {.grid_size = 2048});
    const auto c = qcdma::filtered_coefficients(SpreadingCode::random(n_c, 23),
                                                SpreadingCode::random(n_c, 24), fp);
    // deviation of c_dd from the approximation is exactly the dropped term,
    // bounded by the reported residual
    CHECK(std::abs(c.c_dd - 0.25 * c.big_d * c.big_d01) <= 0.25 * c.residual_dd * c.residual_dd + 1e-9);
}

TEST_CASE("approximate pmf cases") {
    CHECK(qcdma::approximate_pmf(ActiveSet::none, 0.9, 0.1) == std::array<double, 3>{1.0, 0.0, 0.0});
    const auto p0 = qcdma::approximate_pmf(ActiveSet::user0, 0.9, 0.1);
    CHECK(p0[0] == doctest::Approx(1.0 - 0.45));
    CHECK(p0[1] == doctest::Approx(0.45));
    const auto p1 = qcdma::approximate_pmf(ActiveSet::user1, 0.9, 0.2);
    CHECK(p1[1] == doctest::Approx(0.1));
    const auto pb = qcdma::approximate_pmf(ActiveSet::both, 0.9, 0.2);
    CHECK(pb[0] + pb[1] + pb[2] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pb[2] == doctest::Approx(0.045));
}

// At the production scale the reflection-free approximation stays within a
// couple of percent of the exact statistics in total variation.
TEST_CASE("approximation error at production scale") {
    const std::size_t n_c = 100;
    const auto fp = FilterPair::design_grid_complementary(n_c, 101, 1.0 / static_cast<double>(n_c));
    const auto c = qcdma::filtered_coefficients(SpreadingCode::random(n_c, 31),
                                                SpreadingCode::random(n_c, 32), fp);
    const auto exact = qcdma::exact_pmf(c);
    const auto approx = qcdma::approximate_pmf(ActiveSet::both, c.big_d, c.big_d01);
    double tv = 0.0;
    for (std::size_t n = 0; n < 3; ++n) tv += 0.5 * std::abs(exact[n] - approx[n]);
    CHECK(tv <= 0.02);
    CHECK(std::abs(exact[0] + exact[1] + exact[2] - 1.0) <= 1e-9);
}

TEST_CASE("length mismatch is rejected") {
    CHECK_THROWS_AS(qcdma::decoded_mixture(SpreadingCode::random(4, 1), SpreadingCode::random(8, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(qcdma::filtered_coefficients(SpreadingCode::random(4, 1), SpreadingCode::random(8, 1),
                                                 FilterPair::all_pass()),
                    std::invalid_argument);
}

#include "qcdma/channel.hpp"
#include "qcdma/fock.hpp"

namespace {

// Inline engine route: two encoded single photons through the balanced
// coupler, decoded at both receivers.
qcdma::FockState engine_decoded(const SpreadingCode& c0, const SpreadingCode& c1) {
    using qcdma::FockState;
    using qcdma::ModeLabel;
    const std::size_t n_c = c0.length();
    std::vector<ModeLabel> m0, m1;
    std::vector<cplx> w(n_c, cplx(1.0 / std::sqrt(static_cast<double>(n_c)), 0.0));
    for (std::uint32_t k = 0; k < n_c; ++k) {
        m0.push_back(ModeLabel::chip(0, k));
        m1.push_back(ModeLabel::chip(1, k));
    }
    auto st = FockState::number_state(m0, w, 1, 2).tensor_product(FockState::number_state(m1, w, 1, 2));
    st = st.apply_code(c0, 0).apply_code(c1, 1);
    st = st.apply_linear_map(qcdma::broadcast_map(qcdma::BroadcastMatrix::balanced_two_user(), n_c));
    return st.apply_code(c0, 0, true).apply_code(c1, 1, true);
}

}  // namespace

TEST_CASE("explicit short-code mixture matches the engine exactly") {
    const auto c0 = SpreadingCode({1, 1});
    const auto c1 = SpreadingCode({1, -1});
    const auto weights = qcdma::decoded_mixture(c0, c1);
    const auto mix = engine_decoded(c0, c1).partial_trace(
        [](const qcdma::ModeLabel& m) { return m.party == 0; });
    const auto* two = mix.find_traced({});
    REQUIRE(two != nullptr);
    CHECK(std::abs(two->weight - weights.two_photon) <= 1e-12);
    for (std::uint32_t k = 0; k < 2; ++k) {
        const auto* one = mix.find_traced({{qcdma::ModeLabel::chip(1, k), 1}});
        const double w = one ? one->weight : 0.0;
        CHECK(std::abs(w - weights.one_photon_k[k]) <= 1e-12);
    }
    CHECK(std::abs(mix.total_weight() - 1.0) <= 1e-12);
}

TEST_CASE("filtered weights match the engine for a five-tap filter") {
    const std::size_t n_c = 4;
    const auto fp = FilterPair::design_windowed(n_c, 5, 1.0 / static_cast<double>(n_c));
    const auto c0 = SpreadingCode::random(n_c, 101);
    const auto c1 = SpreadingCode::random(n_c, 102);
    const auto coeffs = qcdma::filtered_coefficients(c0, c1, fp);
    const auto filtered = engine_decoded(c0, c1).apply_linear_map(qcdma::filter_map(fp, 1, n_c));
    const auto mix = filtered.partial_trace([](const qcdma::ModeLabel& m) {
        return m.stage == qcdma::ModeLabel::Stage::filtered && m.party == 0 &&
               m.port == qcdma::ModeLabel::Port::transmitted;
    });
    const auto pmf = mix.photon_distribution(
        [](const qcdma::ModeLabel& m) { return m.port == qcdma::ModeLabel::Port::transmitted; });
    const auto closed = qcdma::exact_pmf(coeffs);
    for (std::size_t n = 0; n < 3; ++n)
        CHECK(std::abs((n < pmf.size() ? pmf[n] : 0.0) - closed[n]) <= 1e-9);
    const auto* dd = mix.find_traced({});
    CHECK(std::abs((dd ? dd->weight : 0.0) - coeffs.c_dd) <= 1e-9);
}
