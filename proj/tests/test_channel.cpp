#include <stdexcept>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "qcdma/channel.hpp"

using qcdma::BroadcastMatrix;
using cplx = std::complex<double>;

TEST_CASE("two-user balanced coupler is the fixed real matrix") {
    const auto b = BroadcastMatrix::balanced_two_user();
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(b.at(0, 0) == cplx(s));
    CHECK(b.at(0, 1) == cplx(s));
    CHECK(b.at(1, 0) == cplx(-s));
    CHECK(b.at(1, 1) == cplx(s));
    CHECK(b.unitarity_error() < 1e-15);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) CHECK(std::norm(b.at(r, c)) == doctest::Approx(0.5).epsilon(1e-15));
}

// Matrix-power oracle: applying the coupler twice rotates the plane by 90
// degrees, and that rotation has period four.
TEST_CASE("coupler squared is a quarter turn") {
    const auto b = BroadcastMatrix::balanced_two_user();
    const auto b2 = b.multiply(b);
    CHECK(std::abs(b2.at(0, 0)) < 1e-15);
    CHECK(std::abs(b2.at(0, 1) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(b2.at(1, 0) - cplx(-1.0)) < 1e-15);
    CHECK(std::abs(b2.at(1, 1)) < 1e-15);
    auto pow = b2;
    for (int i = 0; i < 3; ++i) pow = pow.multiply(b2);
    CHECK(std::abs(pow.at(0, 0) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(pow.at(0, 1)) < 1e-14);
    CHECK(std::abs(pow.at(1, 1) - cplx(1.0)) < 1e-14);
}

TEST_CASE("balanced couplers of general size") {
    const auto b1 = BroadcastMatrix::balanced(1);
    CHECK(b1.at(0, 0) == cplx(1.0));
    CHECK(BroadcastMatrix::balanced(2).unitarity_error() < 1e-14);
    const auto b4 = BroadcastMatrix::balanced(4);
    CHECK(b4.unitarity_error() < 1e-14);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t s = 0; s < 4; ++s) CHECK(std::norm(b4.at(r, s)) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(BroadcastMatrix::balanced(0), std::invalid_argument);
}

TEST_CASE("explicit matrices are validated") {
    CHECK_THROWS_AS(BroadcastMatrix::from_entries(2, {cplx(1), cplx(0), cplx(0), cplx(2)}), std::invalid_argument);
    CHECK_THROWS_AS(BroadcastMatrix::from_entries(2, {cplx(1), cplx(0)}), std::invalid_argument);
    const auto ok = BroadcastMatrix::from_entries(2, {cplx(0), cplx(1), cplx(1), cplx(0)});
    CHECK(ok.unitarity_error() < 1e-15);
}

TEST_CASE("broadcast application") {
    const auto id = BroadcastMatrix::balanced(1);
    const std::vector<cplx> in{cplx(0.3, -0.7)};
    CHECK(id.apply(in)[0] == in[0]);

    const auto b = BroadcastMatrix::balanced_two_user();
    const std::vector<cplx> single{cplx(1.0), cplx(0.0)};
    const auto out = b.apply(single);
    CHECK(std::abs(out[0] - cplx(1.0 / std::sqrt(2.0))) < 1e-15);
    CHECK(std::abs(out[1] + cplx(1.0 / std::sqrt(2.0))) < 1e-15);
    CHECK_THROWS_AS(b.apply(in), std::invalid_argument);
}

TEST_CASE("broadcast preserves the norm") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss;
    for (std::size_t m : {2u, 3u, 5u}) {
        const auto b = m == 2 ? BroadcastMatrix::balanced_two_user() : BroadcastMatrix::balanced(m);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<cplx> in(m);
            double norm_in = 0.0;
            for (auto& x : in) {
                x = cplx(gauss(rng), gauss(rng));
                norm_in += std::norm(x);
            }
            double norm_out = 0.0;
            for (const auto& x : b.apply(in)) norm_out += std::norm(x);
            CHECK(std::abs(norm_out - norm_in) <= 1e-12 * std::max(1.0, norm_in));
        }
    }
}
