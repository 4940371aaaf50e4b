#include "qcdma/codes.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace qcdma {

SpreadingCode::SpreadingCode(std::vector<int> chips) : chips_(std::move(chips)) {
    if (chips_.empty()) throw std::invalid_argument("SpreadingCode: length must be >= 1");
    for (int c : chips_)
        if (c != 1 && c != -1) throw std::invalid_argument("SpreadingCode: chips must be +1 or -1");
}

SpreadingCode SpreadingCode::random(std::size_t n_c, std::uint64_t seed) {
    if (n_c == 0) throw std::invalid_argument("SpreadingCode::random: n_c must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<int> chips(n_c);
    for (auto& c : chips) c = (rng() >> 63) ? 1 : -1;
    return SpreadingCode(std::move(chips));
}

SpreadingCode SpreadingCode::balanced_random(std::size_t n_c, std::uint64_t seed) {
    if (n_c == 0 || n_c % 2 != 0)
        throw std::invalid_argument("SpreadingCode::balanced_random: n_c must be even and >= 2");
    std::vector<int> chips(n_c);
    for (std::size_t k = 0; k < n_c; ++k) chips[k] = (k < n_c / 2) ? 1 : -1;
    std::mt19937_64 rng(seed);
    for (std::size_t i = n_c - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(chips[i], chips[j]);
    }
    return SpreadingCode(std::move(chips));
}

SpreadingCode SpreadingCode::all_plus(std::size_t n_c) {
    if (n_c == 0) throw std::invalid_argument("SpreadingCode::all_plus: n_c must be >= 1");
    return SpreadingCode(std::vector<int>(n_c, 1));
}

double SpreadingCode::phase(std::size_t k) const {
    return chips_[k] == 1 ? 0.0 : std::numbers::pi;
}

double correlation(const SpreadingCode& a, const SpreadingCode& b) {
    if (a.length() != b.length()) throw std::invalid_argument("correlation: length mismatch");
    long long acc = 0;
    for (std::size_t k = 0; k < a.length(); ++k) acc += a.chip(k) * b.chip(k);
    return static_cast<double>(acc) / static_cast<double>(a.length());
}

std::vector<double> chip_product(const SpreadingCode& encode, const SpreadingCode& decode) {
    if (encode.length() != decode.length()) throw std::invalid_argument("chip_product: length mismatch");
    const double scale = 1.0 / std::sqrt(static_cast<double>(encode.length()));
    std::vector<double> out(encode.length());
    for (std::size_t k = 0; k < encode.length(); ++k)
        out[k] = scale * static_cast<double>(encode.chip(k) * decode.chip(k));
    return out;
}

}  // namespace qcdma
