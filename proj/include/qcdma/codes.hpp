// Spreading / despreading sequences and their correlations.
#ifndef QCDMA_CODES_HPP
#define QCDMA_CODES_HPP

#include <cstdint>
#include <vector>

namespace qcdma {

// A +/-1 chip sequence applied by the encoder as per-chip phase flips
// (0 or pi).  Chips are stored as integers, never as floating-point
// phases; the phase view is derived on demand.
class SpreadingCode {
  public:
    explicit SpreadingCode(std::vector<int> chips);

    // Deterministic for a fixed seed: chips are the top bit of successive
    // std::mt19937_64 outputs, i.i.d. uniform on {-1, +1}.
    static SpreadingCode random(std::size_t n_c, std::uint64_t seed);

    // Zero-sum variant for even lengths (exactly n_c/2 chips of each sign,
    // order shuffled by the same generator).
    static SpreadingCode balanced_random(std::size_t n_c, std::uint64_t seed);

    static SpreadingCode all_plus(std::size_t n_c);

    std::size_t length() const { return chips_.size(); }
    int chip(std::size_t k) const { return chips_[k]; }
    double phase(std::size_t k) const;  // 0 or pi
    const std::vector<int>& chips() const { return chips_; }

    bool operator==(const SpreadingCode&) const = default;

  private:
    std::vector<int> chips_;
};

// Normalized correlation (1/N_c) sum_k a_k b_k, in [-1, 1].
double correlation(const SpreadingCode& a, const SpreadingCode& b);

// Per-chip product sequence with entry (1/sqrt(N_c)) encode_q * decode_q,
// the sequence the filter taps are convolved with.
std::vector<double> chip_product(const SpreadingCode& encode, const SpreadingCode& decode);

}  // namespace qcdma

#endif
