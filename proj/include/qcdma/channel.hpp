// Broadcasting star-coupler: an M x M unitary acting mode-wise.
#ifndef QCDMA_CHANNEL_HPP
#define QCDMA_CHANNEL_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qcdma {

class BroadcastMatrix {
  public:
    using cplx = std::complex<double>;

    // The real two-user balanced coupler (1/sqrt2) [[1, 1], [-1, 1]].
    static BroadcastMatrix balanced_two_user();

    // Normalized DFT matrix, |B_rs|^2 = 1/m for all entries.
    static BroadcastMatrix balanced(std::size_t m);

    // Explicit matrix, validated unitary to 1e-12.
    static BroadcastMatrix from_entries(std::size_t m, std::vector<cplx> row_major);

    std::size_t size() const { return m_; }
    cplx at(std::size_t r, std::size_t s) const { return a_[r * m_ + s]; }

    // Max |(B^dagger B - I)_{ij}| over all entries.
    double unitarity_error() const;

    // Maps per-user amplitudes to per-receiver amplitudes for one mode.
    std::vector<cplx> apply(std::span<const cplx> user_amplitudes) const;

    BroadcastMatrix multiply(const BroadcastMatrix& rhs) const;

  private:
    BroadcastMatrix(std::size_t m, std::vector<cplx> a) : m_(m), a_(std::move(a)) {}
    std::size_t m_;
    std::vector<cplx> a_;
};

}  // namespace qcdma

#endif
