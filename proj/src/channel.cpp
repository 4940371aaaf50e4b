#include "qcdma/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcdma {

using cplx = BroadcastMatrix::cplx;

BroadcastMatrix BroadcastMatrix::balanced_two_user() {
    const double s = 1.0 / std::sqrt(2.0);
    return BroadcastMatrix(2, {cplx(s), cplx(s), cplx(-s), cplx(s)});
}

BroadcastMatrix BroadcastMatrix::balanced(std::size_t m) {
    if (m == 0) throw std::invalid_argument("BroadcastMatrix::balanced: m must be >= 1");
    std::vector<cplx> a(m * m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t s = 0; s < m; ++s) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(r * s) / static_cast<double>(m);
            a[r * m + s] = scale * std::polar(1.0, ang);
        }
    return BroadcastMatrix(m, std::move(a));
}

BroadcastMatrix BroadcastMatrix::from_entries(std::size_t m, std::vector<cplx> row_major) {
    if (m == 0 || row_major.size() != m * m)
        throw std::invalid_argument("BroadcastMatrix::from_entries: need m*m entries");
    BroadcastMatrix b(m, std::move(row_major));
    if (b.unitarity_error() > 1e-12)
        throw std::invalid_argument("BroadcastMatrix::from_entries: matrix is not unitary (tolerance 1e-12)");
    return b;
}

double BroadcastMatrix::unitarity_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j) {
            cplx acc = 0.0;
            for (std::size_t r = 0; r < m_; ++r) acc += std::conj(a_[r * m_ + i]) * a_[r * m_ + j];
            if (i == j) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    return worst;
}

std::vector<cplx> BroadcastMatrix::apply(std::span<const cplx> user_amplitudes) const {
    if (user_amplitudes.size() != m_)
        throw std::invalid_argument("BroadcastMatrix::apply: dimension mismatch");
    std::vector<cplx> out(m_, cplx(0.0));
    for (std::size_t r = 0; r < m_; ++r)
        for (std::size_t s = 0; s < m_; ++s) out[r] += a_[r * m_ + s] * user_amplitudes[s];
    return out;
}

BroadcastMatrix BroadcastMatrix::multiply(const BroadcastMatrix& rhs) const {
    if (m_ != rhs.m_) throw std::invalid_argument("BroadcastMatrix::multiply: dimension mismatch");
    std::vector<cplx> out(m_ * m_, cplx(0.0));
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t k = 0; k < m_; ++k)
            for (std::size_t j = 0; j < m_; ++j) out[i * m_ + j] += a_[i * m_ + k] * rhs.a_[k * m_ + j];
    return BroadcastMatrix(m_, std::move(out));
}

}  // namespace qcdma
