#include "qcdma/chipgrid.hpp"

#include <cmath>
#include <stdexcept>

namespace qcdma {

ChipGrid::ChipGrid(double pulse_duration_, std::size_t chip_count_)
    : pulse_duration(pulse_duration_), chip_count(chip_count_) {
    if (!(pulse_duration > 0.0)) throw std::invalid_argument("ChipGrid: pulse duration must be positive");
    if (chip_count == 0) throw std::invalid_argument("ChipGrid: chip count must be >= 1");
}

double RectWavepacket::amplitude(double t) const {
    if (t < 0.0 || t >= grid_.pulse_duration) return 0.0;
    return 1.0 / std::sqrt(grid_.pulse_duration);
}

double RectWavepacket::chip_amplitude(std::size_t k, double t) const {
    if (k >= grid_.chip_count) throw std::invalid_argument("RectWavepacket::chip_amplitude: chip index out of range");
    if (t < grid_.boundary(k) || t >= grid_.boundary(k + 1)) return 0.0;
    return std::sqrt(static_cast<double>(grid_.chip_count) / grid_.pulse_duration);
}

std::vector<double> decomposition_weights(std::size_t n_c) {
    if (n_c == 0) throw std::invalid_argument("decomposition_weights: n_c must be >= 1");
    return std::vector<double>(n_c, 1.0 / std::sqrt(static_cast<double>(n_c)));
}

PiecewiseWavepacket::PiecewiseWavepacket(ChipGrid g, std::vector<std::complex<double>> w)
    : grid(g), weights(std::move(w)) {
    if (weights.size() != grid.chip_count)
        throw std::invalid_argument("PiecewiseWavepacket: one weight per chip required");
    double norm2 = 0.0;
    for (const auto& x : weights) norm2 += std::norm(x);
    if (std::abs(norm2 - 1.0) > 1e-9)
        throw std::invalid_argument("PiecewiseWavepacket: weights must have unit norm");
}

bool PiecewiseWavepacket::uniform(double tol) const {
    const double ref = 1.0 / std::sqrt(static_cast<double>(grid.chip_count));
    for (const auto& x : weights)
        if (std::abs(x - std::complex<double>(ref, 0.0)) > tol) return false;
    return true;
}

}  // namespace qcdma
