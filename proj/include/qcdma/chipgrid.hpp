// Time axis, rectangular wavepacket, and chip-time decomposition weights.
#ifndef QCDMA_CHIPGRID_HPP
#define QCDMA_CHIPGRID_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace qcdma {

// Pulse of duration T_p split into N_c equal chips of duration T_c = T_p/N_c.
// All internal computation elsewhere is in units of T_c; T_p enters only
// when intensities are reported in physical units.
struct ChipGrid {
    ChipGrid(double pulse_duration, std::size_t chip_count);

    double pulse_duration;   // T_p, seconds
    std::size_t chip_count;  // N_c

    double chip_duration() const { return pulse_duration / static_cast<double>(chip_count); }
    double boundary(std::size_t k) const { return static_cast<double>(k) * chip_duration(); }
};

// Rectangular wavepacket: amplitude 1/sqrt(T_p) on [0, T_p).  Each chip
// restriction, rescaled by sqrt(N_c), is a unit-norm wavepacket of its own.
class RectWavepacket {
  public:
    explicit RectWavepacket(ChipGrid grid) : grid_(grid) {}

    const ChipGrid& grid() const { return grid_; }

    double amplitude(double t) const;

    // Unit-norm chip wavepacket k evaluated at time t: sqrt(N_c/T_p) on
    // [t_k, t_{k+1}), zero elsewhere.  k out of range is invalid-argument.
    double chip_amplitude(std::size_t k, double t) const;

  private:
    ChipGrid grid_;
};

// Amplitudes of the full-pulse creation operator in the chip basis:
// 1/sqrt(N_c) for every chip, squares summing to one.
std::vector<double> decomposition_weights(std::size_t n_c);

// Per-chip decomposition weights for a general piecewise-constant pulse.
// Only the uniform case may be sent through the filter path; the general
// case exists for the exact-state engine.
struct PiecewiseWavepacket {
    ChipGrid grid;
    std::vector<std::complex<double>> weights;  // |weights|^2 sums to 1

    PiecewiseWavepacket(ChipGrid g, std::vector<std::complex<double>> w);
    bool uniform(double tol = 1e-12) const;
};

}  // namespace qcdma

#endif
