// Two-port quantum filter: tap design, unitarity accounting, and the
// per-segment transmission/reflection coefficient series.
#ifndef QCDMA_FILTER_HPP
#define QCDMA_FILTER_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "qcdma/codes.hpp"

namespace qcdma {

using cplx = std::complex<double>;

enum class Window { rectangular, hamming, hann, blackman };

struct FilterDesignOptions {
    Window window = Window::hamming;
    std::size_t grid_size = 8192;          // frequency grid for complement construction
    std::size_t measure_grid_size = 0;     // 0 -> 2 * max(grid_size, 8192), half-bin offset
    double headroom = 1e-3;                // peak |H_T| pulled to 1 - headroom before complementing
    bool calibrate_3db = true;             // adjust sinc cutoff so |H_T|^2 = 1/2 at the requested bandwidth
};

// Tap sequences (d_l transmission, f_l reflection) of a causal two-port
// filter with delay step tau = T_c.  Energy conservation is never assumed:
// the max deviation from | |H_T|^2 + |H_R|^2 - 1 | and 2|Re(H_T H_R*)| over
// a dense half-bin-offset frequency grid is measured at construction and
// carried along as unitarity_defect.
class FilterPair {
  public:
    // d = (1), f = (0): identity filter, defect exactly zero.
    static FilterPair all_pass();

    // Explicit taps; q_delay is the nominal group delay in chips.
    static FilterPair from_taps(std::vector<cplx> d, std::vector<cplx> f, std::size_t q_delay,
                                std::size_t measure_grid_size = 16384);

    // Type-I (odd-length, linear-phase) windowed-sinc lowpass d with 3-dB
    // bandwidth at `bandwidth_cycles_per_chip`; f is the same window applied
    // to the complementary magnitude response with a +90 degree phase,
    // truncated to the same length.  The defect of this pair is genuinely
    // nonzero and is reported, not assumed away.
    static FilterPair design_windowed(std::size_t n_c, std::size_t taps, double bandwidth_cycles_per_chip,
                                      FilterDesignOptions opts = {});

    // Same passband as design_windowed, but the reflection branch is the
    // full-length inverse transform of j*sqrt(1-|H_T|^2) on the design grid
    // and both ports are aligned to group delay grid_size/2, which makes the
    // two-port identities hold to ~1e-12 between grid points as well.
    static FilterPair design_grid_complementary(std::size_t n_c, std::size_t taps,
                                                double bandwidth_cycles_per_chip,
                                                FilterDesignOptions opts = {});

    const std::vector<cplx>& transmission_taps() const { return d_; }
    const std::vector<cplx>& reflection_taps() const { return f_; }
    std::size_t q_delay() const { return q_delay_; }
    double unitarity_defect() const { return unitarity_defect_; }
    double tap_scale() const { return tap_scale_; }  // applied renormalization, 1 if none
    const std::string& mode() const { return mode_; }

    // H_T, H_R at digital frequency omega_tc = omega * T_c (radians/chip).
    cplx transmission_response(double omega_tc) const;
    cplx reflection_response(double omega_tc) const;

  private:
    FilterPair() = default;
    std::vector<cplx> d_, f_;
    std::size_t q_delay_ = 0;
    double unitarity_defect_ = 0.0;
    double tap_scale_ = 1.0;
    std::string mode_ = "explicit";
};

// Per-output-segment amplitude series: the convolution of the taps with a
// chip product sequence.  d and f parts may have different support lengths.
struct CoefficientSeries {
    std::vector<cplx> d;  // D_q
    std::vector<cplx> f;  // F_q

    double total_d_energy() const;  // sum |D_q|^2
    double total_f_energy() const;
    double total_energy() const { return total_d_energy() + total_f_energy(); }
};

// Matched-code series: taps convolved with the all-ones chip product.
CoefficientSeries plain_coefficients(const FilterPair& fp, std::size_t n_c);

// Taps convolved with chip_product(encode, decode).  Equals
// plain_coefficients when encode == decode.
CoefficientSeries coded_coefficients(const FilterPair& fp, const SpreadingCode& encode,
                                     const SpreadingCode& decode);

// | sum_q (D_q^{s,r*} D_q^{s',r} + F_q^{s,r*} F_q^{s',r}) - <s|s'> |.
// Bounded by unitarity_defect for any code triple; the slack constant
// L * N_c covers rounding on top of that.
double correlation_identity_deviation(const FilterPair& fp, const SpreadingCode& s, const SpreadingCode& s_prime,
                        const SpreadingCode& r);

}  // namespace qcdma

#endif
