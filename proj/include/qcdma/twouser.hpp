// Closed-form receiver analysis for the two-user single-photon system:
// mixture weights after the decoder, all filtered normalization
// coefficients, and the exact and approximate photon statistics.
#ifndef QCDMA_TWOUSER_HPP
#define QCDMA_TWOUSER_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "qcdma/codes.hpp"
#include "qcdma/filter.hpp"

namespace qcdma {

// Weights of the receiver-0 mixture after decoding, before the filter:
// the two-photon component, the vacuum component, and one single-photon
// component per chip.
struct DecodedMixtureWeights {
    double two_photon = 0.0;           // C_(1+1) = 1/4 (1 + corr^2)
    double vacuum = 0.0;               // equals two_photon
    std::vector<double> one_photon_k;  // (1/(2 N_c)) (1 - code0_k code1_k corr)

    double sum() const;
};

DecodedMixtureWeights decoded_mixture(const SpreadingCode& code0, const SpreadingCode& code1);

// Every normalization coefficient of the filtered receiver-0 mixture, plus
// the aggregate transmission energies and the cross-series residuals the
// random-phase approximation assumes are negligible.
struct TwoUserCoefficients {
    double c_1p1 = 0.0;  // pre-filter two-photon weight
    double c_0 = 0.0;    // pre-filter vacuum weight (equals c_1p1)
    std::vector<double> c_1k;

    double c_dd = 0.0;            // both photons transmitted
    std::vector<double> c_fqd;    // one transmitted, one reflected at segment q
    double c_fd = 0.0;            // sum over q of c_fqd
    std::vector<double> c_d1k;    // single arrival at chip k, transmitted
    std::vector<double> c_f0k;    // single arrival at chip k, reflected
    double c_d = 0.0;             // sum over k of c_d1k
    double c_f = 0.0;             // sum over k of c_f0k
    double c_ff = 0.0;            // both photons reflected
    double cc_0 = 0.0;            // c_0 + c_ff + c_f

    double big_d = 0.0;    // sum |D_q|^2
    double big_d01 = 0.0;  // sum |D^{0,1}_q|^2
    double correlation = 0.0;

    // |sum_q D_q D^{0,1}_q| and |sum_q F_q F^{0,1}_q|: the terms the
    // approximate statistics drop.  Reported, never assumed zero.
    double residual_dd = 0.0;
    double residual_ff = 0.0;
};

TwoUserCoefficients filtered_coefficients(const SpreadingCode& code0, const SpreadingCode& code1,
                                          const FilterPair& fp);

// Exact pmf over n in {0,1,2}: (cc_0, c_fd + c_d, c_dd).
std::array<double, 3> exact_pmf(const TwoUserCoefficients& c);

// The reflection-free approximation, by the set of active transmitters.
enum class ActiveSet { none, user0, user1, both };
std::array<double, 3> approximate_pmf(ActiveSet active, double big_d, double big_d01);

}  // namespace qcdma

#endif
