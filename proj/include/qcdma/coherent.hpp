// Closed-form coherent-state pipeline and the received-intensity formulas.
#ifndef QCDMA_COHERENT_HPP
#define QCDMA_COHERENT_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "qcdma/channel.hpp"
#include "qcdma/chipgrid.hpp"
#include "qcdma/codes.hpp"
#include "qcdma/filter.hpp"

namespace qcdma {

struct CoherentUser {
    bool on = true;
    cplx alpha{1.0, 0.0};
    SpreadingCode code;
};

struct CoherentScenario {
    ChipGrid grid;
    BroadcastMatrix coupler;
    FilterPair filter;
    std::vector<CoherentUser> users;  // size must equal coupler.size()
    std::size_t receiver = 0;         // decodes with users[receiver].code
};

// The output at one receiver's transmitted port stays a product of
// per-segment coherent states; beta_q = sum_s B_{rs} D_q^{s,r} alpha_s.
struct CoherentOutput {
    std::vector<cplx> segment_amplitudes;  // beta_q
    ChipGrid grid;
    std::size_t receiver = 0;
    std::size_t q_delay = 0;  // nominal group delay of the filter, in chips

    // Mean photon count when the detector integrates every output chip
    // independently: sum_q |beta_q|^2.
    double mean_total_energy() const;

    // Mean photon count of the projection onto the nominal recovered
    // wavepacket (uniform 1/sqrt(N_c) over the N_c segments starting at
    // q_delay): |sum_q beta_q / sqrt(N_c)|^2 over that window.  The two
    // conventions differ in general; both are reported, never silently
    // substituted for one another.
    double mean_mode_projected() const;
};

CoherentOutput propagate(const CoherentScenario& sc);

// Photons in output chip q: |beta_q|^2.
double intensity_per_chip(const CoherentOutput& out, std::size_t q);

// Photons/second at time t (piecewise constant per chip): (N_c/T_p)|beta_q|^2.
double intensity_at(const CoherentOutput& out, double t);

// Received intensity for number-state transmitters, photons in chip q:
// sum_s n_s |B_{rs} D_q^{s,r}|^2 (the incoherent counterpart of the above).
double number_state_intensity_per_chip(const BroadcastMatrix& b,
                                       const std::vector<CoefficientSeries>& per_user_series,
                                       const std::vector<int>& photons, std::size_t receiver, std::size_t q);

struct PoissonStatistics {
    double mean = 0.0;
    double pmf(int n) const;
    // pmf values for n = 0.. until the remaining tail is below tail_bound.
    std::vector<double> pmf_prefix(double tail_bound = 1e-12) const;
};

enum class PoissonMeanConvention { total_energy, mode_projected };

PoissonStatistics photon_statistics(const CoherentOutput& out,
                                    PoissonMeanConvention convention = PoissonMeanConvention::total_energy);

}  // namespace qcdma

#endif
