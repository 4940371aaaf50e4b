#include "qcdma/coherent.hpp"

#include <cmath>
#include <stdexcept>

namespace qcdma {

double CoherentOutput::mean_total_energy() const {
    double s = 0.0;
    for (const auto& b : segment_amplitudes) s += std::norm(b);
    return s;
}

double CoherentOutput::mean_mode_projected() const {
    cplx s(0.0);
    const std::size_t n_c = grid.chip_count;
    for (std::size_t q = q_delay; q < q_delay + n_c && q < segment_amplitudes.size(); ++q)
        s += segment_amplitudes[q];
    return std::norm(s) / static_cast<double>(n_c);
}

CoherentOutput propagate(const CoherentScenario& sc) {
    const std::size_t m = sc.coupler.size();
    if (sc.users.size() != m) throw std::invalid_argument("propagate: one user per coupler port required");
    if (sc.receiver >= m) throw std::invalid_argument("propagate: receiver index out of range");
    const std::size_t n_c = sc.grid.chip_count;
    for (const auto& u : sc.users)
        if (u.code.length() != n_c) throw std::invalid_argument("propagate: code length != chip count");

    const SpreadingCode& decode = sc.users[sc.receiver].code;
    CoherentOutput out{{}, sc.grid, sc.receiver, sc.filter.q_delay()};
    out.segment_amplitudes.assign(sc.filter.transmission_taps().size() + n_c - 1, cplx(0.0));
    for (std::size_t s = 0; s < m; ++s) {
        const auto& u = sc.users[s];
        if (!u.on || u.alpha == cplx(0.0)) continue;
        // encode with the sender's code, decode with the receiver's; the
        // matched pair collapses to the plain series on its own.
        const auto series = coded_coefficients(sc.filter, u.code, decode);
        const cplx gain = sc.coupler.at(sc.receiver, s) * u.alpha;
        for (std::size_t q = 0; q < series.d.size(); ++q) out.segment_amplitudes[q] += gain * series.d[q];
    }
    return out;
}

double intensity_per_chip(const CoherentOutput& out, std::size_t q) {
    if (q >= out.segment_amplitudes.size()) return 0.0;
    return std::norm(out.segment_amplitudes[q]);
}

double intensity_at(const CoherentOutput& out, double t) {
    if (t < 0.0) return 0.0;
    const double tc = out.grid.chip_duration();
    const auto q = static_cast<std::size_t>(t / tc);
    return intensity_per_chip(out, q) * static_cast<double>(out.grid.chip_count) / out.grid.pulse_duration;
}

double number_state_intensity_per_chip(const BroadcastMatrix& b,
                                       const std::vector<CoefficientSeries>& per_user_series,
                                       const std::vector<int>& photons, std::size_t receiver, std::size_t q) {
    if (per_user_series.size() != b.size() || photons.size() != b.size())
        throw std::invalid_argument("number_state_intensity_per_chip: size mismatch");
    double acc = 0.0;
    for (std::size_t s = 0; s < b.size(); ++s) {
        if (photons[s] == 0) continue;
        const auto& d = per_user_series[s].d;
        if (q >= d.size()) continue;
        acc += photons[s] * std::norm(b.at(receiver, s) * d[q]);
    }
    return acc;
}

double PoissonStatistics::pmf(int n) const {
    if (n < 0) return 0.0;
    double p = std::exp(-mean);
    for (int i = 1; i <= n; ++i) p *= mean / i;
    return p;
}

std::vector<double> PoissonStatistics::pmf_prefix(double tail_bound) const {
    std::vector<double> p;
    double term = std::exp(-mean), cumulative = 0.0;
    int n = 0;
    while (true) {
        p.push_back(term);
        cumulative += term;
        if (1.0 - cumulative < tail_bound && n >= mean) break;
        ++n;
        term *= mean / n;
        if (n > 10000) break;  // mean would have to be absurd
    }
    return p;
}

PoissonStatistics photon_statistics(const CoherentOutput& out, PoissonMeanConvention convention) {
    return {convention == PoissonMeanConvention::total_energy ? out.mean_total_energy()
                                                              : out.mean_mode_projected()};
}

}  // namespace qcdma
