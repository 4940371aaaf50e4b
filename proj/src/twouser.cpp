#include "qcdma/twouser.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qcdma {

namespace {

// 1/4 sum_{q1>q0} |A_{q0} B_{q1} + B_{q0} A_{q1}|^2 + 1/2 sum_q |A_q B_q|^2,
// the weight of "both photons land in the (A,B) pair of series".  Equal
// support is padded implicitly by treating missing entries as zero.
double symmetric_pair_weight(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    const std::size_t n = std::max(a.size(), b.size());
    auto at = [](const std::vector<cplx>& v, std::size_t i) { return i < v.size() ? v[i] : cplx(0.0); };
    double acc = 0.0;
    for (std::size_t q1 = 1; q1 < n; ++q1)
        for (std::size_t q0 = 0; q0 < q1; ++q0)
            acc += 0.25 * std::norm(at(a, q0) * at(b, q1) + at(b, q0) * at(a, q1));
    for (std::size_t q = 0; q < n; ++q) acc += 0.5 * std::norm(at(a, q) * at(b, q));
    return acc;
}

}  // namespace

double DecodedMixtureWeights::sum() const {
    double s = two_photon + vacuum;
    for (double w : one_photon_k) s += w;
    return s;
}

DecodedMixtureWeights decoded_mixture(const SpreadingCode& code0, const SpreadingCode& code1) {
    if (code0.length() != code1.length()) throw std::invalid_argument("decoded_mixture: length mismatch");
    const double corr = correlation(code0, code1);
    const std::size_t n_c = code0.length();
    DecodedMixtureWeights w;
    w.two_photon = 0.25 * (1.0 + corr * corr);
    w.vacuum = w.two_photon;
    w.one_photon_k.resize(n_c);
    for (std::size_t k = 0; k < n_c; ++k)
        w.one_photon_k[k] = (1.0 - code0.chip(k) * code1.chip(k) * corr) / (2.0 * static_cast<double>(n_c));
    return w;
}

TwoUserCoefficients filtered_coefficients(const SpreadingCode& code0, const SpreadingCode& code1,
                                          const FilterPair& fp) {
    if (code0.length() != code1.length())
        throw std::invalid_argument("filtered_coefficients: length mismatch");
    const std::size_t n_c = code0.length();
    const auto plain = plain_coefficients(fp, n_c);
    const auto cross = coded_coefficients(fp, code0, code1);

    TwoUserCoefficients c;
    c.correlation = correlation(code0, code1);
    c.c_1p1 = 0.25 * (1.0 + c.correlation * c.correlation);
    c.c_0 = c.c_1p1;
    c.c_1k.resize(n_c);
    for (std::size_t k = 0; k < n_c; ++k)
        c.c_1k[k] = (1.0 - code0.chip(k) * code1.chip(k) * c.correlation) / (2.0 * static_cast<double>(n_c));

    c.big_d = plain.total_d_energy();
    c.big_d01 = cross.total_d_energy();

    c.c_dd = symmetric_pair_weight(cross.d, plain.d);
    c.c_ff = symmetric_pair_weight(cross.f, plain.f);

    // one transmitted / one reflected: the reflected segment stays labeled.
    const std::size_t nf = std::max(plain.f.size(), cross.f.size());
    auto at = [](const std::vector<cplx>& v, std::size_t i) { return i < v.size() ? v[i] : cplx(0.0); };
    c.c_fqd.resize(nf, 0.0);
    const std::size_t nd = std::max(plain.d.size(), cross.d.size());
    for (std::size_t q = 0; q < nf; ++q) {
        double acc = 0.0;
        for (std::size_t q0 = 0; q0 < nd; ++q0)
            acc += std::norm(at(cross.f, q) * at(plain.d, q0) + at(plain.f, q) * at(cross.d, q0));
        c.c_fqd[q] = 0.25 * acc;
        c.c_fd += c.c_fqd[q];
    }

    c.c_d1k.resize(n_c, 0.0);
    c.c_f0k.resize(n_c, 0.0);
    for (std::size_t k = 0; k < n_c; ++k) {
        const double lam = code0.chip(k) * code1.chip(k);
        double ad = 0.0, af = 0.0;
        for (std::size_t q = 0; q < nd; ++q) ad += std::norm(at(plain.d, q) - lam * at(cross.d, q));
        for (std::size_t q = 0; q < nf; ++q) af += std::norm(at(plain.f, q) - lam * at(cross.f, q));
        c.c_d1k[k] = ad / (4.0 * static_cast<double>(n_c));
        c.c_f0k[k] = af / (4.0 * static_cast<double>(n_c));
        c.c_d += c.c_d1k[k];
        c.c_f += c.c_f0k[k];
    }

    c.cc_0 = c.c_0 + c.c_ff + c.c_f;

    cplx rdd(0.0), rff(0.0);
    for (std::size_t q = 0; q < nd; ++q) rdd += at(plain.d, q) * at(cross.d, q);
    for (std::size_t q = 0; q < nf; ++q) rff += at(plain.f, q) * at(cross.f, q);
    c.residual_dd = std::abs(rdd);
    c.residual_ff = std::abs(rff);
    return c;
}

std::array<double, 3> exact_pmf(const TwoUserCoefficients& c) {
    return {c.cc_0, c.c_fd + c.c_d, c.c_dd};
}

std::array<double, 3> approximate_pmf(ActiveSet active, double big_d, double big_d01) {
    switch (active) {
        case ActiveSet::none: return {1.0, 0.0, 0.0};
        case ActiveSet::user0: return {1.0 - 0.5 * big_d, 0.5 * big_d, 0.0};
        case ActiveSet::user1: return {1.0 - 0.5 * big_d01, 0.5 * big_d01, 0.0};
        case ActiveSet::both:
            return {1.0 - 0.5 * (big_d + big_d01) + 0.25 * big_d * big_d01,
                    0.5 * (big_d + big_d01) - 0.5 * big_d * big_d01, 0.25 * big_d * big_d01};
    }
    return {1.0, 0.0, 0.0};
}

}  // namespace qcdma
