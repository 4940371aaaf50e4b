#include "qcdma/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qcdma {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const cplx wl = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

void dft(std::vector<cplx>& a, bool inverse) {
    if (is_power_of_two(a.size())) {
        fft_pow2(a, inverse);
        return;
    }
    const std::size_t n = a.size();
    std::vector<cplx> out(n, cplx(0.0));
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
            out[j] += a[l] * std::polar(1.0, sign * 2.0 * kPi * static_cast<double>(j) *
                                                 static_cast<double>(l) / static_cast<double>(n));
    if (inverse)
        for (auto& x : out) x /= static_cast<double>(n);
    a = std::move(out);
}

// Response samples H(2*pi*(j + off)/N), j = 0..N-1, off in {0, 1/2}.
std::vector<cplx> response_samples(const std::vector<cplx>& taps, std::size_t n, bool half_offset) {
    std::vector<cplx> a(n, cplx(0.0));
    for (std::size_t l = 0; l < taps.size(); ++l) {
        cplx t = taps[l];
        if (half_offset) t *= std::polar(1.0, -kPi * static_cast<double>(l) / static_cast<double>(n));
        a[l % n] += t;
    }
    dft(a, false);
    return a;
}

double measure_defect(const std::vector<cplx>& d, const std::vector<cplx>& f, std::size_t n) {
    const auto ht = response_samples(d, n, true);
    const auto hr = response_samples(f, n, true);
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        worst = std::max(worst, std::abs(std::norm(ht[j]) + std::norm(hr[j]) - 1.0));
        worst = std::max(worst, 2.0 * std::abs((ht[j] * std::conj(hr[j])).real()));
    }
    return worst;
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); }

double window_value(Window w, std::size_t n, std::size_t length) {
    if (length <= 1) return 1.0;
    const double x = 2.0 * kPi * static_cast<double>(n) / static_cast<double>(length - 1);
    switch (w) {
        case Window::rectangular: return 1.0;
        case Window::hamming: return 0.54 - 0.46 * std::cos(x);
        case Window::hann: return 0.5 - 0.5 * std::cos(x);
        case Window::blackman: return 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
    }
    return 1.0;
}

// Sum-normalized windowed sinc; fc in cycles per chip.
std::vector<double> windowed_sinc(std::size_t taps, double fc, Window w) {
    std::vector<double> h(taps);
    const double mid = (static_cast<double>(taps) - 1.0) / 2.0;
    double sum = 0.0;
    for (std::size_t n = 0; n < taps; ++n) {
        h[n] = window_value(w, n, taps) * sinc(2.0 * fc * (static_cast<double>(n) - mid));
        sum += h[n];
    }
    for (auto& x : h) x /= sum;
    return h;
}

// |H| at a single frequency (cycles per chip) for real taps.
double magnitude_at(const std::vector<double>& taps, double cycles) {
    cplx acc(0.0);
    for (std::size_t l = 0; l < taps.size(); ++l)
        acc += taps[l] * std::polar(1.0, -2.0 * kPi * cycles * static_cast<double>(l));
    return std::abs(acc);
}

// Picks the sinc cutoff so the realized response crosses -3 dB at the
// requested bandwidth.  A plain windowed sinc crosses about -6 dB there,
// which throws away a visible slice of the passband for short filters.
std::vector<double> design_transmission(std::size_t taps, double bandwidth, Window w, bool calibrate) {
    if (!calibrate || taps == 1) return windowed_sinc(taps, bandwidth, w);
    double lo = bandwidth, hi = std::min(0.5, 4.0 * bandwidth);
    auto level = [&](double fc) { return magnitude_at(windowed_sinc(taps, fc, w), bandwidth); };
    const double target = 1.0 / std::sqrt(2.0);
    if (level(hi) < target) return windowed_sinc(taps, hi, w);  // transition wider than Nyquist leftover
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (level(mid) < target ? lo : hi) = mid;
    }
    return windowed_sinc(taps, 0.5 * (lo + hi), w);
}

void validate_design_args(std::size_t taps, double bandwidth) {
    if (taps == 0 || taps % 2 == 0)
        throw std::invalid_argument("filter design: tap count must be odd");
    if (!(bandwidth > 0.0) || bandwidth > 0.5)
        throw std::invalid_argument("filter design: bandwidth must lie in (0, 0.5] cycles per chip");
}

std::size_t defect_grid(const FilterDesignOptions& opts) {
    if (opts.measure_grid_size != 0) return opts.measure_grid_size;
    return 2 * std::max<std::size_t>(opts.grid_size, 8192);
}

std::vector<cplx> convolve(const std::vector<cplx>& taps, const std::vector<double>& seq) {
    std::vector<cplx> out(taps.size() + seq.size() - 1, cplx(0.0));
    for (std::size_t l = 0; l < taps.size(); ++l) {
        if (taps[l] == cplx(0.0)) continue;
        for (std::size_t k = 0; k < seq.size(); ++k) out[l + k] += taps[l] * seq[k];
    }
    return out;
}

}  // namespace

FilterPair FilterPair::all_pass() {
    FilterPair fp;
    fp.d_ = {cplx(1.0)};
    fp.f_ = {cplx(0.0)};
    fp.q_delay_ = 0;
    fp.unitarity_defect_ = 0.0;
    fp.mode_ = "all-pass";
    return fp;
}

FilterPair FilterPair::from_taps(std::vector<cplx> d, std::vector<cplx> f, std::size_t q_delay,
                                 std::size_t measure_grid_size) {
    if (d.empty() || f.empty()) throw std::invalid_argument("FilterPair::from_taps: taps must be nonempty");
    for (const auto& x : d)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw std::invalid_argument("FilterPair::from_taps: non-finite tap");
    for (const auto& x : f)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw std::invalid_argument("FilterPair::from_taps: non-finite tap");
    FilterPair fp;
    fp.d_ = std::move(d);
    fp.f_ = std::move(f);
    fp.q_delay_ = q_delay;
    fp.unitarity_defect_ = measure_defect(fp.d_, fp.f_, measure_grid_size);
    return fp;
}

FilterPair FilterPair::design_windowed(std::size_t n_c, std::size_t taps, double bandwidth,
                                       FilterDesignOptions opts) {
    (void)n_c;
    validate_design_args(taps, bandwidth);
    const auto dr = design_transmission(taps, bandwidth, opts.window, opts.calibrate_3db);
    std::vector<cplx> d(dr.begin(), dr.end());

    const std::size_t ng = std::max<std::size_t>(opts.grid_size, 4 * taps);
    auto h = response_samples(d, ng, false);
    double amax = 0.0;
    for (const auto& x : h) amax = std::max(amax, std::abs(x));
    const double scale = std::min(1.0, 1.0 / amax);  // sqrt(1-|H|^2) must stay real
    for (auto& x : d) x *= scale;
    for (auto& x : h) x *= scale;

    // Complementary magnitude with +90 degree phase at the same group delay,
    // brought back to tap length with the same window.
    const std::size_t mid = (taps - 1) / 2;
    std::vector<cplx> g(ng);
    for (std::size_t j = 0; j < ng; ++j) {
        const double mag = std::sqrt(std::max(0.0, 1.0 - std::norm(h[j])));
        g[j] = mag * std::polar(1.0, -2.0 * kPi * static_cast<double>(j) * static_cast<double>(mid) /
                                         static_cast<double>(ng));
    }
    dft(g, true);
    std::vector<cplx> f(taps);
    for (std::size_t l = 0; l < taps; ++l) f[l] = cplx(0.0, 1.0) * window_value(opts.window, l, taps) * g[l];

    FilterPair fp;
    fp.d_ = std::move(d);
    fp.f_ = std::move(f);
    fp.q_delay_ = mid;
    fp.tap_scale_ = scale;
    fp.unitarity_defect_ = measure_defect(fp.d_, fp.f_, defect_grid(opts));
    fp.mode_ = "windowed";
    return fp;
}

FilterPair FilterPair::design_grid_complementary(std::size_t n_c, std::size_t taps, double bandwidth,
                                                 FilterDesignOptions opts) {
    (void)n_c;
    validate_design_args(taps, bandwidth);
    if (opts.grid_size < 4 * taps)
        throw std::invalid_argument("design_grid_complementary: grid_size must be >= 4 * taps");
    const std::size_t ng = opts.grid_size;
    const auto core = design_transmission(taps, bandwidth, opts.window, opts.calibrate_3db);

    // Both ports are aligned to group delay ng/2.  Anything shallower leaves
    // the acausal tail of the complement wrapped to the far end of the tap
    // vector, and the identities then fail between grid points at O(1/delay^2).
    const std::size_t mid = (taps - 1) / 2;
    const std::size_t delay = ng / 2;
    std::vector<cplx> d(delay - mid + taps, cplx(0.0));
    for (std::size_t l = 0; l < taps; ++l) d[delay - mid + l] = core[l];

    auto h = response_samples(d, ng, false);
    double amax = 0.0, amin = std::numeric_limits<double>::infinity();
    for (const auto& x : h) {
        amax = std::max(amax, std::abs(x));
        amin = std::min(amin, std::abs(x));
    }

    FilterPair fp;
    if (amax - amin <= 1e-12 && std::abs(amax - 1.0) <= 1e-12) {
        // Flat unit response: the complement is identically zero.
        fp.d_ = std::move(d);
        fp.f_ = {cplx(0.0)};
    } else {
        // Pull the peak below one: the square root must stay smooth enough
        // for the grid to resolve, or its spectral tail re-enters by aliasing.
        const double scale = std::min(1.0, (1.0 - opts.headroom) / amax);
        for (auto& x : d) x *= scale;
        for (auto& x : h) x *= scale;
        fp.tap_scale_ = scale;
        std::vector<cplx> g(ng);
        for (std::size_t j = 0; j < ng; ++j) {
            const double mag = std::sqrt(std::max(0.0, 1.0 - std::norm(h[j])));
            g[j] = cplx(0.0, 1.0) * mag *
                   std::polar(1.0, -2.0 * kPi * static_cast<double>(j) * static_cast<double>(delay) /
                                       static_cast<double>(ng));
        }
        dft(g, true);
        fp.d_ = std::move(d);
        fp.f_ = std::move(g);
    }
    fp.q_delay_ = delay;
    fp.unitarity_defect_ = measure_defect(fp.d_, fp.f_, defect_grid(opts));
    fp.mode_ = "grid-complementary";
    return fp;
}

cplx FilterPair::transmission_response(double omega_tc) const {
    cplx acc(0.0);
    for (std::size_t l = 0; l < d_.size(); ++l) acc += d_[l] * std::polar(1.0, -omega_tc * static_cast<double>(l));
    return acc;
}

cplx FilterPair::reflection_response(double omega_tc) const {
    cplx acc(0.0);
    for (std::size_t l = 0; l < f_.size(); ++l) acc += f_[l] * std::polar(1.0, -omega_tc * static_cast<double>(l));
    return acc;
}

double CoefficientSeries::total_d_energy() const {
    double e = 0.0;
    for (const auto& x : d) e += std::norm(x);
    return e;
}

double CoefficientSeries::total_f_energy() const {
    double e = 0.0;
    for (const auto& x : f) e += std::norm(x);
    return e;
}

CoefficientSeries plain_coefficients(const FilterPair& fp, std::size_t n_c) {
    if (n_c == 0) throw std::invalid_argument("plain_coefficients: n_c must be >= 1");
    const std::vector<double> ones(n_c, 1.0 / std::sqrt(static_cast<double>(n_c)));
    return {convolve(fp.transmission_taps(), ones), convolve(fp.reflection_taps(), ones)};
}

CoefficientSeries coded_coefficients(const FilterPair& fp, const SpreadingCode& encode,
                                     const SpreadingCode& decode) {
    const auto prod = chip_product(encode, decode);
    return {convolve(fp.transmission_taps(), prod), convolve(fp.reflection_taps(), prod)};
}

double correlation_identity_deviation(const FilterPair& fp, const SpreadingCode& s, const SpreadingCode& s_prime,
                        const SpreadingCode& r) {
    const auto a = coded_coefficients(fp, s, r);
    const auto b = coded_coefficients(fp, s_prime, r);
    cplx lhs(0.0);
    for (std::size_t q = 0; q < a.d.size(); ++q) lhs += std::conj(a.d[q]) * b.d[q];
    for (std::size_t q = 0; q < a.f.size(); ++q) lhs += std::conj(a.f[q]) * b.f[q];
    return std::abs(lhs - cplx(correlation(s, s_prime)));
}

}  // namespace qcdma
