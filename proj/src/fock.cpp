#include "qcdma/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qcdma {

namespace {

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double sqrt_factorial_product(const Occupation& occ) {
    double r = 1.0;
    for (const auto& [mode, count] : occ) r *= factorial(count);
    return std::sqrt(r);
}

Occupation merge_occupations(const Occupation& a, const Occupation& b) {
    Occupation out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first)
            out.push_back(a[i++]);
        else if (b[j].first < a[i].first)
            out.push_back(b[j++]);
        else {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i, ++j;
        }
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; j < b.size(); ++j) out.push_back(b[j]);
    return out;
}

Occupation sorted_merged(Occupation occ) {
    std::sort(occ.begin(), occ.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    Occupation out;
    for (const auto& entry : occ) {
        if (!out.empty() && out.back().first == entry.first)
            out.back().second += entry.second;
        else
            out.push_back(entry);
    }
    return out;
}

// Terms of (sum_j coeff_j a_j^dagger)^count as raw monomial coefficients,
// via the multinomial theorem over the column entries.
void expand_power(const std::vector<std::pair<ModeLabel, cplx>>& column, int count,
                  std::vector<std::pair<Occupation, cplx>>& out) {
    out.clear();
    Occupation occ;
    std::function<void(std::size_t, int, cplx, double)> rec = [&](std::size_t start, int left, cplx coeff,
                                                                  double denom) {
        if (start == column.size()) {
            if (left == 0) out.emplace_back(sorted_merged(occ), coeff * (factorial(count) / denom));
            return;
        }
        cplx p(1.0);
        for (int m = 0; m <= left; ++m) {
            if (m > 0) p *= column[start].second;
            if (m > 0) occ.emplace_back(column[start].first, m);
            rec(start + 1, left - m, coeff * p, denom * factorial(m));
            if (m > 0) occ.pop_back();
        }
    };
    rec(0, count, cplx(1.0), 1.0);
}

}  // namespace

std::string ModeLabel::str() const {
    char buf[64];
    if (stage == Stage::input)
        std::snprintf(buf, sizeof buf, "in(%u,%u)", unsigned(party), unsigned(index));
    else
        std::snprintf(buf, sizeof buf, "%s(%u,%u)", port == Port::transmitted ? "T" : "R", unsigned(party),
                      unsigned(index));
    return buf;
}

int total_photons(const Occupation& occ) {
    int n = 0;
    for (const auto& [mode, count] : occ) n += count;
    return n;
}

std::string occupation_str(const Occupation& occ) {
    if (occ.empty()) return "vac";
    std::string s;
    for (const auto& [mode, count] : occ) {
        if (!s.empty()) s += ",";
        s += mode.str() + "=" + std::to_string(count);
    }
    return s;
}

FockState FockState::vacuum(int n_max) {
    FockState st(n_max);
    st.terms_[Occupation{}] = cplx(1.0);
    return st;
}

FockState FockState::number_state(std::span<const ModeLabel> modes, std::span<const cplx> weights, int n,
                                  int n_max) {
    if (modes.size() != weights.size())
        throw std::invalid_argument("FockState::number_state: one weight per mode required");
    if (n < 0 || n > n_max) throw std::invalid_argument("FockState::number_state: n exceeds n_max");
    double wnorm = 0.0;
    for (const auto& w : weights) wnorm += std::norm(w);
    if (std::abs(wnorm - 1.0) > 1e-12)
        throw std::invalid_argument("FockState::number_state: weights must have unit norm");
    {
        std::vector<ModeLabel> sorted(modes.begin(), modes.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("FockState::number_state: modes must be distinct");
    }

    FockState st(n_max);
    // Compositions n = n_0 + ... + n_{K-1}; amplitude in the number basis is
    // sqrt(n!/prod n_k!) * prod w_k^{n_k}.
    Occupation occ;
    std::function<void(std::size_t, int, cplx, double)> rec = [&](std::size_t k, int left, cplx wprod,
                                                                  double denom) {
        if (k == modes.size()) {
            if (left == 0) {
                Occupation sorted = occ;
                std::sort(sorted.begin(), sorted.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                st.terms_[sorted] += wprod * std::sqrt(factorial(n) / denom);
            }
            return;
        }
        cplx p(1.0);
        for (int m = 0; m <= left; ++m) {
            if (m > 0) p *= weights[k];
            if (m > 0) occ.emplace_back(modes[k], m);
            rec(k + 1, left - m, wprod * p, denom * factorial(m));
            if (m > 0) occ.pop_back();
        }
    };
    rec(0, n, cplx(1.0), 1.0);
    return st;
}

double FockState::norm_squared() const {
    double s = 0.0;
    for (const auto& [occ, amp] : terms_) s += std::norm(amp);
    return s;
}

cplx FockState::amplitude(const Occupation& occ) const {
    auto it = terms_.find(occ);
    return it == terms_.end() ? cplx(0.0) : it->second;
}

FockState FockState::apply_code(const SpreadingCode& code, std::uint16_t party, bool conjugate) const {
    (void)conjugate;  // chips are +/-1, so the conjugate phase is identical
    FockState out(n_max_);
    for (const auto& [occ, amp] : terms_) {
        int sign = 1;
        for (const auto& [mode, count] : occ) {
            if (mode.stage != ModeLabel::Stage::input || mode.party != party) continue;
            if (mode.index >= code.length()) throw std::invalid_argument("apply_code: chip index beyond code length");
            if (code.chip(mode.index) == -1 && (count % 2) != 0) sign = -sign;
        }
        out.terms_[occ] = amp * static_cast<double>(sign);
    }
    return out;
}

FockState FockState::apply_chip_phase(std::uint16_t party, std::uint32_t chip, int sign) const {
    if (sign != 1 && sign != -1) throw std::invalid_argument("apply_chip_phase: sign must be +1 or -1");
    FockState out(n_max_);
    for (const auto& [occ, amp] : terms_) {
        int factor = 1;
        for (const auto& [mode, count] : occ)
            if (mode == ModeLabel::chip(party, chip) && sign == -1 && (count % 2) != 0) factor = -factor;
        out.terms_[occ] = amp * static_cast<double>(factor);
    }
    return out;
}

FockState FockState::apply_linear_map(const LinearMap& map) const {
    if (map.claimed_unitary) {
        for (const auto& [mode, column] : map.columns) {
            double norm2 = 0.0;
            for (const auto& [target, coeff] : column) norm2 += std::norm(coeff);
            if (std::abs(norm2 - 1.0) > 1e-10)
                throw std::invalid_argument("apply_linear_map: column of a claimed-unitary map is not normalized");
        }
    }
    FockState out(n_max_);
    std::map<std::pair<ModeLabel, int>, std::vector<std::pair<Occupation, cplx>>> expansion_cache;
    for (const auto& [occ, amp] : terms_) {
        const cplx raw = amp / sqrt_factorial_product(occ);
        std::vector<std::pair<Occupation, cplx>> acc{{Occupation{}, raw}};
        for (const auto& [mode, count] : occ) {
            auto it = map.columns.find(mode);
            if (it == map.columns.end()) {
                // identity column
                for (auto& [o, c] : acc) o = merge_occupations(o, Occupation{{mode, count}});
                continue;
            }
            auto [cached, inserted] = expansion_cache.try_emplace(std::make_pair(mode, count));
            if (inserted) expand_power(it->second, count, cached->second);
            const auto& powterms = cached->second;
            std::vector<std::pair<Occupation, cplx>> next;
            next.reserve(acc.size() * powterms.size());
            for (const auto& [o1, c1] : acc)
                for (const auto& [o2, c2] : powterms) next.emplace_back(merge_occupations(o1, o2), c1 * c2);
            acc = std::move(next);
        }
        for (const auto& [o, c] : acc) out.terms_[o] += c * sqrt_factorial_product(o);
    }
    out.prune();
    return out;
}

FockState FockState::tensor_product(const FockState& other) const {
    FockState out(n_max_);
    for (const auto& [occ1, amp1] : terms_)
        for (const auto& [occ2, amp2] : other.terms_) {
            for (const auto& [mode, count] : occ2)
                for (const auto& [mode1, count1] : occ1)
                    if (mode == mode1)
                        throw std::invalid_argument("tensor_product: factors share a mode");
            const Occupation merged = merge_occupations(occ1, occ2);
            if (total_photons(merged) > n_max_)
                throw std::overflow_error("tensor_product: photon number exceeds n_max");
            out.terms_[merged] += amp1 * amp2;
        }
    return out;
}

DensityMixture FockState::partial_trace(const std::function<bool(const ModeLabel&)>& keep) const {
    std::map<Occupation, std::map<Occupation, cplx>> buckets;
    for (const auto& [occ, amp] : terms_) {
        Occupation kept, traced;
        for (const auto& entry : occ) (keep(entry.first) ? kept : traced).push_back(entry);
        buckets[traced][kept] += amp;
    }
    std::vector<DensityComponent> components;
    components.reserve(buckets.size());
    for (auto& [traced, kept_terms] : buckets) {
        double w = 0.0;
        for (const auto& [occ, amp] : kept_terms) w += std::norm(amp);
        if (w <= 1e-30) continue;
        FockState st(n_max_);
        const double inv = 1.0 / std::sqrt(w);
        for (const auto& [occ, amp] : kept_terms) st.terms_[occ] = amp * inv;
        components.push_back({w, std::move(st), traced});
    }
    return DensityMixture(std::move(components));
}

std::vector<double> FockState::photon_distribution(const std::function<bool(const ModeLabel&)>& count) const {
    std::vector<double> p(static_cast<std::size_t>(n_max_) + 1, 0.0);
    for (const auto& [occ, amp] : terms_) {
        std::size_t n = 0;
        for (const auto& [mode, c] : occ)
            if (count(mode)) n += static_cast<std::size_t>(c);
        if (n >= p.size()) p.resize(n + 1, 0.0);
        p[n] += std::norm(amp);
    }
    return p;
}

FockState& FockState::prune(double eps) {
    for (auto it = terms_.begin(); it != terms_.end();)
        it = std::abs(it->second) < eps ? terms_.erase(it) : std::next(it);
    return *this;
}

FockState FockState::scaled(cplx factor) const {
    FockState out(n_max_);
    for (const auto& [occ, amp] : terms_) out.terms_[occ] = amp * factor;
    return out;
}

std::string FockState::dump() const {
    std::string s;
    char buf[64];
    for (const auto& [occ, amp] : terms_) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g : ", amp.real(), amp.imag());
        s += buf;
        s += occupation_str(occ);
        s += "\n";
    }
    return s;
}

DensityMixture::DensityMixture(std::vector<DensityComponent> components) : components_(std::move(components)) {}

double DensityMixture::total_weight() const {
    double s = 0.0;
    for (const auto& c : components_) s += c.weight;
    return s;
}

DensityMixture DensityMixture::merged(double tol) const {
    std::vector<DensityComponent> out;
    for (const auto& c : components_) {
        bool absorbed = false;
        for (auto& o : out) {
            cplx overlap(0.0);
            for (const auto& [occ, amp] : c.state.terms()) overlap += std::conj(o.state.amplitude(occ)) * amp;
            if (std::abs(std::abs(overlap) - 1.0) < tol) {
                o.weight += c.weight;
                absorbed = true;
                break;
            }
        }
        if (!absorbed) out.push_back(c);
    }
    return DensityMixture(std::move(out));
}

std::vector<double> DensityMixture::photon_distribution(
    const std::function<bool(const ModeLabel&)>& count) const {
    std::vector<double> p;
    for (const auto& c : components_) {
        const auto pc = c.state.photon_distribution(count);
        if (p.size() < pc.size()) p.resize(pc.size(), 0.0);
        for (std::size_t n = 0; n < pc.size(); ++n) p[n] += c.weight * pc[n];
    }
    return p;
}

const DensityComponent* DensityMixture::find_traced(const Occupation& occ) const {
    for (const auto& c : components_)
        if (c.traced_occupation == occ) return &c;
    return nullptr;
}

LinearMap broadcast_map(const BroadcastMatrix& b, std::size_t n_c) {
    LinearMap map;
    map.claimed_unitary = true;
    for (std::uint16_t s = 0; s < b.size(); ++s)
        for (std::uint32_t k = 0; k < n_c; ++k) {
            auto& col = map.columns[ModeLabel::chip(s, k)];
            for (std::uint16_t r = 0; r < b.size(); ++r) col.emplace_back(ModeLabel::chip(r, k), b.at(r, s));
        }
    return map;
}

LinearMap filter_map(const FilterPair& fp, std::size_t receivers, std::size_t n_c) {
    LinearMap map;
    const auto& d = fp.transmission_taps();
    const auto& f = fp.reflection_taps();
    for (std::uint16_t r = 0; r < receivers; ++r)
        for (std::uint32_t k = 0; k < n_c; ++k) {
            auto& col = map.columns[ModeLabel::chip(r, k)];
            for (std::uint32_t l = 0; l < d.size(); ++l)
                if (d[l] != cplx(0.0)) col.emplace_back(ModeLabel::transmitted(r, k + l), d[l]);
            for (std::uint32_t l = 0; l < f.size(); ++l)
                if (f[l] != cplx(0.0)) col.emplace_back(ModeLabel::reflected(r, k + l), f[l]);
        }
    return map;
}

cplx hom_amplitude(const FockState& state, std::uint32_t k) {
    Occupation occ{{ModeLabel::chip(0, k), 1}, {ModeLabel::chip(1, k), 1}};
    return state.amplitude(occ);
}

}  // namespace qcdma
