// Exact bosonic-state engine over labeled modes.
//
// States are stored as maps from occupation lists to amplitudes in the
// orthonormal number basis (|n> normalized), so norm checks are plain sums
// of squared magnitudes.  Everything here is exact linear algebra on the
// monomial expansion; no truncation ever happens silently.
#ifndef QCDMA_FOCK_HPP
#define QCDMA_FOCK_HPP

#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qcdma/channel.hpp"
#include "qcdma/codes.hpp"
#include "qcdma/filter.hpp"

namespace qcdma {

// Stage-qualified mode identity.  Before the filter a mode is a chip of a
// party's signal (party = user before broadcast, receiver after); after the
// filter it is an output segment on the transmitted or reflected port.
struct ModeLabel {
    enum class Stage : std::uint8_t { input = 0, filtered = 1 };
    enum class Port : std::uint8_t { none = 0, transmitted = 1, reflected = 2 };

    Stage stage = Stage::input;
    std::uint16_t party = 0;
    Port port = Port::none;
    std::uint32_t index = 0;

    friend auto operator<=>(const ModeLabel&, const ModeLabel&) = default;

    static ModeLabel chip(std::uint16_t party, std::uint32_t k) { return {Stage::input, party, Port::none, k}; }
    static ModeLabel transmitted(std::uint16_t receiver, std::uint32_t q) {
        return {Stage::filtered, receiver, Port::transmitted, q};
    }
    static ModeLabel reflected(std::uint16_t receiver, std::uint32_t q) {
        return {Stage::filtered, receiver, Port::reflected, q};
    }
    std::string str() const;
};

// Sorted (mode, count) pairs with counts >= 1; the canonical key of a basis state.
using Occupation = std::vector<std::pair<ModeLabel, int>>;

int total_photons(const Occupation& occ);
std::string occupation_str(const Occupation& occ);

// Substitution rule for creation operators: mode -> sum coeff * mode'.
// Modes without a column are left untouched.
struct LinearMap {
    std::map<ModeLabel, std::vector<std::pair<ModeLabel, cplx>>> columns;
    bool claimed_unitary = false;  // column norms validated to 1e-10 on apply
};

class DensityMixture;

class FockState {
  public:
    static FockState vacuum(int n_max = 3);

    // ((sum_k w_k a_k^dagger)^n / sqrt(n!)) |0>, expanded multinomially.
    // Weights must have unit norm (1e-12).
    static FockState number_state(std::span<const ModeLabel> modes, std::span<const cplx> weights, int n,
                                  int n_max = 3);

    int n_max() const { return n_max_; }
    std::size_t term_count() const { return terms_.size(); }
    double norm_squared() const;
    cplx amplitude(const Occupation& occ) const;

    // Per-chip code phase on the input-stage modes of one party.  Phase-only
    // and exact: chips are +/-1.
    FockState apply_code(const SpreadingCode& code, std::uint16_t party, bool conjugate = false) const;

    // Single-chip phase flip; used to check that disjoint-chip operations
    // commute bit-for-bit.
    FockState apply_chip_phase(std::uint16_t party, std::uint32_t chip, int sign) const;

    FockState apply_linear_map(const LinearMap& map) const;

    // Photon count can only grow here, so the bound is enforced: exceeding
    // n_max throws instead of truncating.
    FockState tensor_product(const FockState& other) const;

    DensityMixture partial_trace(const std::function<bool(const ModeLabel&)>& keep) const;

    // P(n photons in modes selected by the predicate), n = 0..n_max.
    std::vector<double> photon_distribution(const std::function<bool(const ModeLabel&)>& count) const;

    FockState& prune(double eps = 1e-15);
    FockState scaled(cplx factor) const;

    // Canonically sorted "re im : mode=count,..." lines, bit-stable.
    std::string dump() const;

    const std::map<Occupation, cplx>& terms() const { return terms_; }

  private:
    explicit FockState(int n_max) : n_max_(n_max) {}
    std::map<Occupation, cplx> terms_;
    int n_max_ = 3;
};

// Weighted list of normalized states from a partial trace.  Components are
// keyed by the occupation of the traced modes they were projected on.
struct DensityComponent {
    double weight = 0.0;
    FockState state;
    Occupation traced_occupation;
};

class DensityMixture {
  public:
    explicit DensityMixture(std::vector<DensityComponent> components);

    const std::vector<DensityComponent>& components() const { return components_; }
    double total_weight() const;

    // Merges components whose states coincide up to a global phase.
    DensityMixture merged(double tol = 1e-10) const;

    std::vector<double> photon_distribution(const std::function<bool(const ModeLabel&)>& count) const;

    // Component whose traced occupation equals `occ`, or nullptr.
    const DensityComponent* find_traced(const Occupation& occ) const;

  private:
    std::vector<DensityComponent> components_;
};

// a_{s,k} -> sum_r B_{rs} a_{r,k}: the star coupler acting chip-wise on
// input-stage modes of parties 0..M-1.
LinearMap broadcast_map(const BroadcastMatrix& b, std::size_t n_c);

// a_{r,k} -> sum_l d_l a'_{r,T,k+l} + f_l b'_{r,R,k+l} for every receiver in
// [0, receivers).  Valid for rectangular chip wavepackets, whose shape is
// invariant under integer-chip delays.
LinearMap filter_map(const FilterPair& fp, std::size_t receivers, std::size_t n_c);

// Amplitude of the coincident pair |1 at chip k of receiver 0> |1 at chip k
// of receiver 1> in a decoded two-user state.
cplx hom_amplitude(const FockState& state, std::uint32_t k);

}  // namespace qcdma

#endif
