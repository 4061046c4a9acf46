#pragma once

#include <cstdint>
#include <vector>

// Chinese-remainder arithmetic for the secure-aggregation layer. Gradients
// are scaled to integers, represented as residues mod the modulus product,
// split into per-modulus shares, and the summed shares are recombined into
// the aggregate integer.

namespace qfl::qsmc {

// Aggregation parameters shared by every round of one protocol run.
//   moduli        pairwise-coprime residue moduli, each >= 2; their product
//                 S is the size of the representable window
//   gamma         fixed-point scale applied before rounding
//   clients       number of contributing parties (K)
//   beta          per-client weights; empty means uniform 1/K
//   signed_values when set, decoded totals in [ceil(S/2), S) map to
//                 negatives and the representable window is [-S/2, S/2);
//                 otherwise totals must stay in [0, S)
struct CrtConfig {
    std::vector<std::uint64_t> moduli;
    double gamma = 100.0;
    std::size_t clients = 0;
    std::vector<double> beta;
    bool signed_values = false;

    // Product of the moduli. Throws std::overflow_error when the window
    // leaves 64-bit signed decode range.
    [[nodiscard]] unsigned __int128 product() const;

    // Throws std::invalid_argument on non-coprime or undersized moduli,
    // non-positive gamma, zero clients, or a beta vector that does not
    // match the client count / has non-positive entries.
    void validate() const;

    // Weight applied to client k's gradient before integerization.
    [[nodiscard]] double weight(std::size_t k) const;
};

// round(gamma * beta_k * g), half away from zero, before any residue map.
// These are the values whose sum the protocol checks against the window
// bound. Throws std::overflow_error when a scaled component is not
// representable as a 64-bit integer.
[[nodiscard]] std::vector<std::int64_t> scale_to_signed_integers(
    const std::vector<double>& gradient, std::size_t client_index, const CrtConfig& config);

// Least non-negative representative of value mod S.
[[nodiscard]] std::uint64_t to_residue(std::int64_t value, const CrtConfig& config);

// One client's integerized gradient: round(gamma * beta_k * g) mod S per
// component. Negative scaled components require signed mode and otherwise
// raise std::overflow_error.
[[nodiscard]] std::vector<std::uint64_t> scale_to_integers(const std::vector<double>& gradient,
                                                           std::size_t client_index,
                                                           const CrtConfig& config);

// Least non-negative residue of value mod m.
[[nodiscard]] std::uint64_t residue_mod(std::int64_t value, std::uint64_t modulus);

// Per-modulus residues of one scaled component: shares[i] = value mod
// moduli[i]. Accepts either the signed value or its mod-S representative;
// both give the same shares because S is a multiple of every modulus.
[[nodiscard]] std::vector<std::uint64_t> compute_shares(std::int64_t value,
                                                        const CrtConfig& config);

// Recombine summed residues into the unique representative in [0, S).
// residues[i] must be < moduli[i]. A modular-inverse failure inside
// signals a non-coprime modulus set.
[[nodiscard]] std::uint64_t crt_reconstruct(const std::vector<std::uint64_t>& residues,
                                            const CrtConfig& config);

// Map a [0, S) representative into the signed window [-S/2, S/2).
[[nodiscard]] std::int64_t to_signed_window(std::uint64_t value, const CrtConfig& config);

// Reconstruct and decode one aggregate component: CRT recombination
// followed by the signed-window map when the config requests it.
[[nodiscard]] std::int64_t decode_aggregate(const std::vector<std::uint64_t>& residues,
                                            const CrtConfig& config);

}  // namespace qfl::qsmc
