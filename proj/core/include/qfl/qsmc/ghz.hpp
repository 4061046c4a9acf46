#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Correlated mask generation: one round measures every particle of a
// d-level (K+1)-particle GHZ state in the Fourier basis, producing
// outcomes that are individually uniform on Z_d and sum to 0 mod d.

namespace qfl::qsmc {

enum class GhzBackend {
    // Dense d^(K+1) amplitude vector, per-particle inverse Fourier rotation,
    // one joint sample per round.
    qudit_statevector,
    // Draws the K client outcomes uniformly and solves the server outcome
    // from the sum-zero constraint; same joint law, no amplitude storage.
    constraint_sampler,
};

[[nodiscard]] std::string ghz_backend_name(GhzBackend backend);
[[nodiscard]] GhzBackend ghz_backend_from_name(const std::string& name);

struct GhzRound {
    std::uint64_t d = 2;
    // Index 0 is the server outcome; indices 1..K are the clients.
    std::vector<std::uint64_t> outcomes;
    GhzBackend backend = GhzBackend::constraint_sampler;

    // (o_s + o_1 + ... + o_K) mod d; zero for every valid round.
    [[nodiscard]] std::uint64_t sum_mod_d() const;
};

// Runs one mask round for `clients` parties plus the server. The
// statevector backend refuses configurations whose amplitude count
// d^(clients+1) exceeds 2^22.
[[nodiscard]] GhzRound run_ghz_round(std::size_t clients, std::uint64_t d, GhzBackend backend,
                                     std::uint64_t seed);

}  // namespace qfl::qsmc
