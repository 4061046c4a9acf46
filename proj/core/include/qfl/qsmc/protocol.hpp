#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfl/qsmc/crt.hpp"
#include "qfl/qsmc/decoy.hpp"
#include "qfl/qsmc/ghz.hpp"

// One secure-aggregation run: clients scale their gradients to integers,
// the channel is checked with decoys per modulus, every (modulus,
// component) pair consumes one mask round, masked shares travel to the
// server, and the accumulated residues recombine through the CRT.
//
// The run is a sequential simulation with a fixed schedule; its observable
// behavior is the transcript, whose classical sends are recorded as
// messages of the form (from, to, round, modulus, kind, payload). The
// message list is stable under replay with the same inputs and seed.

namespace qfl::qsmc {

enum class ProtocolStatus {
    ok,
    aborted_decoy,
    aborted_overflow,
};

[[nodiscard]] std::string protocol_status_name(ProtocolStatus status);

struct Message {
    std::string from;
    std::string to;
    std::uint64_t round = 0;
    std::uint64_t modulus = 0;  // 0 when the send is modulus-independent
    std::string kind;
    std::int64_t payload = 0;

    friend bool operator==(const Message&, const Message&) = default;
};

// (o_s + sum_k masked_shares[k]) mod d for one mask round. Shares must
// come from the round's modulus; a share >= d or a count that does not
// match the round's client count is rejected.
[[nodiscard]] std::uint64_t aggregate_residue(const std::vector<std::uint64_t>& masked_shares,
                                              const GhzRound& round);

struct RoundRecord {
    std::uint64_t modulus = 0;
    std::size_t component = 0;
    GhzBackend backend = GhzBackend::constraint_sampler;
    std::vector<std::uint64_t> ghz_outcomes;   // server first
    std::vector<std::uint64_t> masked_shares;  // one per client
    std::uint64_t residue = 0;
};

struct ProtocolConfig {
    CrtConfig crt;
    GhzBackend backend = GhzBackend::constraint_sampler;
    std::size_t decoys = 20;
    double decoy_threshold = 0.0;
};

struct Transcript {
    ProtocolStatus status = ProtocolStatus::ok;
    CrtConfig config;
    GhzBackend backend = GhzBackend::constraint_sampler;
    std::size_t decoys = 0;
    double decoy_threshold = 0.0;
    Attacker attacker = Attacker::none;
    std::uint64_t seed = 0;
    std::vector<DecoyCheckResult> decoy_checks;
    std::vector<RoundRecord> rounds;
    std::vector<Message> messages;
    // Filled only on status ok.
    std::vector<std::int64_t> totals;    // decoded sum of scaled gradients
    std::vector<double> gradient;        // totals / gamma

    [[nodiscard]] nlohmann::json to_json() const;
};

// Aggregates one gradient vector per client. The returned transcript
// carries the federated gradient on success; on a failed decoy check or a
// scaled sum outside the representable window it carries the abort status
// and no output values.
[[nodiscard]] Transcript run_protocol(const std::vector<std::vector<double>>& client_gradients,
                                      const ProtocolConfig& config, Attacker attacker,
                                      std::uint64_t seed);

}  // namespace qfl::qsmc
