#include "qfl/qsmc/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include "qfl/common/rng.hpp"

namespace qfl::qsmc {

namespace {

constexpr std::uint64_t kDecoySeedTag = 0x64636f79;  // "dcoy"
constexpr std::uint64_t kGhzSeedTag = 0x67687a72;    // "ghzr"

// A component sum is representable exactly when the signed-window (or
// plain) decode of its residue gives the sum back.
bool window_holds(__int128 sum, const CrtConfig& crt) {
    const __int128 s = static_cast<__int128>(crt.product());
    if (!crt.signed_values) return sum >= 0 && sum < s;
    __int128 r = sum % s;
    if (r < 0) r += s;
    const std::int64_t decoded = to_signed_window(static_cast<std::uint64_t>(r), crt);
    return static_cast<__int128>(decoded) == sum;
}

std::string client_id(std::size_t k) { return "client-" + std::to_string(k + 1); }

}  // namespace

std::string protocol_status_name(ProtocolStatus status) {
    switch (status) {
        case ProtocolStatus::ok: return "ok";
        case ProtocolStatus::aborted_decoy: return "aborted_decoy";
        case ProtocolStatus::aborted_overflow: return "aborted_overflow";
    }
    return "unknown";
}

std::uint64_t aggregate_residue(const std::vector<std::uint64_t>& masked_shares,
                                const GhzRound& round) {
    if (round.outcomes.empty()) throw std::invalid_argument("round has no outcomes");
    if (masked_shares.size() + 1 != round.outcomes.size())
        throw std::invalid_argument("share count must match the round's client count");
    std::uint64_t sum = round.outcomes[0] % round.d;
    for (std::uint64_t s : masked_shares) {
        if (s >= round.d) throw std::invalid_argument("masked share exceeds the round modulus");
        sum = (sum + s) % round.d;
    }
    return sum;
}

nlohmann::json Transcript::to_json() const {
    nlohmann::json j;
    j["status"] = protocol_status_name(status);
    j["config"] = {{"moduli", config.moduli},
                   {"modulus_product", static_cast<std::uint64_t>(config.product())},
                   {"gamma", config.gamma},
                   {"clients", config.clients},
                   {"beta", config.beta},
                   {"signed_values", config.signed_values}};
    j["backend"] = ghz_backend_name(backend);
    j["decoys"] = decoys;
    j["decoy_threshold"] = decoy_threshold;
    j["attacker"] = attacker_name(attacker);
    j["seed"] = seed;
    j["decoy_checks"] = nlohmann::json::array();
    for (const DecoyCheckResult& c : decoy_checks)
        j["decoy_checks"].push_back({{"modulus", c.d},
                                     {"delta", c.delta},
                                     {"mismatches", c.mismatches},
                                     {"error_rate", c.error_rate},
                                     {"passed", c.passed}});
    j["rounds"] = nlohmann::json::array();
    for (const RoundRecord& r : rounds)
        j["rounds"].push_back({{"modulus", r.modulus},
                               {"component", r.component},
                               {"backend", ghz_backend_name(r.backend)},
                               {"ghz_outcomes", r.ghz_outcomes},
                               {"masked_shares", r.masked_shares},
                               {"residue", r.residue}});
    j["messages"] = nlohmann::json::array();
    for (const Message& m : messages)
        j["messages"].push_back({{"from", m.from},
                                 {"to", m.to},
                                 {"round", m.round},
                                 {"modulus", m.modulus},
                                 {"kind", m.kind},
                                 {"payload", m.payload}});
    j["totals"] = totals;
    j["gradient"] = gradient;
    return j;
}

Transcript run_protocol(const std::vector<std::vector<double>>& client_gradients,
                        const ProtocolConfig& config, Attacker attacker, std::uint64_t seed) {
    const CrtConfig& crt = config.crt;
    crt.validate();
    if (client_gradients.size() != crt.clients)
        throw std::invalid_argument("one gradient vector per client is required");
    const std::size_t dim = client_gradients.front().size();
    if (dim == 0) throw std::invalid_argument("gradient vectors must be non-empty");
    for (const auto& g : client_gradients)
        if (g.size() != dim) throw std::invalid_argument("gradient vectors must share one length");

    Transcript t;
    t.config = crt;
    t.backend = config.backend;
    t.decoys = config.decoys;
    t.decoy_threshold = config.decoy_threshold;
    t.attacker = attacker;
    t.seed = seed;

    std::uint64_t round_no = 0;
    t.messages.push_back({"server", "broadcast", round_no, 0, "announce-gamma",
                          std::llround(crt.gamma)});

    // Local scaling. The signed values carry the true magnitudes for the
    // window check; the residues are what the shares are computed from.
    std::vector<std::vector<std::int64_t>> signed_mu(crt.clients);
    std::vector<std::vector<std::uint64_t>> mu(crt.clients);
    try {
        for (std::size_t k = 0; k < crt.clients; ++k) {
            signed_mu[k] = scale_to_signed_integers(client_gradients[k], k, crt);
            mu[k] = scale_to_integers(client_gradients[k], k, crt);
        }
    } catch (const std::overflow_error&) {
        t.status = ProtocolStatus::aborted_overflow;
        return t;
    }
    for (std::size_t j = 0; j < dim; ++j) {
        __int128 sum = 0;
        for (std::size_t k = 0; k < crt.clients; ++k) sum += signed_mu[k][j];
        if (!window_holds(sum, crt)) {
            t.status = ProtocolStatus::aborted_overflow;
            return t;
        }
    }

    // Channel check, one decoy set per modulus; any failure aborts before
    // shares are sent.
    for (std::size_t i = 0; i < crt.moduli.size(); ++i) {
        const std::uint64_t d = crt.moduli[i];
        const DecoyCheckResult check =
            run_decoy_check(config.decoys, d, attacker, config.decoy_threshold,
                            common::derive_seed(seed, kDecoySeedTag, i));
        ++round_no;
        t.messages.push_back({"server", "broadcast", round_no, d, "decoy-verdict",
                              static_cast<std::int64_t>(check.mismatches)});
        t.decoy_checks.push_back(check);
        if (!check.passed) {
            t.status = ProtocolStatus::aborted_decoy;
            return t;
        }
    }

    // Mask rounds: one GHZ round per (modulus, component), masked shares to
    // the server, accumulated residue broadcast back.
    std::vector<std::vector<std::uint64_t>> residues(dim);
    for (std::size_t i = 0; i < crt.moduli.size(); ++i) {
        const std::uint64_t d = crt.moduli[i];
        for (std::size_t j = 0; j < dim; ++j) {
            const GhzRound ghz = run_ghz_round(crt.clients, d, config.backend,
                                               common::derive_seed(seed, kGhzSeedTag, i, j));
            ++round_no;
            RoundRecord rec;
            rec.modulus = d;
            rec.component = j;
            rec.backend = config.backend;
            rec.ghz_outcomes = ghz.outcomes;
            rec.masked_shares.reserve(crt.clients);
            for (std::size_t k = 0; k < crt.clients; ++k) {
                const std::uint64_t share = mu[k][j] % d;
                const std::uint64_t masked = (share + ghz.outcomes[k + 1]) % d;
                rec.masked_shares.push_back(masked);
                t.messages.push_back({client_id(k), "server", round_no, d, "masked-share",
                                      static_cast<std::int64_t>(masked)});
            }
            rec.residue = aggregate_residue(rec.masked_shares, ghz);
            t.messages.push_back({"server", "broadcast", round_no, d, "residue",
                                  static_cast<std::int64_t>(rec.residue)});
            residues[j].push_back(rec.residue);
            t.rounds.push_back(std::move(rec));
        }
    }

    t.totals.reserve(dim);
    t.gradient.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        const std::int64_t total = decode_aggregate(residues[j], crt);
        t.totals.push_back(total);
        t.gradient.push_back(static_cast<double>(total) / crt.gamma);
    }
    return t;
}

}  // namespace qfl::qsmc
