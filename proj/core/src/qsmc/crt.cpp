#include "qfl/qsmc/crt.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace qfl::qsmc {

namespace {

using int128 = __int128;
using uint128 = unsigned __int128;

// Largest window that still decodes through 64-bit signed arithmetic.
constexpr uint128 kMaxProduct = uint128{1} << 63;

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0;
    std::int64_t next_t = 1;
    std::int64_t r = static_cast<std::int64_t>(m);
    std::int64_t next_r = static_cast<std::int64_t>(a % m);
    while (next_r != 0) {
        const std::int64_t q = r / next_r;
        t = std::exchange(next_t, t - q * next_t);
        r = std::exchange(next_r, r - q * next_r);
    }
    if (r != 1) throw std::invalid_argument("moduli must be pairwise coprime");
    if (t < 0) t += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(t);
}

}  // namespace

unsigned __int128 CrtConfig::product() const {
    uint128 p = 1;
    for (std::uint64_t m : moduli) {
        p *= m;
        if (p >= kMaxProduct)
            throw std::overflow_error("modulus product exceeds the 64-bit aggregate window");
    }
    return p;
}

void CrtConfig::validate() const {
    if (moduli.empty()) throw std::invalid_argument("at least one modulus is required");
    for (std::uint64_t m : moduli)
        if (m < 2) throw std::invalid_argument("moduli must be at least 2");
    for (std::size_t i = 0; i < moduli.size(); ++i)
        for (std::size_t j = i + 1; j < moduli.size(); ++j)
            if (std::gcd(moduli[i], moduli[j]) != 1)
                throw std::invalid_argument("moduli must be pairwise coprime");
    (void)product();
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    if (clients == 0) throw std::invalid_argument("client count must be positive");
    if (!beta.empty()) {
        if (beta.size() != clients)
            throw std::invalid_argument("beta length must match the client count");
        for (double b : beta)
            if (!(b > 0.0)) throw std::invalid_argument("client weights must be positive");
    }
}

double CrtConfig::weight(std::size_t k) const {
    if (k >= clients) throw std::out_of_range("client index out of range");
    return beta.empty() ? 1.0 / static_cast<double>(clients) : beta[k];
}

std::vector<std::int64_t> scale_to_signed_integers(const std::vector<double>& gradient,
                                                   std::size_t client_index,
                                                   const CrtConfig& config) {
    const double w = config.weight(client_index);
    const double limit = std::ldexp(1.0, 62);
    std::vector<std::int64_t> out;
    out.reserve(gradient.size());
    for (double g : gradient) {
        const double x = config.gamma * w * g;
        if (!std::isfinite(x) || std::abs(x) >= limit)
            throw std::overflow_error("scaled gradient component is not representable");
        out.push_back(std::llround(x));
    }
    return out;
}

std::uint64_t to_residue(std::int64_t value, const CrtConfig& config) {
    const int128 s = static_cast<int128>(config.product());
    int128 r = static_cast<int128>(value) % s;
    if (r < 0) r += s;
    return static_cast<std::uint64_t>(r);
}

std::vector<std::uint64_t> scale_to_integers(const std::vector<double>& gradient,
                                             std::size_t client_index, const CrtConfig& config) {
    const std::vector<std::int64_t> raw =
        scale_to_signed_integers(gradient, client_index, config);
    std::vector<std::uint64_t> out;
    out.reserve(raw.size());
    for (std::int64_t v : raw) {
        if (!config.signed_values && v < 0)
            throw std::overflow_error("negative scaled gradient requires signed mode");
        out.push_back(to_residue(v, config));
    }
    return out;
}

std::uint64_t residue_mod(std::int64_t value, std::uint64_t modulus) {
    if (modulus == 0) throw std::invalid_argument("modulus must be positive");
    const int128 m = static_cast<int128>(modulus);
    int128 r = static_cast<int128>(value) % m;
    if (r < 0) r += m;
    return static_cast<std::uint64_t>(r);
}

std::vector<std::uint64_t> compute_shares(std::int64_t value, const CrtConfig& config) {
    std::vector<std::uint64_t> shares;
    shares.reserve(config.moduli.size());
    for (std::uint64_t m : config.moduli) shares.push_back(residue_mod(value, m));
    return shares;
}

std::uint64_t crt_reconstruct(const std::vector<std::uint64_t>& residues,
                              const CrtConfig& config) {
    if (config.moduli.empty()) throw std::invalid_argument("at least one modulus is required");
    if (residues.size() != config.moduli.size())
        throw std::invalid_argument("one residue per modulus is required");
    for (std::size_t i = 0; i < residues.size(); ++i)
        if (residues[i] >= config.moduli[i])
            throw std::invalid_argument("residue exceeds its modulus");

    // Incremental pairing: fold each modulus into the running solution.
    uint128 x = residues[0];
    uint128 m = config.moduli[0];
    for (std::size_t i = 1; i < config.moduli.size(); ++i) {
        const std::uint64_t mi = config.moduli[i];
        const std::uint64_t x_mod = static_cast<std::uint64_t>(x % mi);
        const std::uint64_t delta = (residues[i] + mi - x_mod) % mi;
        const std::uint64_t inv = mod_inverse(static_cast<std::uint64_t>(m % mi), mi);
        const std::uint64_t t = static_cast<std::uint64_t>((uint128{delta} * inv) % mi);
        x += m * t;
        m *= mi;
    }
    return static_cast<std::uint64_t>(x);
}

std::int64_t to_signed_window(std::uint64_t value, const CrtConfig& config) {
    const uint128 s = config.product();
    if (uint128{value} >= s) throw std::invalid_argument("value lies outside [0, S)");
    const uint128 half = (s + 1) / 2;
    if (uint128{value} >= half)
        return static_cast<std::int64_t>(static_cast<int128>(value) - static_cast<int128>(s));
    return static_cast<std::int64_t>(value);
}

std::int64_t decode_aggregate(const std::vector<std::uint64_t>& residues,
                              const CrtConfig& config) {
    const std::uint64_t total = crt_reconstruct(residues, config);
    if (config.signed_values) return to_signed_window(total, config);
    return static_cast<std::int64_t>(total);
}

}  // namespace qfl::qsmc
