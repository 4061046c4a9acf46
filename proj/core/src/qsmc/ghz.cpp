#include "qfl/qsmc/ghz.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qfl/common/rng.hpp"

namespace qfl::qsmc {

namespace {

constexpr std::uint64_t kAmplitudeCap = std::uint64_t{1} << 22;

std::uint64_t checked_dimension(std::uint64_t d, std::size_t parties) {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < parties; ++i) {
        if (n > kAmplitudeCap / d)
            throw std::invalid_argument(
                "statevector backend exceeds the amplitude cap; use the constraint sampler");
        n *= d;
    }
    return n;
}

}  // namespace

std::string ghz_backend_name(GhzBackend backend) {
    return backend == GhzBackend::qudit_statevector ? "qudit_statevector" : "constraint_sampler";
}

GhzBackend ghz_backend_from_name(const std::string& name) {
    if (name == "qudit_statevector") return GhzBackend::qudit_statevector;
    if (name == "constraint_sampler") return GhzBackend::constraint_sampler;
    throw std::invalid_argument("unknown mask backend: " + name);
}

std::uint64_t GhzRound::sum_mod_d() const {
    std::uint64_t sum = 0;
    for (std::uint64_t o : outcomes) sum = (sum + o % d) % d;
    return sum;
}

GhzRound run_ghz_round(std::size_t clients, std::uint64_t d, GhzBackend backend,
                       std::uint64_t seed) {
    if (d < 2) throw std::invalid_argument("qudit level must be at least 2");
    if (clients == 0) throw std::invalid_argument("at least one client is required");
    const std::size_t parties = clients + 1;

    GhzRound round;
    round.d = d;
    round.backend = backend;
    round.outcomes.assign(parties, 0);
    std::mt19937_64 gen(seed);

    if (backend == GhzBackend::constraint_sampler) {
        std::uint64_t sum = 0;
        for (std::size_t k = 1; k < parties; ++k) {
            round.outcomes[k] = common::bounded(gen, d);
            sum = (sum + round.outcomes[k]) % d;
        }
        round.outcomes[0] = (d - sum) % d;
        return round;
    }

    const std::uint64_t n = checked_dimension(d, parties);
    std::vector<std::complex<double>> amp(n);

    // |GHZ> = (1/sqrt d) sum_q |q, q, ..., q>: equal-index positions sit at
    // multiples of 1 + d + d^2 + ...
    std::uint64_t diag_stride = 0;
    {
        std::uint64_t place = 1;
        for (std::size_t i = 0; i < parties; ++i) {
            diag_stride += place;
            place *= d;
        }
    }
    const double root = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::uint64_t q = 0; q < d; ++q) amp[q * diag_stride] = root;

    // Fourier-basis measurement of particle i = inverse discrete Fourier
    // rotation on axis i followed by a computational readout.
    std::vector<std::complex<double>> twiddle(d);
    for (std::uint64_t k = 0; k < d; ++k) {
        const double phi = -2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(d);
        twiddle[k] = std::complex<double>(std::cos(phi), std::sin(phi)) * root;
    }
    std::vector<std::complex<double>> slice(d);
    std::uint64_t stride = 1;
    for (std::size_t axis = 0; axis < parties; ++axis) {
        const std::uint64_t block = stride * d;
        for (std::uint64_t base = 0; base < n; base += block)
            for (std::uint64_t off = 0; off < stride; ++off) {
                for (std::uint64_t q = 0; q < d; ++q)
                    slice[q] = amp[base + off + q * stride];
                for (std::uint64_t p = 0; p < d; ++p) {
                    std::complex<double> acc = 0.0;
                    for (std::uint64_t q = 0; q < d; ++q)
                        acc += twiddle[(p * q) % d] * slice[q];
                    amp[base + off + p * stride] = acc;
                }
            }
        stride = block;
    }

    // One joint sample by inverse CDF over the exact probability vector.
    double total = 0.0;
    for (const auto& a : amp) total += std::norm(a);
    const double r = common::uniform01(gen) * total;
    double cum = 0.0;
    std::uint64_t index = n - 1;
    for (std::uint64_t i = 0; i < n; ++i) {
        cum += std::norm(amp[i]);
        if (cum > r) {
            index = i;
            break;
        }
    }
    for (std::size_t i = 0; i < parties; ++i) {
        round.outcomes[i] = index % d;
        index /= d;
    }
    return round;
}

}  // namespace qfl::qsmc
