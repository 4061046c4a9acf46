#include "qfl/qsmc/decoy.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "qfl/common/rng.hpp"

namespace qfl::qsmc {

std::string attacker_name(Attacker attacker) {
    return attacker == Attacker::intercept_resend ? "intercept_resend" : "none";
}

Attacker attacker_from_name(const std::string& name) {
    if (name == "none") return Attacker::none;
    if (name == "intercept_resend") return Attacker::intercept_resend;
    throw std::invalid_argument("unknown attacker model: " + name);
}

DecoyCheckResult run_decoy_check(std::size_t delta, std::uint64_t d, Attacker attacker,
                                 double threshold, std::uint64_t seed) {
    if (d < 2) throw std::invalid_argument("qudit level must be at least 2");
    if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be non-negative");

    DecoyCheckResult res;
    res.delta = delta;
    res.d = d;
    std::mt19937_64 gen(seed);
    for (std::size_t i = 0; i < delta; ++i) {
        const std::uint64_t basis = common::bounded(gen, 2);
        const std::uint64_t value = common::bounded(gen, d);
        std::uint64_t readback = value;
        if (attacker == Attacker::intercept_resend) {
            const std::uint64_t guess = common::bounded(gen, 2);
            // A wrong-basis measurement leaves the decoy uniform in the
            // announced basis; a right guess passes the value through.
            if (guess != basis) readback = common::bounded(gen, d);
        }
        if (readback != value) ++res.mismatches;
    }
    res.error_rate =
        delta == 0 ? 0.0 : static_cast<double>(res.mismatches) / static_cast<double>(delta);
    res.passed = res.error_rate <= threshold;
    return res;
}

double intercept_resend_detection_rate(std::uint64_t d, std::size_t delta) {
    if (d < 2) throw std::invalid_argument("qudit level must be at least 2");
    const double keep = (static_cast<double>(d) + 1.0) / (2.0 * static_cast<double>(d));
    return 1.0 - std::pow(keep, static_cast<double>(delta));
}

}  // namespace qfl::qsmc
