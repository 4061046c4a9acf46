#pragma once

#include <cstdint>
#include <string>

// Channel checking with decoy qudits. Decoys are prepared in one of two
// mutually unbiased bases; an intercept-resend attacker guesses the basis,
// measures, and re-sends, so a wrong guess randomizes the value the
// receiver reads back in the announced basis.

namespace qfl::qsmc {

enum class Attacker {
    none,
    intercept_resend,
};

[[nodiscard]] std::string attacker_name(Attacker attacker);
[[nodiscard]] Attacker attacker_from_name(const std::string& name);

struct DecoyCheckResult {
    std::size_t delta = 0;
    std::uint64_t d = 2;
    std::size_t mismatches = 0;
    double error_rate = 0.0;
    bool passed = true;
};

// Compares delta decoys against their prepared values and passes when the
// observed error rate does not exceed the threshold. delta = 0 disables
// the check (it passes with no comparisons). Each intercepted decoy
// mismatches with probability (d-1)/(2d).
[[nodiscard]] DecoyCheckResult run_decoy_check(std::size_t delta, std::uint64_t d,
                                               Attacker attacker, double threshold,
                                               std::uint64_t seed);

// 1 - ((d+1)/(2d))^delta: probability that a zero-threshold check catches
// an intercept-resend attacker.
[[nodiscard]] double intercept_resend_detection_rate(std::uint64_t d, std::size_t delta);

}  // namespace qfl::qsmc
