#pragma once

#include <cstdint>
#include <vector>

#include "qfl/qgd/grover.hpp"
#include "qfl/qsim/measure.hpp"

namespace qfl::qgd {

enum class ThetaMode {
    exact,         // closed-form angle, no register, no quantization
    qpe_full,      // full phase-estimation circuit on the Grover step
    qpe_analytic,  // closed-form register distribution, then the same readout
};

// The Grover step has eigenphases +theta/pi and -theta/pi (mod 1); a raw
// register outcome k and 2^l - k therefore alias the same angle. Folds to
// min(k, 2^l - k), so the result lies in [0, 2^(l-1)].
std::uint64_t fold_phase_outcome(std::uint64_t k, int l);

struct ThetaEstimate {
    std::uint64_t theta_tilde = 0;  // folded outcome
    std::uint64_t raw_outcome = 0;  // histogram argmax before folding
    int l = 0;
    double theta_exact = 0.0;  // closed-form rotation angle of the prep
    double theta_hat = 0.0;    // pi * theta_tilde / 2^l (exact mode: theta_exact)
    qsim::Histogram histogram;          // populated when shots > 0
    std::vector<double> distribution;   // register pmf (empty in exact mode)
};

// Runs the configured estimator. shots == 0 reads the distribution argmax
// instead of sampling; seed feeds the sampler only.
ThetaEstimate estimate_theta(const OverlapPrep& prep, int l, ThetaMode mode, std::uint64_t shots,
                             std::uint64_t seed);

}  // namespace qfl::qgd
