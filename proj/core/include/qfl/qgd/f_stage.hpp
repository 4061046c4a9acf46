#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qfl/arith/fixed_point.hpp"
#include "qfl/qsim/state_vector.hpp"

namespace qfl::qgd {

enum class DotDecode {
    exact_sine,   // sin^2(pi k / 2^l)
    small_angle,  // k^2 / 26; the quadratic fit is calibrated to l = 4
};

// Everything the classical decode must share with the circuit that produced
// the phase outcome.
struct RecoveryInputs {
    double c1 = 0.0;
    double c2_prime = 0.0;
    double x_norm_sq = 0.0;
    double w_norm_sq = 0.0;
    std::size_t dimension = 1;
};

// x.w = (c1^2 |x|^2 + c2'^2 |w|^2 - 4 D sin^2(theta)) / (2 c1 c2')
double recover_inner_product_from_sin_sq(double sin_sq, const RecoveryInputs& in);
double recover_inner_product(std::uint64_t theta_tilde, int l, DotDecode decode,
                             const RecoveryInputs& in);

// One sample's residual stage, run on actual registers: an l-qubit phase
// register in the measured basis state, a fixed-point dot register, and the
// rotation qubit that will carry the scaled residual amplitude.
//
//   |k>|0>|0> -> oracle -> |k>|enc(x.w)>|0>
//             -> Fourier subtract y, add b -> |k>|enc(F)>|0>
//             -> value-keyed rotation       -> |k>|enc(F)>(cos|0> + c3 F|1>)
//             -> uncompute                  -> |k>|0>(cos|0> + c3 F|1>)
//
// The dot register must return to |0> exactly (checked); the rotation qubit
// is the output. xw_of_fold maps a *folded* outcome to the decoded dot
// product; folding of the raw basis value happens inside.
struct FStageResult {
    double f_value = 0.0;      // decoded residual (on the codec grid)
    std::uint64_t f_raw = 0;   // final dot-register word
    double cos_amp = 1.0;      // rotation qubit |0> amplitude
    double sin_amp = 0.0;      // rotation qubit |1> amplitude, c3 * f_value
    bool overflowed = false;   // some value left the codec's signed range
};

FStageResult compute_f_register(std::uint64_t raw_outcome, int l,
                                const std::function<double(std::uint64_t)>& xw_of_fold, double y,
                                double b, double c3, const arith::FixedPoint& codec);

// Scaled-integer residual stage: the residual enters pre-multiplied so
// every reachable value is a small integer and the register never rounds.
//   oracle:   k -> (offset - mult * k) mod 2^width
//   subtract: Fourier constant-subtraction of `subtract`
//   readout:  raw / scale
// The oracle is linear in the raw outcome, so the two phase lobes k and
// 2^l - k land on different words with exactly equal mass; the modal
// readout resolves that structural tie (and float dust around it) toward
// the smaller word. Runs on the pushforward of a phase-register
// distribution: feeding the measured-outcome pmf reproduces the residual
// histogram of a run that measures the phase first and the residual
// register second.
struct ScaledFStage {
    std::uint64_t offset = 26;
    std::uint64_t mult = 4;
    std::uint64_t subtract = 16;
    int width = 5;
    double scale = 6.5;
};

struct ScaledStageResult {
    std::vector<double> f_pmf;   // residual-register distribution
    std::uint64_t modal_raw = 0;
    double f = 0.0;              // modal_raw / scale
};

ScaledStageResult run_scaled_f_stage(std::span<const double> theta_pmf, const ScaledFStage& cfg);

}  // namespace qfl::qgd
