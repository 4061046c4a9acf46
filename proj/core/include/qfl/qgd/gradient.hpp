#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfl/arith/fixed_point.hpp"
#include "qfl/prep/encoding.hpp"
#include "qfl/qgd/f_stage.hpp"
#include "qfl/qgd/theta.hpp"

namespace qfl::qgd {

enum class FArith {
    real,   // residuals in doubles
    codec,  // residuals through the fixed-point register stage
};

enum class PMode {
    exact,    // overlap probability read off the states
    sampled,  // Bernoulli draws at `swap_shots`
};

struct PipelineConfig {
    ThetaMode theta_mode = ThetaMode::exact;
    int theta_bits = 6;
    std::uint64_t theta_shots = 0;  // 0 reads the distribution argmax
    DotDecode dot_decode = DotDecode::exact_sine;
    FArith f_arith = FArith::real;
    arith::FixedPoint codec{16, 10, true};
    PMode p_mode = PMode::exact;
    std::uint64_t swap_shots = 8192;
    prep::EncodingMethod method = prep::EncodingMethod::angle_tree;
    double intercept = 0.0;
    double c1_override = 0.0;  // 0 picks 1 / max |x_i^j| from the data
    double c2_override = 0.0;  // 0 picks 1 / ||w||
    double c3_override = 0.0;  // 0 picks 1 / max |residual| per call
    std::uint64_t seed = 1;
};

struct GradientEstimate {
    std::vector<double> g;
    std::vector<double> p_values;            // overlap probability per component
    std::vector<double> error_budget;        // decode + sampling bound per component
    std::vector<std::uint64_t> theta_tildes;  // per sample (phase modes only)
    std::vector<double> f_values;            // per sample
    double c1 = 0.0;
    double c2_prime = 0.0;
    double c3 = 0.0;
    int theta_bits = 0;
    std::uint64_t seed = 0;

    nlohmann::json to_json() const;
};

// Feature state for component j over an m-qubit sample index and a 2-qubit
// payload: (1/sqrt(M)) sum_i |i> (c1 x_i^j |0> + sqrt(1-(c1 x_i^j)^2) |1>) |1>.
// M need not be a power of two; unused index values carry zero amplitude.
qsim::StateVector build_feature_state(const std::vector<std::vector<double>>& rows,
                                      std::size_t j, double c1);

// Residual state over the same registers, rotation qubit in the upper slot:
// (1/sqrt(M)) sum_i |i> |0> (cos_i |0> + sin_i |1>), sin_i = c3 * F_i.
qsim::StateVector build_f_state(std::span<const double> cos_amps,
                                std::span<const double> sin_amps);

// Overlap readout: P = 1/2 + Re<psi|chi> / 2. The layouts must match.
// With the two states above, 2P - 1 = (c1 c3 / M) sum_i F_i x_i^j.
double swap_test_probability(const qsim::StateVector& psi, const qsim::StateVector& chi);

// Bernoulli estimate of the same probability at finite shots.
double swap_test_sampled(double p, std::uint64_t shots, std::uint64_t seed);

// Full per-component gradient of the half-MSE loss at (w, intercept):
// g^j = (1/M) sum_i (x_i . w + intercept - y_i) x_i^j, estimated through the
// configured phase, residual, and overlap stages.
GradientEstimate local_gradient(const std::vector<std::vector<double>>& rows,
                                std::span<const double> targets, std::span<const double> w,
                                const PipelineConfig& cfg);

}  // namespace qfl::qgd
