#pragma once

#include <span>

#include "qfl/arith/fixed_point.hpp"
#include "qfl/prep/angle_tree.hpp"
#include "qfl/prep/encoding.hpp"
#include "qfl/qsim/state_vector.hpp"

namespace qfl::prep {

// Parameter state on log2(D) + 1 qubits, registers {"j", "flag"}.
//
//   angle_tree:          sum_j (w^j / ||w||) |j> tensor |1>
//   amplitude_rotation:  (1/sqrt(D)) sum_j |j> (sqrt(1-(c2 w^j)^2) |0> + c2 w^j |1>)
//
// For angle_tree the effective c2 is intrinsically 1/||w|| (the tree
// normalizes); an explicit c2 is honored only by amplitude_rotation, where
// 0 means "use 1/||w||". Restricting the amplitude_rotation state to
// flag = |1> reproduces the angle_tree state scaled by c2/c2_prime.
qsim::StateVector prepare_parameter_state(std::span<const double> w, EncodingMethod method,
                                          double c2 = 0.0);

// Same, from a prebuilt tree (angle_tree method only).
qsim::StateVector prepare_parameter_state(const AngleTree& tree);

// Data state on log2(D) + 1 qubits, registers {"j", "flag"}:
//   (1/sqrt(D)) sum_j |j> (sqrt(1-(c1 x^j)^2) |0> + c1 x^j |1>)
// Requires c1 * |x^j| <= 1 for every component.
//
// The plain form rotates the flag directly off the component index; the
// oracle form routes through an explicit fixed-point work register (lookup,
// register-valued rotation, inverse lookup) and discards it again. The two
// agree up to the codec's rounding of each component, exactly when every
// component is representable.
qsim::StateVector prepare_data_state(std::span<const double> x, double c1);
qsim::StateVector prepare_data_state_via_oracle(std::span<const double> x, double c1,
                                                const arith::FixedPoint& codec);

enum class NormMode {
    direct,  // exact 2-norm
    qpe,     // amplitude-estimation circuit, precision from epsilon_m
};

struct NormEstimate {
    double value = 0.0;
    bool degenerate = false;       // estimated flag probability rounded to zero
    std::uint64_t theta_tilde = 0; // folded phase-register outcome (qpe mode)
    int precision_bits = 0;        // l = ceil(log2(1/epsilon_m)) (qpe mode)
};

// ||x|| via the flag-probability identity P(flag=1) = c1^2 ||x||^2 / D.
// qpe mode builds the preparation unitary, reflects about |0...0> and the
// flag's |0> branch, and phase-estimates the resulting rotation; the
// returned estimate is sqrt(D) * sin(theta_hat) / c1.
NormEstimate estimate_norm(std::span<const double> x, double c1, double epsilon_m,
                           NormMode mode = NormMode::direct, std::uint64_t seed = 0);

}  // namespace qfl::prep
