#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qfl/qsim/operations.hpp"

namespace qfl::qsim {

// One application of a unitary, restricted to a control subspace. The
// callable must honor the ControlSpec exactly (including any global phase
// of the unitary, which becomes observable under control).
using ControlledOp = std::function<void(StateVector&, const ControlSpec&)>;

// Textbook phase estimation: appends an l-qubit register (named `reg_name`)
// above the system, Hadamards it, applies op 2^k times controlled on ancilla
// k, then the inverse Fourier transform. If the system state is an
// eigenvector with eigenvalue e^{2 pi i phi}, the register peaks at the
// best l-bit approximations of phi (exact when phi is on the 2^-l grid).
StateVector phase_estimation(const StateVector& system, const ControlledOp& op, int l,
                             const std::string& reg_name = "theta");

// Weighted eigenphase mixture of a measured phase register, closed form:
//   P(k) = sum_m weight_m * |alpha(phi_m, k)|^2
//   |alpha(phi, k)|^2 = sin^2(pi 2^l d) / (2^{2l} sin^2(pi d)),  d = phi - k/2^l
// which equals the register marginals of the full circuit when the system
// state decomposes over eigenvectors with those weights. Weights must sum
// to 1 within 1e-9.
std::vector<double> qpe_distribution(std::span<const std::pair<double, double>> phase_weights,
                                     int l);

}  // namespace qfl::qsim
