#pragma once

#include <span>
#include <vector>

#include "qfl/prep/angle_tree.hpp"
#include "qfl/prep/encoding.hpp"
#include "qfl/qsim/phase_estimation.hpp"
#include "qfl/qsim/state_vector.hpp"

namespace qfl::qgd {

// Interference circuit A over log2(D) + 2 qubits whose amplitude on the
// (flag = 1, branch = 1) subspace encodes the data/parameter mismatch:
//
//   A = (H on branch) (branch=0: data encoder) (branch=1: parameter encoder)
//       (H on branch)
//
// has P(flag=1, branch=1) = (c1^2 |x|^2 + c2'^2 |w|^2 - 2 c1 c2' x.w) / (4D),
// the quantity phase estimation turns into an inner-product readout.
struct OverlapPrep {
    std::vector<double> x;  // padded to D
    std::vector<double> w;  // padded to D
    double c1 = 0.0;
    double c2 = 0.0;        // rotation scale actually applied (amplitude_rotation)
    double c2_prime = 0.0;  // effective flag-amplitude scale; sqrt(D)*c2 for the tree
    prep::EncodingMethod method = prep::EncodingMethod::angle_tree;
    prep::AngleTree tree;   // populated for the angle_tree method
    int data_qubits = 0;

    int flag_qubit() const { return data_qubits; }
    int branch_qubit() const { return data_qubits + 1; }
    int n_qubits() const { return data_qubits + 2; }
    std::uint64_t dimension() const { return std::uint64_t{1} << data_qubits; }

    // Applies A (or its inverse) restricted to a control subspace, so the
    // whole circuit lifts into the controlled Grover powers of phase
    // estimation unchanged.
    void apply(qsim::StateVector& s, const qsim::ControlSpec& ctrl = {},
               bool inverse = false) const;

    // A|0...0>, registers {"j", "flag", "branch"}.
    qsim::StateVector prepare() const;

    // Closed-form P(flag=1, branch=1) and the rotation angle it induces.
    double good_probability() const;
    double theta() const;
};

OverlapPrep make_overlap_prep(std::span<const double> x, std::span<const double> w,
                              const prep::EncodingConstants& enc);

// One Grover step Q = -A S00 Adag S11, where S11 reflects the
// (flag = 1, branch = 1) subspace and S00 reflects |0...0> over the prep's
// qubits. Eigenvalues on the rotation plane are e^{+-2i theta}.
void apply_grover_step(qsim::StateVector& s, const OverlapPrep& prep,
                       const qsim::ControlSpec& ctrl = {});

// The same step packaged for phase_estimation. Copies the prep, so the
// returned callable owns everything it needs.
qsim::ControlledOp grover_operator(OverlapPrep prep);

}  // namespace qfl::qgd
