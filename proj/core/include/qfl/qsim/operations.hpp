#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qfl/qsim/gates.hpp"
#include "qfl/qsim/state_vector.hpp"

namespace qfl::qsim {

// Condition "basis index i participates iff (i & mask) == value".
// Composable: extending a controlled operation by one more control qubit is
// just another bit in the mask, which is what lets every primitive here be
// lifted into a controlled-Q for phase estimation without special cases.
struct ControlSpec {
    std::uint64_t mask = 0;
    std::uint64_t value = 0;

    bool matches(std::uint64_t i) const { return (i & mask) == value; }

    ControlSpec with(int qubit, bool set = true) const {
        ControlSpec c = *this;
        const std::uint64_t bit = std::uint64_t{1} << qubit;
        c.mask |= bit;
        if (set) c.value |= bit;
        else c.value &= ~bit;
        return c;
    }
    static ControlSpec on(int qubit, bool set = true) { return ControlSpec{}.with(qubit, set); }
};

// 2x2 unitary on `target`, restricted to the ControlSpec subspace.
// The target qubit must not appear in the control mask.
void apply_1q(StateVector& s, const Mat2& m, int target, const ControlSpec& ctrl = {});

// Typed-gate entry point: `targets` must hold exactly one qubit for the 2x2
// gate kinds; `controls` are plain |1>-controls. Overlapping target/control
// sets are rejected.
void apply_gate(StateVector& s, const GateSpec& gate, std::span<const int> targets,
                std::span<const int> controls = {});

// Multiplies amplitudes by -1 where (i & flip_mask) == flip_value, within the
// ControlSpec subspace. Implements the reflection diagonals.
void apply_phase_flip(StateVector& s, std::uint64_t flip_mask, std::uint64_t flip_value,
                      const ControlSpec& ctrl = {});

// Multiplies the ControlSpec subspace by e^{i*angle}. An uncontrolled call is
// a global phase; a controlled call is how a global phase inside a
// sub-circuit becomes observable when that circuit is itself controlled.
void apply_global_phase(StateVector& s, double angle, const ControlSpec& ctrl = {});

// Value-indexed diagonal phase: amplitude of every basis state picks up
// e^{i * sign * 2*pi * t * v / 2^q} where v is the register's value.
// This is the "rotations only" interior of Fourier-basis constant addition.
void apply_phase_ramp(StateVector& s, const QubitRange& reg, std::int64_t t, int sign,
                      const ControlSpec& ctrl = {});

// Quantum Fourier transform on a register, as the value-space DFT
// |a> -> (1/sqrt(N)) sum_b exp(+2*pi*i*a*b/N) |b>  (inverse: conjugate).
// Radix-2 FFT per register slice; O(dim * count) overall.
void apply_qft(StateVector& s, const QubitRange& reg, bool inverse = false);

enum class OracleMode {
    xor_into,  // |a>|b> -> |a>|b ^ f(a)>
    add_mod,   // |a>|b> -> |a>|(b + f(a)) mod 2^q>
};

// Classical-function-backed basis oracle. `in` and `out` must be disjoint.
// f is validated over the support of the state before anything is mutated:
// any reachable f(a) that does not fit in `out` is a rejection.
void apply_basis_oracle(StateVector& s, const std::function<std::uint64_t(std::uint64_t)>& f,
                        const QubitRange& in, const QubitRange& out, OracleMode mode,
                        const ControlSpec& ctrl = {});

// Applies gate_for(v) to `target` where v is the value of `value_reg`.
// This is the register-valued controlled rotation used by the encoders:
// one pass over the state, matrices precomputed per register value.
void apply_value_controlled_1q(StateVector& s, const QubitRange& value_reg, int target,
                               const std::function<Mat2(std::uint64_t)>& gate_for,
                               const ControlSpec& ctrl = {});

// Marginal probabilities over a register: probs[v] = sum of |amp|^2 with the
// register reading v. Register width is capped at 24 qubits.
std::vector<double> marginal_probabilities(const StateVector& s, const QubitRange& reg);

// Removes a register that is exactly |0...0>: every amplitude on a nonzero
// register value must be below `tol` in magnitude, otherwise throws.
// Remaining qubits shift down; layout entries are re-based (the dropped
// register's entry, if any, disappears).
StateVector drop_zero_register(const StateVector& s, const QubitRange& reg, double tol = 1e-10);

// Appends `count` qubits in |0> above the current ones and names them.
StateVector append_zero_register(const StateVector& s, const std::string& name, int count);

}  // namespace qfl::qsim
