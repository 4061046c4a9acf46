#pragma once

#include <cstdint>

#include "qfl/arith/fixed_point.hpp"
#include "qfl/qsim/operations.hpp"

namespace qfl::arith {

enum class Sign { plus, minus };

// |a> -> |(a + t) mod 2^q> (Sign::plus) or |(a - t) mod 2^q> (Sign::minus),
// realized as QFT, per-qubit phase rotations with the constant folded in,
// inverse QFT. Works on arbitrary superpositions of the register.
void fourier_add_const(qsim::StateVector& s, const qsim::QubitRange& reg, std::int64_t t,
                       Sign sign);

// Variant with the addend held in a second quantum register:
// |a>|t> -> |(a +/- t) mod 2^q>|t>, via controlled phase rotations between
// the source qubits and the Fourier-transformed target. Equivalent to the
// folded-constant form on basis-state sources.
void fourier_add_register(qsim::StateVector& s, const qsim::QubitRange& target,
                          const qsim::QubitRange& source, Sign sign);

struct FOracleReport {
    bool overflow = false;        // some reachable intermediate left the codec range
    std::uint64_t y_raw = 0;      // codec word subtracted
    std::uint64_t b_raw = 0;      // codec word added
};

// Turns a register holding encode(x.w) into encode(x.w - y + b): one
// Fourier transform pair around two folded-constant phase ramps (the
// interior QFT/iQFT pair between subtraction and addition cancels and is
// elided). Reachable values that overflow the signed codec range wrap mod
// 2^bits and are reported, not rejected.
FOracleReport apply_f_oracle(qsim::StateVector& s, const qsim::QubitRange& dot_reg, double y,
                             double b, const FixedPoint& codec);

}  // namespace qfl::arith
