#pragma once

#include <cstdint>

namespace qfl::arith {

// Fixed-point codec for register-encoded reals: `bits` total, `frac_bits`
// fractional, signed values stored as two's complement residues mod 2^bits.
// encode() rounds half away from zero, so decode(encode(v)) is within
// 2^-frac_bits / 2 of v whenever v is in range.
struct FixedPoint {
    int bits = 16;
    int frac_bits = 8;
    bool is_signed = true;

    double resolution() const;  // 2^-frac_bits
    double min_value() const;
    double max_value() const;   // largest encodable value
    bool fits(double v) const;

    // Raw register word in [0, 2^bits). Out-of-range values wrap mod 2^bits
    // (two's complement); callers that care use fits() to flag overflow.
    std::uint64_t encode(double v) const;

    // Signed integer readout of a raw word (two's complement when signed).
    std::int64_t raw_to_int(std::uint64_t raw) const;

    double decode(std::uint64_t raw) const;
};

}  // namespace qfl::arith
