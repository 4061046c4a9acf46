#include "qfl/arith/fixed_point.hpp"

#include <cmath>
#include <stdexcept>

namespace qfl::arith {

namespace {
void validate(const FixedPoint& fp) {
    if (fp.bits < 1 || fp.bits > 62) throw std::invalid_argument("codec width must be in [1, 62]");
    if (fp.frac_bits < 0 || fp.frac_bits > fp.bits)
        throw std::invalid_argument("fractional bits must be in [0, bits]");
}
}  // namespace

double FixedPoint::resolution() const { return std::ldexp(1.0, -frac_bits); }

double FixedPoint::min_value() const {
    validate(*this);
    if (!is_signed) return 0.0;
    return -std::ldexp(1.0, bits - 1 - frac_bits);
}

double FixedPoint::max_value() const {
    validate(*this);
    const std::int64_t top = is_signed ? ((std::int64_t{1} << (bits - 1)) - 1)
                                       : ((std::int64_t{1} << bits) - 1);
    return static_cast<double>(top) * resolution();
}

bool FixedPoint::fits(double v) const {
    validate(*this);
    const double scaled = v * std::ldexp(1.0, frac_bits);
    const double r = std::round(std::abs(scaled)) * (scaled < 0 ? -1.0 : 1.0);
    const std::int64_t lo = is_signed ? -(std::int64_t{1} << (bits - 1)) : 0;
    const std::int64_t hi = is_signed ? ((std::int64_t{1} << (bits - 1)) - 1)
                                      : ((std::int64_t{1} << bits) - 1);
    return r >= static_cast<double>(lo) && r <= static_cast<double>(hi);
}

std::uint64_t FixedPoint::encode(double v) const {
    validate(*this);
    if (!std::isfinite(v)) throw std::invalid_argument("cannot encode a non-finite value");
    // llround rounds half away from zero, matching the codec contract.
    const std::int64_t r = std::llround(v * std::ldexp(1.0, frac_bits));
    const std::uint64_t mask = (bits == 62) ? ((std::uint64_t{1} << 62) - 1)
                                            : ((std::uint64_t{1} << bits) - 1);
    return static_cast<std::uint64_t>(r) & mask;
}

std::int64_t FixedPoint::raw_to_int(std::uint64_t raw) const {
    validate(*this);
    const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
    raw &= mask;
    if (is_signed && (raw >> (bits - 1)))
        return static_cast<std::int64_t>(raw) - (std::int64_t{1} << bits);
    return static_cast<std::int64_t>(raw);
}

double FixedPoint::decode(std::uint64_t raw) const {
    return static_cast<double>(raw_to_int(raw)) * resolution();
}

}  // namespace qfl::arith
