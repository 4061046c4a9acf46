#include "qfl/arith/fourier_adder.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfl::arith {

using qsim::ControlSpec;
using qsim::QubitRange;
using qsim::StateVector;

void fourier_add_const(StateVector& s, const QubitRange& reg, std::int64_t t, Sign sign) {
    qsim::apply_qft(s, reg, /*inverse=*/false);
    qsim::apply_phase_ramp(s, reg, t, sign == Sign::plus ? +1 : -1);
    qsim::apply_qft(s, reg, /*inverse=*/true);
}

void fourier_add_register(StateVector& s, const QubitRange& target, const QubitRange& source,
                          Sign sign) {
    if (target.mask() & source.mask())
        throw std::invalid_argument("adder target and source registers overlap");
    if (target.count != source.count)
        throw std::invalid_argument("adder registers must have equal width");
    const int q = target.count;
    const double dir = (sign == Sign::plus) ? +1.0 : -1.0;
    qsim::apply_qft(s, target, /*inverse=*/false);
    // Source bit m contributes t_m * 2^m; on Fourier qubit k that is a phase
    // of 2 pi 2^(m+k) / 2^q, an identity once m + k >= q.
    for (int m = 0; m < q; ++m) {
        const ControlSpec ctrl = ControlSpec::on(source.first + m);
        for (int k = 0; k + m < q; ++k) {
            const double ang = dir * 2.0 * std::numbers::pi * std::ldexp(1.0, m + k - q);
            qsim::apply_1q(s, qsim::GateSpec::phase(ang).matrix(), target.first + k, ctrl);
        }
    }
    qsim::apply_qft(s, target, /*inverse=*/true);
}

FOracleReport apply_f_oracle(StateVector& s, const QubitRange& dot_reg, double y, double b,
                             const FixedPoint& codec) {
    if (dot_reg.count != codec.bits)
        throw std::invalid_argument("dot register width does not match codec");
    FOracleReport report;
    report.y_raw = codec.encode(y);
    report.b_raw = codec.encode(b);

    // Flag any reachable intermediate that leaves the codec range. The codec
    // arithmetic itself wraps (two's complement), so execution continues.
    const double y_dec = codec.decode(report.y_raw);
    const double b_dec = codec.decode(report.b_raw);
    const std::uint64_t dim = s.dim();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (s[i] == qsim::amp_t{}) continue;
        const double v = codec.decode(dot_reg.extract(i));
        if (!codec.fits(v - y_dec) || !codec.fits(v - y_dec + b_dec)) {
            report.overflow = true;
            break;
        }
    }

    qsim::apply_qft(s, dot_reg, /*inverse=*/false);
    qsim::apply_phase_ramp(s, dot_reg, static_cast<std::int64_t>(report.y_raw), -1);
    qsim::apply_phase_ramp(s, dot_reg, static_cast<std::int64_t>(report.b_raw), +1);
    qsim::apply_qft(s, dot_reg, /*inverse=*/true);
    return report;
}

}  // namespace qfl::arith
