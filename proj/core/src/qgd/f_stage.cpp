#include "qfl/qgd/f_stage.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qfl/arith/fourier_adder.hpp"
#include "qfl/qgd/theta.hpp"
#include "qfl/qsim/gates.hpp"
#include "qfl/qsim/operations.hpp"

namespace qfl::qgd {

using qsim::QubitRange;
using qsim::StateVector;

double recover_inner_product_from_sin_sq(double sin_sq, const RecoveryInputs& in) {
    if (!(in.c1 > 0.0) || !(in.c2_prime > 0.0))
        throw std::invalid_argument("recovery requires positive scaling constants");
    const double d = static_cast<double>(in.dimension);
    return (in.c1 * in.c1 * in.x_norm_sq + in.c2_prime * in.c2_prime * in.w_norm_sq -
            4.0 * d * sin_sq) /
           (2.0 * in.c1 * in.c2_prime);
}

double recover_inner_product(std::uint64_t theta_tilde, int l, DotDecode decode,
                             const RecoveryInputs& in) {
    double sin_sq = 0.0;
    if (decode == DotDecode::exact_sine) {
        const double angle =
            std::numbers::pi * static_cast<double>(theta_tilde) / std::ldexp(1.0, l);
        sin_sq = std::sin(angle) * std::sin(angle);
    } else {
        if (l != 4)
            throw std::invalid_argument("the quadratic decode is calibrated to 4 phase bits");
        sin_sq = static_cast<double>(theta_tilde * theta_tilde) / 26.0;
    }
    return recover_inner_product_from_sin_sq(sin_sq, in);
}

FStageResult compute_f_register(std::uint64_t raw_outcome, int l,
                                const std::function<double(std::uint64_t)>& xw_of_fold, double y,
                                double b, double c3, const arith::FixedPoint& codec) {
    if (l < 1 || l > 16) throw std::invalid_argument("phase register width must be in [1, 16]");
    if (raw_outcome >= (std::uint64_t{1} << l))
        throw std::invalid_argument("phase outcome exceeds the register");
    const int n = l + codec.bits + 1;
    if (n > 28) throw std::invalid_argument("residual stage exceeds the simulator budget");

    const QubitRange theta_reg{0, l};
    const QubitRange dot_reg{l, codec.bits};
    const int rot = l + codec.bits;

    StateVector s = StateVector::basis_state(n, raw_outcome);

    FStageResult res;
    const auto oracle = [&](std::uint64_t k) {
        return codec.encode(xw_of_fold(fold_phase_outcome(k, l)));
    };
    if (!codec.fits(xw_of_fold(fold_phase_outcome(raw_outcome, l)))) res.overflowed = true;

    qsim::apply_basis_oracle(s, oracle, theta_reg, dot_reg, qsim::OracleMode::xor_into);
    const arith::FOracleReport rep = arith::apply_f_oracle(s, dot_reg, y, b, codec);
    res.overflowed = res.overflowed || rep.overflow;

    qsim::apply_value_controlled_1q(s, dot_reg, rot, [&](std::uint64_t v) {
        const double a = std::clamp(c3 * codec.decode(v), -1.0, 1.0);
        return qsim::GateSpec::ry(2.0 * std::asin(a)).matrix();
    });

    // The phase register is a basis state, so the dot register holds exactly
    // one word; read it off the dominant amplitude.
    {
        const std::vector<double> m = qsim::marginal_probabilities(s, dot_reg);
        double best = -1.0;
        for (std::uint64_t v = 0; v < m.size(); ++v)
            if (m[v] > best) {
                best = m[v];
                res.f_raw = v;
            }
    }
    res.f_value = codec.decode(res.f_raw);

    // Uncompute: undo the constant adds in one net ramp, then the oracle.
    arith::fourier_add_const(s, dot_reg,
                             static_cast<std::int64_t>(rep.y_raw) -
                                 static_cast<std::int64_t>(rep.b_raw),
                             arith::Sign::plus);
    qsim::apply_basis_oracle(s, oracle, theta_reg, dot_reg, qsim::OracleMode::xor_into);

    StateVector reduced = qsim::drop_zero_register(s, dot_reg, 1e-9);
    const std::uint64_t base = raw_outcome;  // theta register below the rotation qubit
    res.cos_amp = reduced[base].real();
    res.sin_amp = reduced[base + (std::uint64_t{1} << l)].real();
    return res;
}

ScaledStageResult run_scaled_f_stage(std::span<const double> theta_pmf,
                                     const ScaledFStage& cfg) {
    if (theta_pmf.empty() || (theta_pmf.size() & (theta_pmf.size() - 1)) != 0)
        throw std::invalid_argument("phase distribution length must be a power of two");
    if (cfg.width < 1 || cfg.width > 16 || !(cfg.scale > 0.0))
        throw std::invalid_argument("bad residual stage configuration");
    const int l = std::countr_zero(theta_pmf.size());
    const std::uint64_t fdim = std::uint64_t{1} << cfg.width;

    // Pushforward carrier: phases are irrelevant because the oracle is
    // diagonal in the phase register, so sqrt(pmf) amplitudes reproduce the
    // post-measurement statistics exactly.
    StateVector s(l + cfg.width);
    double total = 0.0;
    for (double p : theta_pmf) {
        if (p < 0.0) throw std::invalid_argument("negative probability mass");
        total += p;
    }
    if (!(total > 0.0)) throw std::invalid_argument("phase distribution has no mass");
    for (std::uint64_t k = 0; k < theta_pmf.size(); ++k)
        s[k] = std::sqrt(theta_pmf[k] / total);

    const QubitRange theta_reg{0, l};
    const QubitRange f_reg{l, cfg.width};
    const auto oracle = [&](std::uint64_t k) {
        const std::int64_t v = static_cast<std::int64_t>(cfg.offset) -
                               static_cast<std::int64_t>(cfg.mult) * static_cast<std::int64_t>(k);
        const std::int64_t nd = static_cast<std::int64_t>(fdim);
        return static_cast<std::uint64_t>(((v % nd) + nd) % nd);
    };
    qsim::apply_basis_oracle(s, oracle, theta_reg, f_reg, qsim::OracleMode::xor_into);
    arith::fourier_add_const(s, f_reg, static_cast<std::int64_t>(cfg.subtract),
                             arith::Sign::minus);

    ScaledStageResult res;
    res.f_pmf = qsim::marginal_probabilities(s, f_reg);
    // The two phase lobes carry exactly equal mass onto distinct words, so
    // the argmax tolerates float dust and resolves ties to the smaller word.
    const double peak = *std::max_element(res.f_pmf.begin(), res.f_pmf.end());
    for (std::uint64_t v = 0; v < res.f_pmf.size(); ++v)
        if (res.f_pmf[v] >= peak * (1.0 - 1e-9)) {
            res.modal_raw = v;
            break;
        }
    res.f = static_cast<double>(res.modal_raw) / cfg.scale;
    return res;
}

}  // namespace qfl::qgd
