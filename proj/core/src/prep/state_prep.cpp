#include "qfl/prep/state_prep.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qfl/qsim/measure.hpp"
#include "qfl/qsim/phase_estimation.hpp"

namespace qfl::prep {

using qsim::amp_t;
using qsim::ControlSpec;
using qsim::Mat2;
using qsim::QubitRange;
using qsim::StateVector;

namespace {

std::vector<double> pad_pow2(std::span<const double> v) {
    const std::size_t target = std::bit_ceil(std::max<std::size_t>(v.size(), 2));
    std::vector<double> out(v.begin(), v.end());
    out.resize(target, 0.0);
    return out;
}

void set_jf_layout(StateVector& s, int dim_qubits) {
    qsim::RegisterLayout l;
    l.add("j", QubitRange{0, dim_qubits});
    l.add("flag", QubitRange{dim_qubits, 1});
    s.set_layout(l);
}

// Flag rotation with sin(beta) = amplitude; amplitude must be in [-1, 1].
Mat2 flag_rotation(double amplitude) {
    return qsim::GateSpec::ry(2.0 * std::asin(amplitude)).matrix();
}

void check_amplitude_scale(double scaled, const char* what) {
    if (std::abs(scaled) > 1.0 + 1e-12)
        throw std::invalid_argument(std::string(what) +
                                    " scaling violates |scale * component| <= 1");
}

}  // namespace

StateVector prepare_parameter_state(const AngleTree& tree) {
    StateVector s(tree.depth + 1);
    apply_angle_tree_rotations(s, tree, QubitRange{0, tree.depth});
    qsim::apply_1q(s, qsim::GateSpec::x().matrix(), tree.depth);
    set_jf_layout(s, tree.depth);
    s.check_normalized();
    return s;
}

StateVector prepare_parameter_state(std::span<const double> w, EncodingMethod method, double c2) {
    if (method == EncodingMethod::angle_tree) {
        // The tree normalizes intrinsically; an explicit c2 has no effect here.
        return prepare_parameter_state(build_angle_tree(w));
    }
    const std::vector<double> wp = pad_pow2(w);
    double norm_sq = 0.0;
    for (double v : wp) norm_sq += v * v;
    if (norm_sq == 0.0) throw std::invalid_argument("parameter vector is zero");
    const double scale = (c2 == 0.0) ? 1.0 / std::sqrt(norm_sq) : c2;

    const int L = std::countr_zero(wp.size());
    StateVector s(L + 1);
    const Mat2 h = qsim::GateSpec::h().matrix();
    for (int q = 0; q < L; ++q) qsim::apply_1q(s, h, q);
    for (double v : wp) check_amplitude_scale(scale * v, "parameter");
    qsim::apply_value_controlled_1q(s, QubitRange{0, L}, L, [&](std::uint64_t j) {
        return flag_rotation(std::clamp(scale * wp[j], -1.0, 1.0));
    });
    set_jf_layout(s, L);
    s.check_normalized();
    return s;
}

StateVector prepare_data_state(std::span<const double> x, double c1) {
    if (!(c1 > 0.0)) throw std::invalid_argument("c1 must be positive");
    const std::vector<double> xp = pad_pow2(x);
    for (double v : xp) check_amplitude_scale(c1 * v, "data");

    const int L = std::countr_zero(xp.size());
    StateVector s(L + 1);
    const Mat2 h = qsim::GateSpec::h().matrix();
    for (int q = 0; q < L; ++q) qsim::apply_1q(s, h, q);
    qsim::apply_value_controlled_1q(s, QubitRange{0, L}, L, [&](std::uint64_t j) {
        return flag_rotation(std::clamp(c1 * xp[j], -1.0, 1.0));
    });
    set_jf_layout(s, L);
    s.check_normalized();
    return s;
}

StateVector prepare_data_state_via_oracle(std::span<const double> x, double c1,
                                          const arith::FixedPoint& codec) {
    if (!(c1 > 0.0)) throw std::invalid_argument("c1 must be positive");
    const std::vector<double> xp = pad_pow2(x);
    for (double v : xp) {
        check_amplitude_scale(c1 * v, "data");
        if (!codec.fits(v))
            throw std::invalid_argument("data component does not fit the lookup codec");
    }

    const int L = std::countr_zero(xp.size());
    const QubitRange jreg{0, L};
    const QubitRange work{L + 1, codec.bits};
    StateVector s(L + 1 + codec.bits);
    const Mat2 h = qsim::GateSpec::h().matrix();
    for (int q = 0; q < L; ++q) qsim::apply_1q(s, h, q);

    const auto lookup = [&](std::uint64_t j) { return codec.encode(xp[j]); };
    qsim::apply_basis_oracle(s, lookup, jreg, work, qsim::OracleMode::xor_into);
    // The rotation reads only the work register; the angle comes from the
    // codec-rounded component, so this path differs from the direct one by
    // at most the codec resolution.
    qsim::apply_value_controlled_1q(s, work, L, [&](std::uint64_t v) {
        return flag_rotation(std::clamp(c1 * codec.decode(v), -1.0, 1.0));
    });
    qsim::apply_basis_oracle(s, lookup, jreg, work, qsim::OracleMode::xor_into);

    StateVector out = drop_zero_register(s, work);
    set_jf_layout(out, L);
    out.check_normalized();
    return out;
}

NormEstimate estimate_norm(std::span<const double> x, double c1, double epsilon_m, NormMode mode,
                           std::uint64_t seed) {
    if (!(c1 > 0.0)) throw std::invalid_argument("c1 must be positive");
    double norm_sq = 0.0;
    for (double v : x) norm_sq += v * v;

    if (mode == NormMode::direct) {
        NormEstimate est;
        est.value = std::sqrt(norm_sq);
        return est;
    }

    if (!(epsilon_m > 0.0) || epsilon_m >= 1.0)
        throw std::invalid_argument("epsilon_m must be in (0, 1)");
    const int l = std::clamp(static_cast<int>(std::ceil(std::log2(1.0 / epsilon_m))), 2, 12);

    const std::vector<double> xp = pad_pow2(x);
    for (double v : xp) check_amplitude_scale(c1 * v, "data");
    const int L = std::countr_zero(xp.size());
    const int flag = L;
    const int n = L + 1;

    // Preparation unitary U with U|0...0> = data state; applied as gates so
    // it can be lifted under phase-estimation controls.
    const Mat2 h = qsim::GateSpec::h().matrix();
    const auto apply_u = [&](StateVector& s, const ControlSpec& ctrl, bool inverse) {
        if (!inverse) {
            for (int q = 0; q < L; ++q) qsim::apply_1q(s, h, q, ctrl);
            qsim::apply_value_controlled_1q(
                s, QubitRange{0, L}, flag,
                [&](std::uint64_t j) { return flag_rotation(std::clamp(c1 * xp[j], -1.0, 1.0)); },
                ctrl);
        } else {
            qsim::apply_value_controlled_1q(
                s, QubitRange{0, L}, flag,
                [&](std::uint64_t j) {
                    return flag_rotation(-std::clamp(c1 * xp[j], -1.0, 1.0));
                },
                ctrl);
            for (int q = 0; q < L; ++q) qsim::apply_1q(s, h, q, ctrl);
        }
    };

    // Q = -U S0 U^dag S1 with S0 the reflection about |0...0> and S1 the
    // reflection about the flag's |0> branch. Its eigenphases on the span of
    // the flag decomposition are pi +/- 2*theta with sin^2(theta) = P(flag=1).
    const std::uint64_t all_mask = (std::uint64_t{1} << n) - 1;
    const std::uint64_t flag_bit = std::uint64_t{1} << flag;
    const qsim::ControlledOp grover = [&](StateVector& s, const ControlSpec& ctrl) {
        qsim::apply_phase_flip(s, flag_bit, 0, ctrl);          // S1
        apply_u(s, ctrl, /*inverse=*/true);                    // U^dag
        qsim::apply_phase_flip(s, all_mask, 0, ctrl);          // S0
        apply_u(s, ctrl, /*inverse=*/false);                   // U
        qsim::apply_global_phase(s, std::numbers::pi, ctrl);   // leading -1
    };

    StateVector system(n);
    apply_u(system, ControlSpec{}, false);
    const StateVector estimated = qsim::phase_estimation(system, grover, l);
    const QubitRange phase_reg{n, l};

    std::uint64_t k_star = 0;
    if (seed == 0) {
        const std::vector<double> probs = qsim::marginal_probabilities(estimated, phase_reg);
        double best = -1.0;
        for (std::uint64_t k = 0; k < probs.size(); ++k)
            if (probs[k] > best) {
                best = probs[k];
                k_star = k;
            }
    } else {
        k_star = qsim::sample_measurement(estimated, phase_reg, 4096, seed).modal_outcome();
    }

    NormEstimate est;
    est.precision_bits = l;
    const double phi = static_cast<double>(k_star) / std::ldexp(1.0, l);
    const double theta_hat = std::numbers::pi * std::abs(phi - 0.5);
    const std::uint64_t half = std::uint64_t{1} << (l - 1);
    est.theta_tilde = k_star >= half ? k_star - half : half - k_star;
    const double p1 = std::sin(theta_hat) * std::sin(theta_hat);
    est.degenerate = (est.theta_tilde == 0);
    est.value = std::sqrt(p1 * static_cast<double>(xp.size())) / c1;
    return est;
}

}  // namespace qfl::prep
