#include "qfl/qgd/grover.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfl::qgd {

using qsim::ControlSpec;
using qsim::Mat2;
using qsim::QubitRange;
using qsim::StateVector;

namespace {

Mat2 flag_rotation(double amplitude) {
    return qsim::GateSpec::ry(2.0 * std::asin(std::clamp(amplitude, -1.0, 1.0))).matrix();
}

void apply_h_block(StateVector& s, int first, int count, const ControlSpec& ctrl) {
    const Mat2 h = qsim::GateSpec::h().matrix();
    for (int q = first; q < first + count; ++q) qsim::apply_1q(s, h, q, ctrl);
}

}  // namespace

void OverlapPrep::apply(qsim::StateVector& s, const qsim::ControlSpec& ctrl,
                        bool inverse) const {
    const int L = data_qubits;
    const QubitRange jreg{0, L};
    const ControlSpec data_ctrl = ctrl.with(branch_qubit(), false);
    const ControlSpec param_ctrl = ctrl.with(branch_qubit(), true);
    const Mat2 h = qsim::GateSpec::h().matrix();
    const Mat2 xg = qsim::GateSpec::x().matrix();

    const auto data_rotation = [&](std::uint64_t j, int dir) {
        return flag_rotation(dir * c1 * x[j]);
    };
    const auto param_rotation = [&](std::uint64_t j, int dir) {
        return flag_rotation(dir * c2 * w[j]);
    };

    qsim::apply_1q(s, h, branch_qubit(), ctrl);
    if (!inverse) {
        apply_h_block(s, 0, L, data_ctrl);
        qsim::apply_value_controlled_1q(
            s, jreg, flag_qubit(), [&](std::uint64_t j) { return data_rotation(j, +1); },
            data_ctrl);
        if (method == prep::EncodingMethod::angle_tree) {
            prep::apply_angle_tree_rotations(s, tree, jreg, param_ctrl, false);
            qsim::apply_1q(s, xg, flag_qubit(), param_ctrl);
        } else {
            apply_h_block(s, 0, L, param_ctrl);
            qsim::apply_value_controlled_1q(
                s, jreg, flag_qubit(), [&](std::uint64_t j) { return param_rotation(j, +1); },
                param_ctrl);
        }
    } else {
        if (method == prep::EncodingMethod::angle_tree) {
            qsim::apply_1q(s, xg, flag_qubit(), param_ctrl);
            prep::apply_angle_tree_rotations(s, tree, jreg, param_ctrl, true);
        } else {
            qsim::apply_value_controlled_1q(
                s, jreg, flag_qubit(), [&](std::uint64_t j) { return param_rotation(j, -1); },
                param_ctrl);
            apply_h_block(s, 0, L, param_ctrl);
        }
        qsim::apply_value_controlled_1q(
            s, jreg, flag_qubit(), [&](std::uint64_t j) { return data_rotation(j, -1); },
            data_ctrl);
        apply_h_block(s, 0, L, data_ctrl);
    }
    qsim::apply_1q(s, h, branch_qubit(), ctrl);
}

qsim::StateVector OverlapPrep::prepare() const {
    StateVector s(n_qubits());
    apply(s);
    qsim::RegisterLayout l;
    l.add("j", QubitRange{0, data_qubits});
    l.add("flag", QubitRange{data_qubits, 1});
    l.add("branch", QubitRange{data_qubits + 1, 1});
    s.set_layout(l);
    s.check_normalized();
    return s;
}

double OverlapPrep::good_probability() const {
    double xx = 0.0, ww = 0.0, xw = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        xx += x[j] * x[j];
        ww += w[j] * w[j];
        xw += x[j] * w[j];
    }
    const double d = static_cast<double>(dimension());
    const double p =
        (c1 * c1 * xx + c2_prime * c2_prime * ww - 2.0 * c1 * c2_prime * xw) / (4.0 * d);
    return std::clamp(p, 0.0, 1.0);
}

double OverlapPrep::theta() const { return std::asin(std::sqrt(good_probability())); }

OverlapPrep make_overlap_prep(std::span<const double> x, std::span<const double> w,
                              const prep::EncodingConstants& enc) {
    enc.validate();
    if (x.size() > enc.dimension || w.size() > enc.dimension)
        throw std::invalid_argument("vector longer than the encoding dimension");

    OverlapPrep p;
    p.x.assign(x.begin(), x.end());
    p.x.resize(enc.dimension, 0.0);
    p.w.assign(w.begin(), w.end());
    p.w.resize(enc.dimension, 0.0);
    p.c1 = enc.c1;
    p.c2 = enc.c2;
    p.c2_prime = enc.c2_prime;
    p.method = enc.method;
    p.data_qubits = std::countr_zero(enc.dimension);
    if (p.method == prep::EncodingMethod::angle_tree)
        p.tree = prep::build_angle_tree(w, enc.dimension);

    for (double v : p.x)
        if (std::abs(enc.c1 * v) > 1.0 + 1e-12)
            throw std::invalid_argument("data component violates c1 scaling");
    if (p.method == prep::EncodingMethod::amplitude_rotation)
        for (double v : p.w)
            if (std::abs(enc.c2 * v) > 1.0 + 1e-12)
                throw std::invalid_argument("parameter component violates c2 scaling");
    return p;
}

void apply_grover_step(qsim::StateVector& s, const OverlapPrep& prep,
                       const qsim::ControlSpec& ctrl) {
    const std::uint64_t good_mask =
        (std::uint64_t{1} << prep.flag_qubit()) | (std::uint64_t{1} << prep.branch_qubit());
    const std::uint64_t zero_mask = (std::uint64_t{1} << prep.n_qubits()) - 1;

    qsim::apply_phase_flip(s, good_mask, good_mask, ctrl);  // S11
    prep.apply(s, ctrl, /*inverse=*/true);
    qsim::apply_phase_flip(s, zero_mask, 0, ctrl);          // S00
    prep.apply(s, ctrl, /*inverse=*/false);
    qsim::apply_global_phase(s, std::numbers::pi, ctrl);
}

qsim::ControlledOp grover_operator(OverlapPrep prep) {
    return [prep = std::move(prep)](qsim::StateVector& s, const qsim::ControlSpec& ctrl) {
        apply_grover_step(s, prep, ctrl);
    };
}

}  // namespace qfl::qgd
