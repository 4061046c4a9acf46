#include "qfl/qsim/operations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qfl::qsim {

namespace {

void check_qubit(const StateVector& s, int q, const char* what) {
    if (q < 0 || q >= s.n_qubits())
        throw std::out_of_range(std::string(what) + " qubit " + std::to_string(q) + " out of range");
}

void check_range(const StateVector& s, const QubitRange& r, const char* what) {
    if (r.count <= 0 || r.first < 0 || r.first + r.count > s.n_qubits())
        throw std::out_of_range(std::string(what) + " register out of range");
}

void check_ctrl(const StateVector& s, const ControlSpec& ctrl, std::uint64_t busy_mask) {
    if (ctrl.mask & ~(s.dim() - 1))
        throw std::out_of_range("control qubit out of range");
    if (ctrl.mask & busy_mask)
        throw std::invalid_argument("control set overlaps operation targets");
}

// In-place radix-2 FFT over `v` (size must be a power of two).
// sign = +1 applies exp(+2 pi i a b / N) summation, -1 its inverse.
// No normalization here; callers scale by 1/sqrt(N).
void fft_pow2(std::vector<amp_t>& v, int sign) {
    const std::size_t n = v.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const amp_t wl = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            amp_t w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const amp_t u = v[i + k];
                const amp_t t = v[i + k + len / 2] * w;
                v[i + k] = u + t;
                v[i + k + len / 2] = u - t;
                w *= wl;
            }
        }
    }
}

}  // namespace

void apply_1q(StateVector& s, const Mat2& m, int target, const ControlSpec& ctrl) {
    check_qubit(s, target, "target");
    const std::uint64_t tbit = std::uint64_t{1} << target;
    check_ctrl(s, ctrl, tbit);
    const amp_t m00 = m[0][0], m01 = m[0][1], m10 = m[1][0], m11 = m[1][1];
    const std::uint64_t dim = s.dim();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & tbit) continue;
        if (!ctrl.matches(i)) continue;
        const amp_t a0 = s[i];
        const amp_t a1 = s[i | tbit];
        s[i] = m00 * a0 + m01 * a1;
        s[i | tbit] = m10 * a0 + m11 * a1;
    }
}

void apply_gate(StateVector& s, const GateSpec& gate, std::span<const int> targets,
                std::span<const int> controls) {
    if (targets.size() != 1)
        throw std::invalid_argument("2x2 gate takes exactly one target qubit");
    const int target = targets[0];
    check_qubit(s, target, "target");
    ControlSpec ctrl;
    for (int c : controls) {
        check_qubit(s, c, "control");
        if (c == target) throw std::invalid_argument("target and control sets overlap");
        if (ctrl.mask & (std::uint64_t{1} << c))
            throw std::invalid_argument("duplicate control qubit");
        ctrl = ctrl.with(c, true);
    }
    apply_1q(s, gate.matrix(), target, ctrl);
}

void apply_phase_flip(StateVector& s, std::uint64_t flip_mask, std::uint64_t flip_value,
                      const ControlSpec& ctrl) {
    if (flip_mask & ~(s.dim() - 1)) throw std::out_of_range("phase flip mask out of range");
    check_ctrl(s, ctrl, 0);
    const std::uint64_t dim = s.dim();
    for (std::uint64_t i = 0; i < dim; ++i)
        if ((i & flip_mask) == flip_value && ctrl.matches(i)) s[i] = -s[i];
}

void apply_global_phase(StateVector& s, double angle, const ControlSpec& ctrl) {
    check_ctrl(s, ctrl, 0);
    const amp_t ph = std::polar(1.0, angle);
    const std::uint64_t dim = s.dim();
    for (std::uint64_t i = 0; i < dim; ++i)
        if (ctrl.matches(i)) s[i] *= ph;
}

void apply_phase_ramp(StateVector& s, const QubitRange& reg, std::int64_t t, int sign,
                      const ControlSpec& ctrl) {
    check_range(s, reg, "phase ramp");
    check_ctrl(s, ctrl, reg.mask());
    const std::uint64_t n = reg.dim();
    // t modulo N; the ramp angle only depends on t mod N.
    const std::uint64_t tm = static_cast<std::uint64_t>(((t % static_cast<std::int64_t>(n)) +
                                                         static_cast<std::int64_t>(n))) %
                             n;
    std::vector<amp_t> table(n);
    const double base = sign * 2.0 * std::numbers::pi * static_cast<double>(tm) / static_cast<double>(n);
    for (std::uint64_t v = 0; v < n; ++v) table[v] = std::polar(1.0, base * static_cast<double>(v));
    const std::uint64_t dim = s.dim();
    for (std::uint64_t i = 0; i < dim; ++i)
        if (ctrl.matches(i)) s[i] *= table[reg.extract(i)];
}

void apply_qft(StateVector& s, const QubitRange& reg, bool inverse) {
    check_range(s, reg, "qft");
    const std::uint64_t n = reg.dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const std::uint64_t low_mask = (std::uint64_t{1} << reg.first) - 1;
    const std::uint64_t dim = s.dim();
    std::vector<amp_t> block(n);
    // Iterate over every configuration of the qubits outside the register.
    for (std::uint64_t outer = 0; outer < dim / n; ++outer) {
        const std::uint64_t lo = outer & low_mask;
        const std::uint64_t hi = (outer & ~low_mask) << reg.count;
        const std::uint64_t base = hi | lo;
        for (std::uint64_t v = 0; v < n; ++v) block[v] = s[base | (v << reg.first)];
        fft_pow2(block, inverse ? -1 : +1);
        for (std::uint64_t v = 0; v < n; ++v) s[base | (v << reg.first)] = block[v] * scale;
    }
}

void apply_basis_oracle(StateVector& s, const std::function<std::uint64_t(std::uint64_t)>& f,
                        const QubitRange& in, const QubitRange& out, OracleMode mode,
                        const ControlSpec& ctrl) {
    check_range(s, in, "oracle input");
    check_range(s, out, "oracle output");
    if (in.mask() & out.mask())
        throw std::invalid_argument("oracle input and output registers overlap");
    check_ctrl(s, ctrl, in.mask() | out.mask());

    const std::uint64_t dim = s.dim();
    const std::uint64_t out_dim = out.dim();

    // Validate f over the support before mutating anything.
    std::vector<std::uint64_t> fval(in.dim());
    std::vector<bool> have(in.dim(), false);
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (s[i] == amp_t{} || !ctrl.matches(i)) continue;
        const std::uint64_t a = in.extract(i);
        if (!have[a]) {
            const std::uint64_t y = f(a);
            if (y >= out_dim)
                throw std::invalid_argument("oracle output " + std::to_string(y) +
                                            " exceeds register width for input " + std::to_string(a));
            fval[a] = y;
            have[a] = true;
        }
    }

    std::vector<amp_t> next(dim, amp_t{0.0, 0.0});
    for (std::uint64_t i = 0; i < dim; ++i) {
        const amp_t a = s[i];
        if (a == amp_t{}) continue;
        if (!ctrl.matches(i)) {
            next[i] += a;
            continue;
        }
        const std::uint64_t x = in.extract(i);
        const std::uint64_t b = out.extract(i);
        const std::uint64_t y =
            (mode == OracleMode::xor_into) ? (b ^ fval[x]) : ((b + fval[x]) & (out_dim - 1));
        const std::uint64_t j = (i & ~out.mask()) | (y << out.first);
        next[j] += a;
    }
    std::copy(next.begin(), next.end(), s.amplitudes().begin());
}

void apply_value_controlled_1q(StateVector& s, const QubitRange& value_reg, int target,
                               const std::function<Mat2(std::uint64_t)>& gate_for,
                               const ControlSpec& ctrl) {
    check_range(s, value_reg, "value register");
    check_qubit(s, target, "target");
    const std::uint64_t tbit = std::uint64_t{1} << target;
    if (value_reg.mask() & tbit)
        throw std::invalid_argument("value register overlaps target qubit");
    check_ctrl(s, ctrl, value_reg.mask() | tbit);
    if (value_reg.count > 24) throw std::invalid_argument("value register too wide to tabulate");

    std::vector<Mat2> table(value_reg.dim());
    for (std::uint64_t v = 0; v < table.size(); ++v) table[v] = gate_for(v);

    const std::uint64_t dim = s.dim();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & tbit) continue;
        if (!ctrl.matches(i)) continue;
        const Mat2& m = table[value_reg.extract(i)];
        const amp_t a0 = s[i];
        const amp_t a1 = s[i | tbit];
        s[i] = m[0][0] * a0 + m[0][1] * a1;
        s[i | tbit] = m[1][0] * a0 + m[1][1] * a1;
    }
}

std::vector<double> marginal_probabilities(const StateVector& s, const QubitRange& reg) {
    check_range(s, reg, "measurement");
    if (reg.count > 24) throw std::invalid_argument("measured register too wide to tabulate");
    std::vector<double> probs(reg.dim(), 0.0);
    const std::uint64_t dim = s.dim();
    for (std::uint64_t i = 0; i < dim; ++i) probs[reg.extract(i)] += std::norm(s[i]);
    return probs;
}

StateVector drop_zero_register(const StateVector& s, const QubitRange& reg, double tol) {
    check_range(s, reg, "dropped");
    const std::uint64_t dim = s.dim();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (reg.extract(i) != 0 && std::abs(s[i]) > tol)
            throw std::runtime_error("register is not |0...0>: residual amplitude " +
                                     std::to_string(std::abs(s[i])));
    }
    StateVector out(s.n_qubits() - reg.count);
    out[0] = amp_t{0.0, 0.0};
    const std::uint64_t low_mask = (std::uint64_t{1} << reg.first) - 1;
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (reg.extract(i) != 0) continue;
        const std::uint64_t j = (i & low_mask) | ((i >> reg.count) & ~low_mask);
        out[j] = s[i];
    }
    RegisterLayout rebased;
    for (const auto& [name, r] : s.layout().entries()) {
        if (r == reg) continue;
        if (r.first >= reg.first + reg.count)
            rebased.add(name, QubitRange{r.first - reg.count, r.count});
        else if (r.first + r.count <= reg.first)
            rebased.add(name, r);
        else
            continue;  // partially overlapping entries cannot be preserved
    }
    out.set_layout(rebased);
    return out;
}

StateVector append_zero_register(const StateVector& s, const std::string& name, int count) {
    StateVector zeros(count);
    StateVector out = tensor(s, zeros);
    RegisterLayout l = out.layout();
    l.add(name, QubitRange{s.n_qubits(), count});
    out.set_layout(l);
    return out;
}

}  // namespace qfl::qsim
