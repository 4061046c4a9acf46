#include "qfl/qsim/phase_estimation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfl::qsim {

StateVector phase_estimation(const StateVector& system, const ControlledOp& op, int l,
                             const std::string& reg_name) {
    if (l < 1 || l > 16) throw std::invalid_argument("phase register width must be in [1, 16]");
    StateVector s = append_zero_register(system, reg_name, l);
    const int base = system.n_qubits();
    const Mat2 h = GateSpec::h().matrix();
    for (int k = 0; k < l; ++k) apply_1q(s, h, base + k);
    for (int k = 0; k < l; ++k) {
        const ControlSpec ctrl = ControlSpec::on(base + k);
        const std::uint64_t reps = std::uint64_t{1} << k;
        for (std::uint64_t r = 0; r < reps; ++r) op(s, ctrl);
    }
    apply_qft(s, QubitRange{base, l}, /*inverse=*/true);
    return s;
}

std::vector<double> qpe_distribution(std::span<const std::pair<double, double>> phase_weights,
                                     int l) {
    if (l < 1 || l > 24) throw std::invalid_argument("phase register width must be in [1, 24]");
    double total = 0.0;
    for (const auto& [phi, w] : phase_weights) {
        if (w < 0.0) throw std::invalid_argument("eigenphase weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("eigenphase weights must sum to 1");

    const std::uint64_t n = std::uint64_t{1} << l;
    const double nd = static_cast<double>(n);
    std::vector<double> probs(n, 0.0);
    for (const auto& [phi, w] : phase_weights) {
        for (std::uint64_t k = 0; k < n; ++k) {
            const double d = phi - static_cast<double>(k) / nd;
            const double s = std::sin(std::numbers::pi * d);
            // d on the 2^-l grid concentrates the full mass in one bin.
            const double mag2 = std::abs(s) < 1e-15
                                    ? 1.0
                                    : std::pow(std::sin(std::numbers::pi * nd * d) / (nd * s), 2);
            probs[k] += w * mag2;
        }
    }
    return probs;
}

}  // namespace qfl::qsim
