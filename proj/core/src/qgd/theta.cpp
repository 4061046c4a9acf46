#include "qfl/qgd/theta.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace qfl::qgd {

namespace {

std::uint64_t argmax_outcome(const std::vector<double>& probs) {
    std::uint64_t best = 0;
    double best_p = -1.0;
    for (std::uint64_t k = 0; k < probs.size(); ++k)
        if (probs[k] > best_p) {
            best_p = probs[k];
            best = k;
        }
    return best;
}

}  // namespace

std::uint64_t fold_phase_outcome(std::uint64_t k, int l) {
    const std::uint64_t n = std::uint64_t{1} << l;
    if (k >= n) throw std::invalid_argument("phase outcome exceeds the register");
    return std::min(k, n - k);
}

ThetaEstimate estimate_theta(const OverlapPrep& prep, int l, ThetaMode mode, std::uint64_t shots,
                             std::uint64_t seed) {
    if (l < 1 || l > 16) throw std::invalid_argument("phase register width must be in [1, 16]");

    ThetaEstimate est;
    est.l = l;
    est.theta_exact = prep.theta();

    if (mode == ThetaMode::exact) {
        est.theta_hat = est.theta_exact;
        est.raw_outcome = static_cast<std::uint64_t>(
            std::llround(est.theta_exact / std::numbers::pi * std::ldexp(1.0, l)));
        est.theta_tilde = est.raw_outcome;  // theta in [0, pi/2] is already folded
        return est;
    }

    if (mode == ThetaMode::qpe_full) {
        const qsim::StateVector system = prep.prepare();
        const qsim::StateVector full =
            qsim::phase_estimation(system, grover_operator(prep), l);
        const qsim::QubitRange reg{prep.n_qubits(), l};
        est.distribution = qsim::marginal_probabilities(full, reg);
        if (shots > 0) est.histogram = qsim::sample_measurement(full, reg, shots, seed);
    } else {
        const double phi = est.theta_exact / std::numbers::pi;
        const std::pair<double, double> phases[] = {{phi, 0.5},
                                                    {phi == 0.0 ? 0.0 : 1.0 - phi, 0.5}};
        est.distribution = qsim::qpe_distribution(phases, l);
        if (shots > 0) est.histogram = qsim::sample_distribution(est.distribution, shots, seed);
    }

    est.raw_outcome =
        shots > 0 ? est.histogram.modal_outcome() : argmax_outcome(est.distribution);
    est.theta_tilde = fold_phase_outcome(est.raw_outcome, l);
    est.theta_hat =
        std::numbers::pi * static_cast<double>(est.theta_tilde) / std::ldexp(1.0, l);
    return est;
}

}  // namespace qfl::qgd
