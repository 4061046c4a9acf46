#include "qfl/qgd/gradient.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qfl/common/rng.hpp"
#include "qfl/qsim/gates.hpp"
#include "qfl/qsim/operations.hpp"

namespace qfl::qgd {

using qsim::QubitRange;
using qsim::StateVector;

namespace {

constexpr std::uint64_t kThetaPurpose = 0x74686574;  // seed-derivation tags
constexpr std::uint64_t kSwapPurpose = 0x73776170;

int index_qubits(std::size_t m) {
    return std::max(1, static_cast<int>(std::bit_width(m - 1)));
}

qsim::RegisterLayout pair_layout(int m) {
    qsim::RegisterLayout l;
    l.add("index", QubitRange{0, m});
    l.add("pair", QubitRange{m, 2});
    return l;
}

void fill_uniform_index(StateVector& s, std::size_t m_samples) {
    const double amp = 1.0 / std::sqrt(static_cast<double>(m_samples));
    for (std::size_t i = 0; i < m_samples; ++i) s[i] = amp;
}

}  // namespace

nlohmann::json GradientEstimate::to_json() const {
    return nlohmann::json{{"g", g},
                          {"p_values", p_values},
                          {"error_budget", error_budget},
                          {"theta_tildes", theta_tildes},
                          {"f_values", f_values},
                          {"c1", c1},
                          {"c2_prime", c2_prime},
                          {"c3", c3},
                          {"theta_bits", theta_bits},
                          {"seed", seed}};
}

StateVector build_feature_state(const std::vector<std::vector<double>>& rows, std::size_t j,
                                double c1) {
    if (rows.empty()) throw std::invalid_argument("feature state needs at least one sample");
    if (j >= rows[0].size()) throw std::invalid_argument("component index out of range");
    const std::size_t m_samples = rows.size();
    const int m = index_qubits(m_samples);

    StateVector s(m + 2);
    fill_uniform_index(s, m_samples);
    qsim::apply_value_controlled_1q(s, QubitRange{0, m}, m, [&](std::uint64_t i) {
        if (i >= m_samples) return qsim::GateSpec::ry(0.0).matrix();
        const double a = std::clamp(c1 * rows[i][j], -1.0, 1.0);
        // cos of the half-angle carries the component: Ry(2 acos(a))|0> has
        // |0> amplitude a and nonnegative |1> amplitude.
        return qsim::GateSpec::ry(2.0 * std::acos(a)).matrix();
    });
    qsim::apply_1q(s, qsim::GateSpec::x().matrix(), m + 1);
    s.set_layout(pair_layout(m));
    s.check_normalized();
    return s;
}

StateVector build_f_state(std::span<const double> cos_amps, std::span<const double> sin_amps) {
    if (cos_amps.empty() || cos_amps.size() != sin_amps.size())
        throw std::invalid_argument("residual state needs matching amplitude lists");
    const std::size_t m_samples = cos_amps.size();
    const int m = index_qubits(m_samples);

    StateVector s(m + 2);
    fill_uniform_index(s, m_samples);
    qsim::apply_value_controlled_1q(s, QubitRange{0, m}, m + 1, [&](std::uint64_t i) {
        if (i >= m_samples) return qsim::GateSpec::ry(0.0).matrix();
        return qsim::GateSpec::ry(2.0 * std::atan2(sin_amps[i], cos_amps[i])).matrix();
    });
    s.set_layout(pair_layout(m));
    s.check_normalized();
    return s;
}

double swap_test_probability(const StateVector& psi, const StateVector& chi) {
    return 0.5 + 0.5 * qsim::inner_product(psi, chi).real();
}

double swap_test_sampled(double p, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("sampled overlap needs at least one shot");
    if (p < -1e-12 || p > 1.0 + 1e-12) throw std::invalid_argument("probability out of range");
    std::mt19937_64 gen(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t n = 0; n < shots; ++n)
        if (common::uniform01(gen) < p) ++hits;
    return static_cast<double>(hits) / static_cast<double>(shots);
}

GradientEstimate local_gradient(const std::vector<std::vector<double>>& rows,
                                std::span<const double> targets, std::span<const double> w,
                                const PipelineConfig& cfg) {
    if (rows.empty()) throw std::invalid_argument("gradient needs at least one sample");
    const std::size_t m_samples = rows.size();
    const std::size_t width = rows[0].size();
    if (width == 0) throw std::invalid_argument("gradient needs at least one feature");
    for (const auto& r : rows)
        if (r.size() != width) throw std::invalid_argument("ragged data rows");
    if (targets.size() != m_samples) throw std::invalid_argument("targets/samples mismatch");
    if (w.size() != width) throw std::invalid_argument("parameter/feature width mismatch");

    prep::EncodingConstants enc = prep::EncodingConstants::for_dataset(rows, w, cfg.method);
    if (cfg.c1_override > 0.0) enc.c1 = cfg.c1_override;
    if (cfg.c2_override > 0.0) {
        enc.c2 = cfg.c2_override;
        enc.c2_prime = cfg.method == prep::EncodingMethod::angle_tree
                           ? std::sqrt(static_cast<double>(enc.dimension)) * enc.c2
                           : enc.c2;
    }
    enc.validate();
    const double d = static_cast<double>(enc.dimension);
    double w_norm_sq = 0.0;
    for (double v : w) w_norm_sq += v * v;

    GradientEstimate est;
    est.c1 = enc.c1;
    est.c2_prime = enc.c2_prime;
    est.theta_bits = cfg.theta_bits;
    est.seed = cfg.seed;

    // Stage one: per-sample dot products through the configured phase path.
    std::vector<double> xw(m_samples, 0.0);
    for (std::size_t i = 0; i < m_samples; ++i) {
        if (cfg.theta_mode == ThetaMode::exact) {
            double acc = 0.0;
            for (std::size_t j = 0; j < width; ++j) acc += rows[i][j] * w[j];
            xw[i] = acc;
            continue;
        }
        const OverlapPrep prep = make_overlap_prep(rows[i], w, enc);
        const ThetaEstimate th =
            estimate_theta(prep, cfg.theta_bits, cfg.theta_mode, cfg.theta_shots,
                           common::derive_seed(cfg.seed, kThetaPurpose, i));
        est.theta_tildes.push_back(th.theta_tilde);
        RecoveryInputs in;
        in.c1 = enc.c1;
        in.c2_prime = enc.c2_prime;
        in.w_norm_sq = w_norm_sq;
        in.dimension = enc.dimension;
        for (std::size_t j = 0; j < width; ++j) in.x_norm_sq += rows[i][j] * rows[i][j];
        xw[i] = recover_inner_product(th.theta_tilde, cfg.theta_bits, cfg.dot_decode, in);
    }

    // Stage two: residuals, on the codec grid when configured.
    est.f_values.resize(m_samples);
    for (std::size_t i = 0; i < m_samples; ++i) {
        if (cfg.f_arith == FArith::real) {
            est.f_values[i] = xw[i] - targets[i] + cfg.intercept;
        } else {
            const std::uint64_t raw =
                (cfg.codec.encode(xw[i]) - cfg.codec.encode(targets[i]) +
                 cfg.codec.encode(cfg.intercept)) &
                ((std::uint64_t{1} << cfg.codec.bits) - 1);
            est.f_values[i] = cfg.codec.decode(raw);
        }
    }
    double f_max = 0.0;
    for (double f : est.f_values) f_max = std::max(f_max, std::abs(f));
    est.c3 = cfg.c3_override != 0.0 ? cfg.c3_override : (f_max > 0.0 ? 1.0 / f_max : 1.0);

    // Residual payload amplitudes, through actual registers in codec mode.
    std::vector<double> cos_amps(m_samples), sin_amps(m_samples);
    for (std::size_t i = 0; i < m_samples; ++i) {
        if (cfg.f_arith == FArith::real) {
            const double a = std::clamp(est.c3 * est.f_values[i], -1.0, 1.0);
            sin_amps[i] = a;
            cos_amps[i] = std::sqrt(1.0 - a * a);
        } else {
            const double xw_i = xw[i];
            const FStageResult r = compute_f_register(
                cfg.theta_mode == ThetaMode::exact ? 0 : est.theta_tildes[i],
                cfg.theta_mode == ThetaMode::exact ? 1 : cfg.theta_bits,
                [&](std::uint64_t) { return xw_i; }, targets[i], cfg.intercept, est.c3,
                cfg.codec);
            est.f_values[i] = r.f_value;
            cos_amps[i] = r.cos_amp;
            sin_amps[i] = r.sin_amp;
        }
    }

    // Stage three: one overlap readout per component.
    const StateVector chi = build_f_state(cos_amps, sin_amps);
    const double eps_theta =
        cfg.theta_mode == ThetaMode::exact ? 0.0 : std::numbers::pi / std::ldexp(1.0, cfg.theta_bits);
    const double eps_p =
        cfg.p_mode == PMode::exact ? 0.0 : 1.5 / std::sqrt(static_cast<double>(cfg.swap_shots));

    est.g.resize(width);
    est.p_values.resize(width);
    est.error_budget.resize(width);
    for (std::size_t j = 0; j < width; ++j) {
        const StateVector psi = build_feature_state(rows, j, enc.c1);
        double p = swap_test_probability(psi, chi);
        if (cfg.p_mode == PMode::sampled)
            p = swap_test_sampled(p, cfg.swap_shots,
                                  common::derive_seed(cfg.seed, kSwapPurpose, j));
        est.p_values[j] = p;
        est.g[j] = (2.0 * p - 1.0) / (enc.c1 * est.c3);

        double abs_x_mean = 0.0;
        for (std::size_t i = 0; i < m_samples; ++i) abs_x_mean += std::abs(rows[i][j]);
        abs_x_mean /= static_cast<double>(m_samples);
        est.error_budget[j] = (2.0 * d / (enc.c1 * enc.c2_prime)) * eps_theta * abs_x_mean +
                              2.0 * eps_p / (enc.c1 * est.c3);
    }
    return est;
}

}  // namespace qfl::qgd
