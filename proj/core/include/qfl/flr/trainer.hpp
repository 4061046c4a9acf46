#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfl/qgd/gradient.hpp"
#include "qfl/qsmc/protocol.hpp"

// Federated linear regression: every epoch the clients compute local
// gradients of the half-MSE loss, the server aggregates them weighted by
// dataset size, applies w <- w - alpha * G, and stops when the squared
// gradient norm falls to the convergence threshold.

namespace qfl::flr {

struct ClientDataset {
    std::vector<std::vector<double>> rows;  // M_k x D
    std::vector<double> targets;            // length M_k

    [[nodiscard]] std::size_t samples() const { return rows.size(); }
    [[nodiscard]] std::size_t dimension() const { return rows.empty() ? 0 : rows.front().size(); }
    void validate() const;
};

enum class GradientBackend {
    classical,         // direct evaluation of the gradient formula
    quantum_shortcut,  // quantum pipeline with exact phase / overlap readout
    quantum_full,      // quantum pipeline as configured (finite registers, shots)
};

enum class Aggregation {
    plain_sum,  // direct weighted sum, no protocol
    qsmc,       // masked-share aggregation through the secure protocol
};

[[nodiscard]] std::string gradient_backend_name(GradientBackend backend);
[[nodiscard]] GradientBackend gradient_backend_from_name(const std::string& name);
[[nodiscard]] std::string aggregation_name(Aggregation aggregation);
[[nodiscard]] Aggregation aggregation_from_name(const std::string& name);

struct TrainConfig {
    double alpha = 0.01;
    double epsilon = 1e-4;  // threshold on ||G||^2
    std::size_t max_epochs = 100;
    double b = 0.0;  // migration parameter, fixed across training
    std::vector<double> w0;  // empty means all zeros
    GradientBackend backend = GradientBackend::classical;
    Aggregation aggregation = Aggregation::plain_sum;
    qgd::PipelineConfig pipeline;  // quantum backends only

    // qsmc aggregation; moduli sized so gamma-scaled gradient sums fit.
    std::vector<std::uint64_t> moduli = {4093, 4099, 4111, 4127};
    double gamma = 1e6;
    std::size_t gamma_retries = 8;  // halvings tried after an overflow abort
    qsmc::GhzBackend ghz_backend = qsmc::GhzBackend::constraint_sampler;
    std::size_t decoys = 20;
    double decoy_threshold = 0.0;
    qsmc::Attacker attacker = qsmc::Attacker::none;
    bool keep_transcripts = false;

    std::uint64_t seed = 1;
};

enum class TrainStatus {
    converged,
    epoch_limit,
    aborted_decoy,
    aborted_overflow,
};

[[nodiscard]] std::string train_status_name(TrainStatus status);

struct EpochRecord {
    std::size_t epoch = 0;       // 1-based
    double loss = 0.0;           // MSE at the weights the epoch started with
    double grad_norm_sq = 0.0;   // ||G||^2 of the aggregated gradient
    std::vector<double> gradient;
    std::vector<double> w;       // weights after the update
    double gamma = 0.0;          // scale actually used (after any halvings)
};

struct TrainResult {
    TrainStatus status = TrainStatus::epoch_limit;
    std::vector<double> w;
    std::vector<EpochRecord> history;
    // One transcript per successful qsmc epoch, kept only when the config
    // asks for them; an aborting transcript is always kept.
    std::vector<qsmc::Transcript> transcripts;

    [[nodiscard]] nlohmann::json to_json() const;
};

// g^j = (1/M_k) sum_i (x_i . w + b - y_i) x_i^j.
[[nodiscard]] std::vector<double> classical_gradient(const ClientDataset& dataset,
                                                     const std::vector<double>& w, double b);

// Mean squared error over the union of the client datasets.
[[nodiscard]] double mse_loss(const std::vector<ClientDataset>& clients,
                              const std::vector<double>& w, double b);

// w' = w - alpha * G.
[[nodiscard]] std::vector<double> update_parameters(const std::vector<double>& w,
                                                    const std::vector<double>& gradient,
                                                    double alpha);

// true iff ||G||^2 <= epsilon.
[[nodiscard]] bool converged(const std::vector<double>& gradient, double epsilon);

// Runs the federated loop. A failed decoy check or an unrecoverable
// overflow halts training with the abort status and the history collected
// so far; the weights are those from before the failed epoch.
[[nodiscard]] TrainResult train(const std::vector<ClientDataset>& clients,
                                const TrainConfig& config);

}  // namespace qfl::flr
