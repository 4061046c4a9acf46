#include "qfl/flr/trainer.hpp"

#include <cmath>
#include <stdexcept>

#include "qfl/common/rng.hpp"

namespace qfl::flr {

namespace {

constexpr std::uint64_t kClientSeedTag = 0x636c6e74;  // "clnt"
constexpr std::uint64_t kAggSeedTag = 0x61676772;     // "aggr"

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

void ClientDataset::validate() const {
    if (rows.empty()) throw std::invalid_argument("client dataset has no samples");
    const std::size_t d = rows.front().size();
    if (d == 0) throw std::invalid_argument("client dataset has no features");
    for (const auto& r : rows)
        if (r.size() != d) throw std::invalid_argument("client rows must share one length");
    if (targets.size() != rows.size())
        throw std::invalid_argument("one target per sample is required");
}

std::string gradient_backend_name(GradientBackend backend) {
    switch (backend) {
        case GradientBackend::classical: return "classical";
        case GradientBackend::quantum_shortcut: return "quantum_shortcut";
        case GradientBackend::quantum_full: return "quantum_full";
    }
    return "unknown";
}

GradientBackend gradient_backend_from_name(const std::string& name) {
    if (name == "classical") return GradientBackend::classical;
    if (name == "quantum_shortcut") return GradientBackend::quantum_shortcut;
    if (name == "quantum_full") return GradientBackend::quantum_full;
    throw std::invalid_argument("unknown gradient backend: " + name);
}

std::string aggregation_name(Aggregation aggregation) {
    return aggregation == Aggregation::qsmc ? "qsmc" : "plain_sum";
}

Aggregation aggregation_from_name(const std::string& name) {
    if (name == "plain_sum") return Aggregation::plain_sum;
    if (name == "qsmc") return Aggregation::qsmc;
    throw std::invalid_argument("unknown aggregation: " + name);
}

std::string train_status_name(TrainStatus status) {
    switch (status) {
        case TrainStatus::converged: return "converged";
        case TrainStatus::epoch_limit: return "epoch_limit";
        case TrainStatus::aborted_decoy: return "aborted_decoy";
        case TrainStatus::aborted_overflow: return "aborted_overflow";
    }
    return "unknown";
}

std::vector<double> classical_gradient(const ClientDataset& dataset, const std::vector<double>& w,
                                       double b) {
    dataset.validate();
    if (w.size() != dataset.dimension())
        throw std::invalid_argument("weight length must match the feature count");
    const std::size_t d = dataset.dimension();
    std::vector<double> g(d, 0.0);
    for (std::size_t i = 0; i < dataset.samples(); ++i) {
        const double r = dot(dataset.rows[i], w) + b - dataset.targets[i];
        for (std::size_t j = 0; j < d; ++j) g[j] += r * dataset.rows[i][j];
    }
    const double inv_m = 1.0 / static_cast<double>(dataset.samples());
    for (double& v : g) v *= inv_m;
    return g;
}

double mse_loss(const std::vector<ClientDataset>& clients, const std::vector<double>& w,
                double b) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const ClientDataset& c : clients) {
        for (std::size_t i = 0; i < c.samples(); ++i) {
            const double r = dot(c.rows[i], w) + b - c.targets[i];
            sum += r * r;
        }
        count += c.samples();
    }
    if (count == 0) throw std::invalid_argument("no samples");
    return sum / static_cast<double>(count);
}

std::vector<double> update_parameters(const std::vector<double>& w,
                                      const std::vector<double>& gradient, double alpha) {
    if (w.size() != gradient.size())
        throw std::invalid_argument("weight and gradient lengths must match");
    std::vector<double> out(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) out[j] = w[j] - alpha * gradient[j];
    return out;
}

bool converged(const std::vector<double>& gradient, double epsilon) {
    double n = 0.0;
    for (double g : gradient) n += g * g;
    return n <= epsilon;
}

nlohmann::json TrainResult::to_json() const {
    nlohmann::json j;
    j["status"] = train_status_name(status);
    j["w"] = w;
    j["history"] = nlohmann::json::array();
    for (const EpochRecord& e : history)
        j["history"].push_back({{"epoch", e.epoch},
                                {"loss", e.loss},
                                {"grad_norm_sq", e.grad_norm_sq},
                                {"gradient", e.gradient},
                                {"w", e.w},
                                {"gamma", e.gamma}});
    j["transcripts"] = nlohmann::json::array();
    for (const qsmc::Transcript& t : transcripts) j["transcripts"].push_back(t.to_json());
    return j;
}

TrainResult train(const std::vector<ClientDataset>& clients, const TrainConfig& config) {
    if (clients.empty()) throw std::invalid_argument("at least one client is required");
    for (const ClientDataset& c : clients) c.validate();
    const std::size_t dim = clients.front().dimension();
    for (const ClientDataset& c : clients)
        if (c.dimension() != dim)
            throw std::invalid_argument("clients must share one feature count");
    if (!(config.alpha > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (!(config.epsilon > 0.0))
        throw std::invalid_argument("convergence threshold must be positive");
    if (config.max_epochs == 0) throw std::invalid_argument("at least one epoch is required");
    if (!config.w0.empty() && config.w0.size() != dim)
        throw std::invalid_argument("initial weights must match the feature count");

    std::size_t total_samples = 0;
    for (const ClientDataset& c : clients) total_samples += c.samples();
    std::vector<double> betas;
    betas.reserve(clients.size());
    for (const ClientDataset& c : clients)
        betas.push_back(static_cast<double>(c.samples()) / static_cast<double>(total_samples));

    TrainResult res;
    res.w = config.w0.empty() ? std::vector<double>(dim, 0.0) : config.w0;
    double current_gamma = config.gamma;

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        std::vector<std::vector<double>> locals(clients.size());
        for (std::size_t k = 0; k < clients.size(); ++k) {
            switch (config.backend) {
                case GradientBackend::classical:
                    locals[k] = classical_gradient(clients[k], res.w, config.b);
                    break;
                case GradientBackend::quantum_shortcut: {
                    qgd::PipelineConfig p = config.pipeline;
                    p.theta_mode = qgd::ThetaMode::exact;
                    p.p_mode = qgd::PMode::exact;
                    p.f_arith = qgd::FArith::real;
                    p.intercept = config.b;
                    p.seed = common::derive_seed(config.seed, kClientSeedTag, epoch, k);
                    locals[k] =
                        qgd::local_gradient(clients[k].rows, clients[k].targets, res.w, p).g;
                    break;
                }
                case GradientBackend::quantum_full: {
                    qgd::PipelineConfig p = config.pipeline;
                    p.intercept = config.b;
                    p.seed = common::derive_seed(config.seed, kClientSeedTag, epoch, k);
                    locals[k] =
                        qgd::local_gradient(clients[k].rows, clients[k].targets, res.w, p).g;
                    break;
                }
            }
        }

        std::vector<double> federated(dim, 0.0);
        double epoch_gamma = 0.0;  // stays 0 when no scale is involved
        if (config.aggregation == Aggregation::plain_sum) {
            for (std::size_t k = 0; k < clients.size(); ++k)
                for (std::size_t j = 0; j < dim; ++j) federated[j] += betas[k] * locals[k][j];
        } else {
            // Overflow halves gamma and retries the same epoch; the reduced
            // scale is kept for the rest of training.
            bool aggregated = false;
            for (std::size_t attempt = 0; attempt <= config.gamma_retries; ++attempt) {
                qsmc::ProtocolConfig pc;
                pc.crt.moduli = config.moduli;
                pc.crt.gamma = current_gamma;
                pc.crt.clients = clients.size();
                pc.crt.beta = betas;
                pc.crt.signed_values = true;
                pc.backend = config.ghz_backend;
                pc.decoys = config.decoys;
                pc.decoy_threshold = config.decoy_threshold;
                qsmc::Transcript t = qsmc::run_protocol(
                    locals, pc, config.attacker,
                    common::derive_seed(config.seed, kAggSeedTag, epoch, attempt));
                if (t.status == qsmc::ProtocolStatus::aborted_overflow) {
                    res.transcripts.push_back(std::move(t));
                    current_gamma *= 0.5;
                    continue;
                }
                if (t.status == qsmc::ProtocolStatus::aborted_decoy) {
                    res.transcripts.push_back(std::move(t));
                    res.status = TrainStatus::aborted_decoy;
                    return res;
                }
                federated = t.gradient;
                epoch_gamma = current_gamma;
                if (config.keep_transcripts) res.transcripts.push_back(std::move(t));
                aggregated = true;
                break;
            }
            if (!aggregated) {
                res.status = TrainStatus::aborted_overflow;
                return res;
            }
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.loss = mse_loss(clients, res.w, config.b);
        rec.grad_norm_sq = 0.0;
        for (double g : federated) rec.grad_norm_sq += g * g;
        rec.gradient = federated;
        res.w = update_parameters(res.w, federated, config.alpha);
        rec.w = res.w;
        rec.gamma = epoch_gamma;
        res.history.push_back(std::move(rec));

        if (converged(federated, config.epsilon)) {
            res.status = TrainStatus::converged;
            return res;
        }
    }
    res.status = TrainStatus::epoch_limit;
    return res;
}

}  // namespace qfl::flr
