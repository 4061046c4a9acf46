#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qfl/flr/trainer.hpp"
#include "test_support.hpp"

using namespace qfl::flr;

namespace {

// Deterministic synthetic regression task y = X w*, features in [-1, 1].
std::vector<ClientDataset> synthetic_clients(const std::vector<std::size_t>& sizes,
                                             const std::vector<double>& w_star,
                                             std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::vector<ClientDataset> clients;
    for (std::size_t m : sizes) {
        ClientDataset c;
        c.rows = testsupport::random_rows(gen, m, w_star.size(), -1.0, 1.0);
        for (const auto& row : c.rows) {
            double y = 0.0;
            for (std::size_t j = 0; j < row.size(); ++j) y += row[j] * w_star[j];
            c.targets.push_back(y);
        }
        clients.push_back(std::move(c));
    }
    return clients;
}

ClientDataset merged(const std::vector<ClientDataset>& clients) {
    ClientDataset all;
    for (const auto& c : clients) {
        all.rows.insert(all.rows.end(), c.rows.begin(), c.rows.end());
        all.targets.insert(all.targets.end(), c.targets.begin(), c.targets.end());
    }
    return all;
}

const ClientDataset kClient1{{{2.0, 3.464}}, {2.464}};
const ClientDataset kClient2{{{2.5, 4.33}}, {2.33}};
const std::vector<double> kW0 = {0.866, 0.5};

}  // namespace

TEST_CASE("classical gradient matches the worked example and finite differences") {
    const auto g1 = classical_gradient(kClient1, kW0, 0.0);
    REQUIRE(g1.size() == 2);
    CHECK(g1[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g1[1] == doctest::Approx(3.464).epsilon(1e-12));

    const auto g2 = classical_gradient(kClient2, kW0, 0.0);
    CHECK(g2[0] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(g2[1] == doctest::Approx(8.66).epsilon(1e-12));

    // Zero residuals, zero gradient.
    const ClientDataset fit{{{1.0, 2.0}}, {1.0 * 0.866 + 2.0 * 0.5}};
    const auto gz = classical_gradient(fit, kW0, 0.0);
    CHECK(std::abs(gz[0]) < 1e-12);
    CHECK(std::abs(gz[1]) < 1e-12);

    // Central differences of the half-MSE objective.
    std::mt19937_64 gen(1123);
    ClientDataset data;
    data.rows = testsupport::random_rows(gen, 8, 4, -1.0, 1.0);
    data.targets = testsupport::random_vector(gen, 8, -1.0, 1.0);
    const auto w = testsupport::random_vector(gen, 4, -0.5, 0.5);
    const double b = 0.3;
    const auto grad = classical_gradient(data, w, b);
    const auto half_mse = [&](const std::vector<double>& wt) {
        double sum = 0.0;
        for (std::size_t i = 0; i < data.rows.size(); ++i) {
            double r = b - data.targets[i];
            for (std::size_t j = 0; j < wt.size(); ++j) r += data.rows[i][j] * wt[j];
            sum += r * r;
        }
        return sum / (2.0 * static_cast<double>(data.rows.size()));
    };
    const double h = 1e-6;
    for (std::size_t j = 0; j < w.size(); ++j) {
        auto wp = w;
        auto wm = w;
        wp[j] += h;
        wm[j] -= h;
        const double numeric = (half_mse(wp) - half_mse(wm)) / (2.0 * h);
        CHECK(grad[j] == doctest::Approx(numeric).epsilon(1e-5));
    }
}

TEST_CASE("update and convergence follow the formulas") {
    const auto w1 = update_parameters(kW0, {3.5, 6.06}, 0.01);
    CHECK(w1[0] == doctest::Approx(0.831).epsilon(1e-12));
    CHECK(w1[1] == doctest::Approx(0.4394).epsilon(1e-12));

    const auto same = update_parameters(kW0, {0.0, 0.0}, 0.5);
    CHECK(same == kW0);

    CHECK(converged({0.0, 0.0}, 1e-4));
    CHECK(converged({0.01, 0.0}, 1e-4));       // ||G||^2 == epsilon exactly
    CHECK(!converged({0.011, 0.0}, 1e-4));
    CHECK(!converged({1.0, 1.0}, 1e-4));
}

TEST_CASE("mse loss averages over the union of clients") {
    const std::vector<ClientDataset> clients = {kClient1, kClient2};
    // Residuals at w0: 1.0 and 2.0, over two samples.
    CHECK(mse_loss(clients, kW0, 0.0) == doctest::Approx((1.0 + 4.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("single client plain training is ordinary gradient descent") {
    const std::vector<double> w_star = {0.5, -0.3};
    const auto clients = synthetic_clients({12}, w_star, 99);

    TrainConfig cfg;
    cfg.alpha = 0.1;
    cfg.epsilon = 1e-12;
    cfg.max_epochs = 15;
    cfg.w0 = {0.0, 0.0};
    const TrainResult result = train(clients, cfg);

    std::vector<double> w = {0.0, 0.0};
    for (std::size_t e = 0; e < result.history.size(); ++e) {
        const auto g = classical_gradient(clients[0], w, 0.0);
        w = update_parameters(w, g, cfg.alpha);
        CHECK(result.history[e].epoch == e + 1);
        for (std::size_t j = 0; j < w.size(); ++j) {
            CHECK(result.history[e].gradient[j] == doctest::Approx(g[j]).epsilon(1e-12));
            CHECK(result.history[e].w[j] == doctest::Approx(w[j]).epsilon(1e-12));
        }
        CHECK(result.history[e].gamma == 0.0);
    }
    CHECK(result.w == result.history.back().w);
}

TEST_CASE("one epoch over the worked clients reproduces the aggregate") {
    const std::vector<ClientDataset> clients = {kClient1, kClient2};

    TrainConfig cfg;
    cfg.alpha = 0.01;
    cfg.epsilon = 1e-12;
    cfg.max_epochs = 1;
    cfg.w0 = kW0;

    // Raw-data gradients are (2, 3.464) and (5, 8.66), so the plain average
    // carries the unrounded 6.062; the gamma=100 masked path quantizes the
    // second component back to 6.06.
    SUBCASE("plain sum") {
        const TrainResult r = train(clients, cfg);
        REQUIRE(r.history.size() == 1);
        CHECK(r.history[0].gradient[0] == doctest::Approx(3.5).epsilon(1e-12));
        CHECK(r.history[0].gradient[1] == doctest::Approx(6.062).epsilon(1e-12));
        CHECK(r.history[0].loss == doctest::Approx(2.5).epsilon(1e-9));
        CHECK(r.w[0] == doctest::Approx(0.831).epsilon(1e-12));
        CHECK(r.w[1] == doctest::Approx(0.43938).epsilon(1e-12));
        CHECK(r.status == TrainStatus::epoch_limit);
    }
    SUBCASE("masked aggregation at the worked scale") {
        cfg.aggregation = Aggregation::qsmc;
        cfg.gamma = 100.0;
        cfg.keep_transcripts = true;
        const TrainResult r = train(clients, cfg);
        REQUIRE(r.history.size() == 1);
        CHECK(r.history[0].gradient[0] == doctest::Approx(3.5).epsilon(1e-12));
        CHECK(r.history[0].gradient[1] == doctest::Approx(6.06).epsilon(1e-12));
        CHECK(r.history[0].gamma == 100.0);
        REQUIRE(r.transcripts.size() == 1);
        CHECK(r.transcripts[0].status == qfl::qsmc::ProtocolStatus::ok);
    }
}

TEST_CASE("unequal client sizes weight the aggregate by sample count") {
    const std::vector<double> w_star = {0.4, -0.2, 0.7};
    const auto clients = synthetic_clients({9, 3, 6}, w_star, 2025);
    const std::vector<double> w = {0.1, 0.1, 0.1};

    TrainConfig cfg;
    cfg.alpha = 0.05;
    cfg.epsilon = 1e-15;
    cfg.max_epochs = 1;
    cfg.w0 = w;
    const TrainResult r = train(clients, cfg);

    std::vector<double> expected(3, 0.0);
    const double total = 18.0;
    for (const auto& c : clients) {
        const auto g = classical_gradient(c, w, 0.0);
        for (std::size_t j = 0; j < 3; ++j)
            expected[j] += (static_cast<double>(c.samples()) / total) * g[j];
    }
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(r.history[0].gradient[j] == doctest::Approx(expected[j]).epsilon(1e-12));

    // The merged dataset gives the same aggregate: weighting by M_k is what
    // makes the federated gradient equal the centralized one.
    const auto g_central = classical_gradient(merged(clients), w, 0.0);
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(r.history[0].gradient[j] == doctest::Approx(g_central[j]).epsilon(1e-12));
}

TEST_CASE("masked aggregation tracks plain training within the scale step") {
    const std::vector<double> w_star = {0.5, -0.3, 0.8, 0.1};
    const auto clients = synthetic_clients({7, 5}, w_star, 31337);

    TrainConfig plain;
    plain.alpha = 0.1;
    plain.epsilon = 1e-15;
    plain.max_epochs = 12;
    plain.w0 = std::vector<double>(4, 0.0);

    TrainConfig masked = plain;
    masked.aggregation = Aggregation::qsmc;
    masked.gamma = 1e6;

    const TrainResult rp = train(clients, plain);
    const TrainResult rm = train(clients, masked);
    REQUIRE(rp.history.size() == rm.history.size());
    // Per-epoch gradient quantization is at most K/(2 gamma); over 12 epochs
    // the weight tracks the unmasked run to roughly alpha * epochs / gamma.
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(std::abs(rp.w[j] - rm.w[j]) < 1e-5);
    for (const auto& rec : rm.history) CHECK(rec.gamma == 1e6);

    // Loss is monotonically non-increasing on this well-conditioned task.
    for (std::size_t e = 1; e < rp.history.size(); ++e)
        CHECK(rp.history[e].loss <= rp.history[e - 1].loss + 1e-12);
}

TEST_CASE("gamma halves and retries after an overflow abort") {
    ClientDataset c;
    c.rows = {{1.0}};
    c.targets = {-5.0};  // residual 6 at w = 1, so the gradient is 6
    TrainConfig cfg;
    cfg.alpha = 1e-12;  // keeps the gradient essentially constant across epochs
    cfg.epsilon = 1e-15;
    cfg.max_epochs = 2;
    cfg.w0 = {1.0};
    cfg.aggregation = Aggregation::qsmc;
    cfg.moduli = {23, 29};
    cfg.gamma = 100.0;  // 600 is outside the signed window [-333, 333]
    cfg.gamma_retries = 4;

    const TrainResult r = train({c}, cfg);
    REQUIRE(r.status == TrainStatus::epoch_limit);
    REQUIRE(r.history.size() == 2);
    CHECK(r.history[0].gradient[0] == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(r.history[0].gamma == 50.0);
    // The halved scale persists; epoch two does not re-abort.
    CHECK(r.history[1].gamma == 50.0);
    // The aborting transcript is always kept.
    REQUIRE(!r.transcripts.empty());
    CHECK(r.transcripts[0].status == qfl::qsmc::ProtocolStatus::aborted_overflow);

    // With no headroom to halve into, training aborts.
    TrainConfig hard = cfg;
    hard.gamma_retries = 0;
    const TrainResult rh = train({c}, hard);
    CHECK(rh.status == TrainStatus::aborted_overflow);
    CHECK(rh.history.empty());
    CHECK(rh.w == std::vector<double>{1.0});
}

TEST_CASE("training aborts when the channel check fails") {
    const std::vector<ClientDataset> clients = {kClient1, kClient2};
    TrainConfig cfg;
    cfg.max_epochs = 3;
    cfg.w0 = kW0;
    cfg.aggregation = Aggregation::qsmc;
    cfg.gamma = 100.0;
    cfg.decoys = 40;
    cfg.attacker = qfl::qsmc::Attacker::intercept_resend;

    const TrainResult r = train(clients, cfg);
    CHECK(r.status == TrainStatus::aborted_decoy);
    CHECK(r.history.empty());
    CHECK(r.w == kW0);
    REQUIRE(!r.transcripts.empty());
    CHECK(r.transcripts.back().status == qfl::qsmc::ProtocolStatus::aborted_decoy);
}

TEST_CASE("quantum shortcut training matches the classical trajectory") {
    const std::vector<double> w_star = {0.6, -0.4};
    const auto clients = synthetic_clients({5, 4}, w_star, 4242);

    TrainConfig classical;
    classical.alpha = 0.1;
    classical.epsilon = 1e-15;
    classical.max_epochs = 10;
    // The quantum encoders need a nonzero parameter vector.
    classical.w0 = {0.1, 0.1};

    TrainConfig shortcut = classical;
    shortcut.backend = GradientBackend::quantum_shortcut;

    const TrainResult rc = train(clients, classical);
    const TrainResult rq = train(clients, shortcut);
    REQUIRE(rc.history.size() == rq.history.size());
    for (std::size_t e = 0; e < rc.history.size(); ++e) {
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(rq.history[e].w[j] == doctest::Approx(rc.history[e].w[j]).epsilon(1e-9));
        }
    }
}

TEST_CASE("convergence stops training with the converged status") {
    const std::vector<double> w_star = {0.3, 0.2};
    const auto clients = synthetic_clients({20}, w_star, 555);
    TrainConfig cfg;
    cfg.alpha = 0.3;
    cfg.epsilon = 1e-10;
    cfg.max_epochs = 500;
    cfg.w0 = {0.0, 0.0};
    const TrainResult r = train(clients, cfg);
    CHECK(r.status == TrainStatus::converged);
    CHECK(r.history.size() < 500);
    CHECK(r.history.back().grad_norm_sq <= 1e-10);
    for (std::size_t j = 0; j < 2; ++j) CHECK(r.w[j] == doctest::Approx(w_star[j]).epsilon(1e-3));
}

TEST_CASE("trainer validates its inputs") {
    TrainConfig cfg;
    CHECK_THROWS_AS((void)train({}, cfg), std::invalid_argument);

    ClientDataset ragged;
    ragged.rows = {{1.0, 2.0}, {1.0}};
    ragged.targets = {0.0, 0.0};
    CHECK_THROWS_AS(ragged.validate(), std::invalid_argument);
    CHECK_THROWS_AS((void)train({ragged}, cfg), std::invalid_argument);

    ClientDataset short_targets;
    short_targets.rows = {{1.0}};
    short_targets.targets = {};
    CHECK_THROWS_AS((void)train({short_targets}, cfg), std::invalid_argument);

    ClientDataset ok;
    ok.rows = {{1.0}};
    ok.targets = {1.0};
    TrainConfig bad = cfg;
    bad.alpha = -1.0;
    CHECK_THROWS_AS((void)train({ok}, bad), std::invalid_argument);
    TrainConfig mismatched = cfg;
    mismatched.w0 = {1.0, 2.0};
    CHECK_THROWS_AS((void)train({ok}, mismatched), std::invalid_argument);
}

TEST_CASE("train results serialize") {
    const std::vector<ClientDataset> clients = {kClient1};
    TrainConfig cfg;
    cfg.max_epochs = 2;
    cfg.w0 = kW0;
    const TrainResult r = train(clients, cfg);
    const auto j = r.to_json();
    CHECK(j.contains("status"));
    CHECK(j.contains("w"));
    CHECK(j["history"].size() == r.history.size());
}
