#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "qfl/common/rng.hpp"
#include "qfl/prep/encoding.hpp"
#include "qfl/qgd/grover.hpp"
#include "qfl/qsim/gates.hpp"
#include "qfl/qsim/operations.hpp"
#include "qfl/qsim/state_vector.hpp"
#include "qfl/qsmc/crt.hpp"
#include "qfl/qsmc/ghz.hpp"

namespace {

using namespace qfl;

qsim::StateVector random_state(int n, std::uint64_t seed) {
    qsim::StateVector s(n);
    std::mt19937_64 gen(seed);
    double norm = 0.0;
    for (auto& a : s.amplitudes()) {
        a = {common::uniform01(gen) - 0.5, common::uniform01(gen) - 0.5};
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : s.amplitudes()) a /= norm;
    return s;
}

void BM_apply_gate(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    qsim::StateVector s = random_state(n, 17);
    const qsim::Mat2 h = qsim::GateSpec::h().matrix();
    int target = 0;
    for (auto _ : state) {
        qsim::apply_1q(s, h, target);
        target = (target + 1) % n;
        benchmark::DoNotOptimize(s.amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_apply_gate)->Arg(10)->Arg(16)->Arg(20);

void BM_controlled_gate(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    qsim::StateVector s = random_state(n, 18);
    const qsim::Mat2 h = qsim::GateSpec::h().matrix();
    const auto ctrl = qsim::ControlSpec::on(n - 1);
    for (auto _ : state) {
        qsim::apply_1q(s, h, 0, ctrl);
        benchmark::DoNotOptimize(s.amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_controlled_gate)->Arg(10)->Arg(16)->Arg(20);

void BM_qft(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    qsim::StateVector s = random_state(n, 19);
    for (auto _ : state) {
        qsim::apply_qft(s, s.full_range(), false);
        qsim::apply_qft(s, s.full_range(), true);
        benchmark::DoNotOptimize(s.amplitudes().data());
    }
    state.SetItemsProcessed(2 * state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_qft)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

// One Grover step of the overlap circuit; the state has range(0) data
// qubits plus the flag and branch qubits.
void BM_grover_step(benchmark::State& state) {
    const int dq = static_cast<int>(state.range(0));
    const std::size_t dim = std::size_t{1} << dq;
    std::mt19937_64 gen(23);
    std::vector<double> x(dim), w(dim);
    for (double& v : x) v = 2.0 * common::uniform01(gen) - 1.0;
    for (double& v : w) v = 2.0 * common::uniform01(gen) - 1.0;
    const std::vector<std::vector<double>> rows{x};
    const auto enc =
        prep::EncodingConstants::for_dataset(rows, w, prep::EncodingMethod::angle_tree);
    const qgd::OverlapPrep prep = qgd::make_overlap_prep(x, w, enc);
    qsim::StateVector s = prep.prepare();
    for (auto _ : state) {
        qgd::apply_grover_step(s, prep);
        benchmark::DoNotOptimize(s.amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (dq + 2)));
}
BENCHMARK(BM_grover_step)->Arg(4)->Arg(8)->Arg(12);

void BM_ghz_sampler(benchmark::State& state) {
    const auto clients = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const auto r =
            qsmc::run_ghz_round(clients, 23, qsmc::GhzBackend::constraint_sampler, seed++);
        benchmark::DoNotOptimize(r.outcomes.data());
    }
}
BENCHMARK(BM_ghz_sampler)->Arg(2)->Arg(8)->Arg(32);

void BM_ghz_statevector(benchmark::State& state) {
    const auto clients = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const auto r =
            qsmc::run_ghz_round(clients, 3, qsmc::GhzBackend::qudit_statevector, seed++);
        benchmark::DoNotOptimize(r.outcomes.data());
    }
}
BENCHMARK(BM_ghz_statevector)->Arg(2)->Arg(6)->Arg(10);

// Share split plus CRT reconstruction over the first range(0) moduli.
void BM_crt(benchmark::State& state) {
    qsmc::CrtConfig cfg;
    cfg.moduli = {4093, 4099, 4111, 4127};
    cfg.moduli.resize(static_cast<std::size_t>(state.range(0)));
    cfg.gamma = 1.0;
    cfg.clients = 1;
    cfg.signed_values = true;
    const auto window = static_cast<std::uint64_t>(cfg.product() / 2);
    std::mt19937_64 gen(91);
    for (auto _ : state) {
        const auto value = static_cast<std::int64_t>(common::bounded(gen, window));
        const std::vector<std::uint64_t> shares = qsmc::compute_shares(value, cfg);
        const std::int64_t back = qsmc::decode_aggregate(shares, cfg);
        benchmark::DoNotOptimize(back);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_crt)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
