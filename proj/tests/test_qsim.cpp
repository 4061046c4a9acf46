#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "doctest.h"
#include "qfl/common/rng.hpp"
#include "qfl/qsim/gates.hpp"
#include "qfl/qsim/measure.hpp"
#include "qfl/qsim/operations.hpp"
#include "qfl/qsim/phase_estimation.hpp"
#include "qfl/qsim/state_vector.hpp"
#include "test_support.hpp"

using namespace qfl::qsim;

namespace {

StateVector random_state(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    StateVector s(n);
    double norm = 0.0;
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
        s[i] = {testsupport::uniform_in(gen, -1.0, 1.0), testsupport::uniform_in(gen, -1.0, 1.0)};
        norm += std::norm(s[i]);
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (std::uint64_t i = 0; i < s.dim(); ++i) s[i] *= scale;
    return s;
}

double max_amp_diff(const StateVector& a, const StateVector& b) {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < a.dim(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("gate matrices are unitary and dagger inverts them") {
    const std::vector<GateSpec> gates = {
        GateSpec::h(),
        GateSpec::x(),
        GateSpec::phase(0.7),
        GateSpec::ry(1.3),
        GateSpec::fourier_phase(3),
        GateSpec::fourier_phase(3, true),
        GateSpec::unitary(0.4, 1.9, -0.6),
    };
    for (const auto& g : gates) {
        const Mat2 m = g.matrix();
        CHECK(is_unitary(m));
        StateVector s = random_state(3, 11);
        const StateVector before = s;
        apply_1q(s, m, 1);
        apply_1q(s, dagger(m), 1);
        CHECK(max_amp_diff(s, before) < 1e-12);
    }
}

TEST_CASE("control specs gate single-qubit action") {
    // X on qubit 0 controlled on qubit 1 = 1 acts only on the upper half.
    StateVector s = random_state(2, 5);
    const StateVector before = s;
    apply_1q(s, GateSpec::x().matrix(), 0, ControlSpec::on(1));
    CHECK(s[0] == before[0]);
    CHECK(s[1] == before[1]);
    CHECK(s[2] == before[3]);
    CHECK(s[3] == before[2]);

    // Anti-control on qubit 1 touches the complementary half.
    StateVector t = before;
    apply_1q(t, GateSpec::x().matrix(), 0, ControlSpec::on(1, false));
    CHECK(t[0] == before[1]);
    CHECK(t[1] == before[0]);
    CHECK(t[2] == before[2]);
    CHECK(t[3] == before[3]);

    CHECK_THROWS_AS(apply_1q(s, GateSpec::x().matrix(), 1, ControlSpec::on(1)),
                    std::invalid_argument);
}

TEST_CASE("qft round trip and basis-state columns") {
    StateVector s = random_state(6, 17);
    const StateVector before = s;
    apply_qft(s, s.full_range());
    apply_qft(s, s.full_range(), true);
    CHECK(max_amp_diff(s, before) < 1e-12);

    // Column check: QFT|a> has amplitude e^{2 pi i a b / N} / sqrt(N) at |b>.
    const std::uint64_t a = 5;
    StateVector basis = StateVector::basis_state(4, a);
    apply_qft(basis, basis.full_range());
    const double n = 16.0;
    for (std::uint64_t b = 0; b < 16; ++b) {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(a * b) / n;
        const amp_t expected = std::polar(1.0 / std::sqrt(n), ang);
        CHECK(std::abs(basis[b] - expected) < 1e-12);
    }
}

TEST_CASE("phase ramp applies value-indexed phases in both directions") {
    const QubitRange reg{0, 3};
    for (int sign : {+1, -1}) {
        StateVector s = random_state(3, 23);
        const StateVector before = s;
        apply_phase_ramp(s, reg, 3, sign);
        for (std::uint64_t v = 0; v < 8; ++v) {
            const double ang = sign * 2.0 * std::numbers::pi * 3.0 * static_cast<double>(v) / 8.0;
            CHECK(std::abs(s[v] - before[v] * std::polar(1.0, ang)) < 1e-12);
        }
    }
}

TEST_CASE("phase flip reflects exactly the masked subspace") {
    StateVector s = random_state(3, 29);
    const StateVector before = s;
    // Flip where qubit 2 = 1 and qubit 0 = 0.
    apply_phase_flip(s, 0b101, 0b100);
    for (std::uint64_t i = 0; i < 8; ++i) {
        const bool hit = (i & 0b101) == 0b100;
        CHECK(std::abs(s[i] - (hit ? -before[i] : before[i])) == 0.0);
    }
}

TEST_CASE("basis oracle modes and rejection") {
    const QubitRange in{0, 2};
    const QubitRange out{2, 2};
    StateVector s = random_state(4, 31);
    const StateVector before = s;
    const auto f = [](std::uint64_t a) { return (a * 3) % 4; };

    SUBCASE("xor mode permutes within output slices") {
        apply_basis_oracle(s, f, in, out, OracleMode::xor_into);
        for (std::uint64_t i = 0; i < 16; ++i) {
            const std::uint64_t a = in.extract(i);
            const std::uint64_t b = out.extract(i);
            const std::uint64_t j = (i & ~out.mask()) | ((b ^ f(a)) << out.first);
            CHECK(s[j] == before[i]);
        }
    }
    SUBCASE("add mode shifts output slices modularly") {
        apply_basis_oracle(s, f, in, out, OracleMode::add_mod);
        for (std::uint64_t i = 0; i < 16; ++i) {
            const std::uint64_t a = in.extract(i);
            const std::uint64_t b = out.extract(i);
            const std::uint64_t j = (i & ~out.mask()) | (((b + f(a)) % 4) << out.first);
            CHECK(s[j] == before[i]);
        }
    }
    SUBCASE("values that do not fit the output register are rejected") {
        CHECK_THROWS_AS(
            apply_basis_oracle(s, [](std::uint64_t) { return std::uint64_t{4}; }, in, out,
                               OracleMode::xor_into),
            std::invalid_argument);
    }
}

TEST_CASE("marginal probabilities match direct summation") {
    StateVector s = random_state(5, 37);
    const QubitRange reg{1, 3};
    const auto probs = marginal_probabilities(s, reg);
    REQUIRE(probs.size() == 8);
    std::vector<double> direct(8, 0.0);
    for (std::uint64_t i = 0; i < s.dim(); ++i) direct[reg.extract(i)] += std::norm(s[i]);
    double total = 0.0;
    for (std::uint64_t v = 0; v < 8; ++v) {
        CHECK(probs[v] == doctest::Approx(direct[v]).epsilon(1e-12));
        total += probs[v];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("register drop and append round trip") {
    StateVector s = random_state(3, 41);
    RegisterLayout layout;
    layout.add("data", {0, 3});
    s.set_layout(layout);

    StateVector grown = append_zero_register(s, "anc", 2);
    CHECK(grown.n_qubits() == 5);
    CHECK(grown.layout().has("anc"));
    CHECK(grown.layout().at("anc") == QubitRange{3, 2});

    StateVector back = drop_zero_register(grown, grown.layout().at("anc"));
    CHECK(back.n_qubits() == 3);
    CHECK(!back.layout().has("anc"));
    CHECK(max_amp_diff(back, s) < 1e-12);

    // Residual weight on the register blocks the drop.
    apply_1q(grown, GateSpec::h().matrix(), 3);
    CHECK_THROWS_AS(drop_zero_register(grown, QubitRange{3, 2}), std::runtime_error);
}

TEST_CASE("measurement sampling is seed deterministic and tie-stable") {
    StateVector s = random_state(4, 43);
    const Histogram h1 = sample_measurement(s, s.full_range(), 5000, 99);
    const Histogram h2 = sample_measurement(s, s.full_range(), 5000, 99);
    CHECK(h1.counts == h2.counts);
    CHECK(h1.shots == 5000);

    const Histogram h3 = sample_measurement(s, s.full_range(), 5000, 100);
    CHECK(h1.counts != h3.counts);

    Histogram tie;
    tie.counts = {{2, 7}, {5, 7}, {9, 3}};
    CHECK(tie.modal_outcome() == 2);

    // Sampled frequencies track the distribution.
    const auto probs = marginal_probabilities(s, s.full_range());
    const Histogram big = sample_measurement(s, s.full_range(), 200000, 7);
    for (std::uint64_t v = 0; v < probs.size(); ++v) {
        const auto it = big.counts.find(v);
        const double freq = it == big.counts.end()
                                ? 0.0
                                : static_cast<double>(it->second) / static_cast<double>(big.shots);
        CHECK(std::abs(freq - probs[v]) < 0.01);
    }
}

TEST_CASE("distribution sampling validates and normalizes") {
    const std::vector<double> pmf = {0.2, 0.0, 0.6, 0.2};
    const Histogram h = sample_distribution(pmf, 30000, 3);
    CHECK(h.counts.count(1) == 0);
    CHECK(h.modal_outcome() == 2);

    const std::vector<double> junk = {0.0, 0.0};
    CHECK_THROWS_AS(sample_distribution(junk, 10, 1), std::invalid_argument);
}

TEST_CASE("histogram serialization shapes") {
    Histogram h;
    h.counts = {{1, 3}, {6, 2}};
    h.shots = 5;
    h.seed = 9;
    CHECK(h.to_csv() == "outcome,count\n1,3\n6,2\n");
    const auto j = h.to_json();
    CHECK(j["shots"] == 5);
    REQUIRE(j["counts"].size() == 2);
    CHECK(j["counts"][0][0] == 1);
    CHECK(j["counts"][0][1] == 3);
}

TEST_CASE("phase estimation is exact on grid phases") {
    // diag(1, e^{2 pi i * 3/8}) applied to |1>: the l=3 register must read 3.
    const double phi = 3.0 / 8.0;
    StateVector eigen = StateVector::basis_state(1, 1);
    const ControlledOp op = [&](StateVector& s, const ControlSpec& ctrl) {
        apply_1q(s, GateSpec::phase(2.0 * std::numbers::pi * phi).matrix(), 0, ctrl);
    };
    const StateVector out = phase_estimation(eigen, op, 3);
    REQUIRE(out.layout().has("theta"));
    const auto probs = marginal_probabilities(out, out.layout().at("theta"));
    for (std::uint64_t k = 0; k < 8; ++k) {
        CHECK(probs[k] == doctest::Approx(k == 3 ? 1.0 : 0.0).epsilon(1e-10));
    }
}

TEST_CASE("analytic register distribution matches the full circuit off grid") {
    const double phi = 0.3;
    const int l = 5;
    StateVector eigen = StateVector::basis_state(1, 1);
    const ControlledOp op = [&](StateVector& s, const ControlSpec& ctrl) {
        apply_1q(s, GateSpec::phase(2.0 * std::numbers::pi * phi).matrix(), 0, ctrl);
    };
    const StateVector out = phase_estimation(eigen, op, l);
    const auto circuit = marginal_probabilities(out, out.layout().at("theta"));

    const std::vector<std::pair<double, double>> mix = {{phi, 1.0}};
    const auto analytic = qpe_distribution(mix, l);
    REQUIRE(analytic.size() == circuit.size());
    double total = 0.0;
    for (std::size_t k = 0; k < analytic.size(); ++k) {
        CHECK(std::abs(analytic[k] - circuit[k]) < 1e-12);
        total += analytic[k];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // The argmax is the nearest grid point: round(0.3 * 32) = 10.
    std::size_t argmax = 0;
    for (std::size_t k = 1; k < analytic.size(); ++k) {
        if (analytic[k] > analytic[argmax]) argmax = k;
    }
    CHECK(argmax == 10);
}

TEST_CASE("rng primitives are stable and well ranged") {
    std::mt19937_64 gen(12345);
    for (int i = 0; i < 10000; ++i) {
        const double u = qfl::common::uniform01(gen);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    std::mt19937_64 g1(7);
    std::mt19937_64 g2(7);
    for (int i = 0; i < 100; ++i) CHECK(qfl::common::uniform01(g1) == qfl::common::uniform01(g2));

    // bounded() covers the whole range and nothing outside it.
    std::vector<std::uint64_t> seen(7, 0);
    std::mt19937_64 g3(11);
    for (int i = 0; i < 7000; ++i) {
        const std::uint64_t v = qfl::common::bounded(g3, 7);
        REQUIRE(v < 7);
        ++seen[v];
    }
    for (std::uint64_t c : seen) CHECK(c > 0);
    CHECK(testsupport::uniformity_p(seen) > 1e-4);

    // Derived seeds differ across every coordinate.
    const std::uint64_t base = qfl::common::derive_seed(42, 1, 2, 3);
    CHECK(base == qfl::common::derive_seed(42, 1, 2, 3));
    CHECK(base != qfl::common::derive_seed(42, 1, 2, 4));
    CHECK(base != qfl::common::derive_seed(42, 1, 3, 3));
    CHECK(base != qfl::common::derive_seed(42, 2, 2, 3));
    CHECK(base != qfl::common::derive_seed(43, 1, 2, 3));
}
