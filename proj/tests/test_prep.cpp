#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qfl/arith/fixed_point.hpp"
#include "qfl/prep/angle_tree.hpp"
#include "qfl/prep/encoding.hpp"
#include "qfl/prep/state_prep.hpp"
#include "qfl/qsim/operations.hpp"
#include "qfl/qsim/state_vector.hpp"

using namespace qfl::prep;
using qfl::arith::FixedPoint;
using qfl::qsim::QubitRange;
using qfl::qsim::StateVector;

TEST_CASE("angle tree stores pairwise norms for the worked vector") {
    const std::vector<double> w = {1.0, 2.0, 2.0, 4.0};
    const AngleTree tree = build_angle_tree(w);
    CHECK(tree.depth == 2);
    CHECK(tree.original_dim == 4);
    CHECK(!tree.padded);
    CHECK(tree.norm() == doctest::Approx(5.0).epsilon(1e-14));
    REQUIRE(tree.h.size() == 3);
    CHECK(tree.h[1][0] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
    CHECK(tree.h[1][1] == doctest::Approx(std::sqrt(20.0)).epsilon(1e-14));
    CHECK(tree.h[2] == w);

    const StateVector s = prepare_parameter_state(tree);
    REQUIRE(s.layout().has("j"));
    REQUIRE(s.layout().has("flag"));
    const std::vector<double> expected = {0.2, 0.4, 0.4, 0.8};
    const std::uint64_t flag_bit = std::uint64_t{1} << s.layout().at("flag").first;
    for (std::uint64_t j = 0; j < 4; ++j) {
        CHECK(std::abs(s[j | flag_bit] - qfl::qsim::amp_t{expected[j], 0.0}) < 1e-12);
        CHECK(std::abs(s[j]) < 1e-12);
    }
}

TEST_CASE("angle tree reconstructs signed and padded vectors exactly") {
    const std::vector<double> w = {1.0, -2.0, 3.0};
    const AngleTree tree = build_angle_tree(w);
    CHECK(tree.padded);
    CHECK(tree.dim() == 4);
    const double norm = std::sqrt(14.0);
    CHECK(tree.norm() == doctest::Approx(norm).epsilon(1e-14));

    const StateVector s = prepare_parameter_state(w, EncodingMethod::angle_tree);
    const std::uint64_t flag_bit = std::uint64_t{1} << s.layout().at("flag").first;
    const std::vector<double> padded = {1.0, -2.0, 3.0, 0.0};
    for (std::uint64_t j = 0; j < 4; ++j) {
        CHECK(std::abs(s[j | flag_bit] - qfl::qsim::amp_t{padded[j] / norm, 0.0}) < 1e-12);
    }
}

TEST_CASE("angle tree rotations invert cleanly and reject zero input") {
    const std::vector<double> w = {0.3, -0.7, 0.2, 0.9, -0.1, 0.0, 0.4, 0.5};
    const AngleTree tree = build_angle_tree(w);
    StateVector s(3);
    apply_angle_tree_rotations(s, tree, QubitRange{0, 3});
    double norm = 0.0;
    for (std::uint64_t j = 0; j < 8; ++j) {
        CHECK(std::abs(s[j].real() - w[j] / tree.norm()) < 1e-12);
        norm += std::norm(s[j]);
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));

    apply_angle_tree_rotations(s, tree, QubitRange{0, 3}, {}, /*inverse=*/true);
    CHECK(std::abs(s[0] - qfl::qsim::amp_t{1.0, 0.0}) < 1e-12);
    for (std::uint64_t j = 1; j < 8; ++j) CHECK(std::abs(s[j]) < 1e-12);

    const std::vector<double> zeros = {0.0, 0.0};
    CHECK_THROWS_AS(build_angle_tree(zeros), std::invalid_argument);
}

TEST_CASE("parameter state amplitude rotation places both flag branches") {
    const std::vector<double> w = {0.866, 0.5};
    const double c2 = 1.0;
    const StateVector s = prepare_parameter_state(w, EncodingMethod::amplitude_rotation, c2);
    const std::uint64_t flag_bit = std::uint64_t{1} << s.layout().at("flag").first;
    const double inv_sqrt_d = 1.0 / std::sqrt(2.0);
    for (std::uint64_t j = 0; j < 2; ++j) {
        const double a1 = c2 * w[j];
        CHECK(std::abs(s[j | flag_bit] - qfl::qsim::amp_t{inv_sqrt_d * a1, 0.0}) < 1e-12);
        CHECK(std::abs(s[j] - qfl::qsim::amp_t{inv_sqrt_d * std::sqrt(1.0 - a1 * a1), 0.0}) <
              1e-12);
    }

    // Default c2 = 1/||w||; the flag=1 block is then the tree state over sqrt(D).
    const StateVector rot = prepare_parameter_state(w, EncodingMethod::amplitude_rotation);
    const StateVector tree = prepare_parameter_state(w, EncodingMethod::angle_tree);
    for (std::uint64_t j = 0; j < 2; ++j) {
        CHECK(std::abs(rot[j | flag_bit] * std::sqrt(2.0) - tree[j | flag_bit]) < 1e-12);
    }

    CHECK_THROWS_AS(prepare_parameter_state(w, EncodingMethod::amplitude_rotation, 2.0),
                    std::invalid_argument);
}

TEST_CASE("data state matches its oracle form when components are representable") {
    const std::vector<double> x = {0.25, -0.5, 0.75, 1.0};
    const double c1 = 0.5;
    const FixedPoint codec{16, 10, true};
    // Every c1*x component is an exact multiple of 2^-10, so the two
    // preparations must coincide, not merely agree to rounding.
    const StateVector plain = prepare_data_state(x, c1);
    const StateVector oracle = prepare_data_state_via_oracle(x, c1, codec);
    REQUIRE(plain.dim() == oracle.dim());
    for (std::uint64_t i = 0; i < plain.dim(); ++i) CHECK(std::abs(plain[i] - oracle[i]) < 1e-12);
}

TEST_CASE("oracle data prep rounds each component to the codec grid") {
    const std::vector<double> x = {0.333, -0.777};
    const double c1 = 1.0;
    const FixedPoint codec{16, 8, true};
    std::vector<double> snapped(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        snapped[j] = codec.decode(codec.encode(c1 * x[j]));
    const StateVector oracle = prepare_data_state_via_oracle(x, c1, codec);
    const StateVector plain = prepare_data_state(snapped, 1.0);
    for (std::uint64_t i = 0; i < plain.dim(); ++i) CHECK(std::abs(plain[i] - oracle[i]) < 1e-12);
}

TEST_CASE("data state rejects scale violations") {
    const std::vector<double> x = {2.0, 3.464};
    CHECK_THROWS_AS(prepare_data_state(x, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(prepare_data_state_via_oracle(x, 0.5, FixedPoint{16, 10, true}),
                    std::invalid_argument);
}

TEST_CASE("norm estimation is exact in direct mode and on-grid under qpe") {
    const std::vector<double> x = {2.0, 3.464};
    const double c1 = 0.25;

    const NormEstimate direct = estimate_norm(x, c1, 1e-3, NormMode::direct);
    CHECK(direct.value == doctest::Approx(std::sqrt(15.999296)).epsilon(1e-12));
    CHECK(!direct.degenerate);

    // P(flag=1) is within 1.1e-5 of 1/2, so the phase lands on the l=10 grid
    // point for theta = pi/4 and the estimate snaps to exactly 4.
    const NormEstimate qpe = estimate_norm(x, c1, 1e-3, NormMode::qpe);
    CHECK(qpe.precision_bits == 10);
    CHECK(qpe.value == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(qpe.theta_tilde == 256);
    CHECK(!qpe.degenerate);

    const NormEstimate sampled = estimate_norm(x, c1, 1e-3, NormMode::qpe, 2024);
    CHECK(sampled.value == doctest::Approx(4.0).epsilon(1e-12));

    const std::vector<double> zero = {0.0, 0.0};
    const NormEstimate degenerate = estimate_norm(zero, 1.0, 1e-2, NormMode::qpe);
    CHECK(degenerate.degenerate);
    CHECK(degenerate.value == doctest::Approx(0.0));
}

TEST_CASE("encoding constants derive from the dataset and validate consistency") {
    const std::vector<std::vector<double>> rows = {{2.0, 3.464}};
    const std::vector<double> w = {0.866, 0.5};

    EncodingConstants one =
        EncodingConstants::for_dataset(rows, w, EncodingMethod::amplitude_rotation);
    CHECK(one.c1 == doctest::Approx(1.0 / 3.464).epsilon(1e-14));
    CHECK(one.c2 == doctest::Approx(1.0 / std::sqrt(0.999956)).epsilon(1e-12));
    CHECK(one.c2_prime == doctest::Approx(one.c2).epsilon(1e-14));
    CHECK(one.dimension == 2);
    one.validate();

    EncodingConstants two = EncodingConstants::for_dataset(rows, w, EncodingMethod::angle_tree);
    CHECK(two.c2_prime == doctest::Approx(std::sqrt(2.0) * two.c2).epsilon(1e-12));
    two.validate();

    two.c2_prime = two.c2;  // wrong for the tree method
    CHECK_THROWS_AS(two.validate(), std::invalid_argument);

    const std::vector<std::vector<double>> zeros = {{0.0, 0.0}};
    CHECK_THROWS_AS(
        EncodingConstants::for_dataset(zeros, w, EncodingMethod::amplitude_rotation),
        std::invalid_argument);
}
