#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "qfl/arith/fixed_point.hpp"
#include "qfl/arith/fourier_adder.hpp"
#include "qfl/qsim/gates.hpp"
#include "qfl/qsim/operations.hpp"
#include "qfl/qsim/state_vector.hpp"

using namespace qfl::arith;
using qfl::qsim::apply_1q;
using qfl::qsim::GateSpec;
using qfl::qsim::QubitRange;
using qfl::qsim::StateVector;

namespace {

// Index of the (unique) basis state carrying essentially all amplitude.
std::uint64_t sole_support(const StateVector& s, double tol = 1e-9) {
    std::uint64_t where = s.dim();
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
        if (std::abs(s[i]) > tol) {
            REQUIRE(where == s.dim());
            REQUIRE(std::abs(std::abs(s[i]) - 1.0) < tol);
            where = i;
        }
    }
    REQUIRE(where != s.dim());
    return where;
}

}  // namespace

TEST_CASE("codec round trips in-range values within half a step") {
    const FixedPoint codec{16, 10, true};
    CHECK(codec.resolution() == doctest::Approx(1.0 / 1024.0));
    const std::vector<double> values = {0.0,   1.0,    -1.0,  3.464,  2.464,
                                        -7.25, 0.0004, -31.0, 31.999, -32.0};
    for (double v : values) {
        REQUIRE(codec.fits(v));
        const std::uint64_t raw = codec.encode(v);
        CHECK(raw < (std::uint64_t{1} << 16));
        CHECK(std::abs(codec.decode(raw) - v) <= codec.resolution() / 2.0 + 1e-15);
    }
}

TEST_CASE("codec known words and two's complement behavior") {
    const FixedPoint codec{16, 10, true};
    CHECK(codec.encode(3.3846154) == 3466);
    CHECK(codec.encode(2.464) == 2523);
    CHECK(codec.encode(-1.5) == 65536 - 1536);
    CHECK(codec.raw_to_int(65536 - 1536) == -1536);
    CHECK(codec.decode(65536 - 1536) == doctest::Approx(-1.5));
    CHECK(codec.raw_to_int(1536) == 1536);

    // Half-away-from-zero rounding at the midpoint.
    CHECK(codec.encode(codec.resolution() / 2.0) == 1);
    CHECK(codec.encode(-codec.resolution() / 2.0) == 65536 - 1);

    const FixedPoint narrow{11, 8, true};
    CHECK(narrow.encode(3.39086026) == 868);
    CHECK(narrow.encode(2.464) == 631);
    CHECK(narrow.decode(868) - narrow.decode(631) == doctest::Approx(0.92578125));

    const FixedPoint unsigned_codec{8, 4, false};
    CHECK(unsigned_codec.min_value() == 0.0);
    CHECK(unsigned_codec.raw_to_int(200) == 200);
    CHECK(unsigned_codec.decode(200) == doctest::Approx(12.5));
}

TEST_CASE("codec range flags") {
    const FixedPoint codec{8, 4, true};
    CHECK(codec.max_value() == doctest::Approx(127.0 / 16.0));
    CHECK(codec.min_value() == doctest::Approx(-8.0));
    CHECK(codec.fits(7.9375));
    // fits() rounds to the raw grid first, so anything below 127.5 / 16 still lands on 127.
    CHECK(codec.fits(7.96));
    CHECK(!codec.fits(7.97));
    CHECK(codec.fits(-8.0));
    CHECK(codec.fits(-8.03));
    CHECK(!codec.fits(-8.04));
}

TEST_CASE("fourier constant addition matches modular arithmetic exhaustively") {
    // Smaller widths here; the acceptance harness sweeps up to q = 6.
    for (int q = 1; q <= 4; ++q) {
        const std::uint64_t n = std::uint64_t{1} << q;
        for (Sign sign : {Sign::plus, Sign::minus}) {
            for (std::uint64_t a = 0; a < n; ++a) {
                for (std::uint64_t t = 0; t < n; ++t) {
                    StateVector s = StateVector::basis_state(q, a);
                    fourier_add_const(s, s.full_range(), static_cast<std::int64_t>(t), sign);
                    const std::uint64_t expected =
                        sign == Sign::plus ? (a + t) % n : (a + n - t % n) % n;
                    CHECK(sole_support(s) == expected);
                }
            }
        }
    }
}

TEST_CASE("fourier addition acts linearly on superpositions") {
    const int q = 4;
    StateVector s(q);
    for (int k = 0; k < q; ++k) apply_1q(s, GateSpec::h().matrix(), k);
    StateVector expected = s;
    fourier_add_const(s, s.full_range(), 5, Sign::plus);
    // A uniform superposition is permutation invariant, so only phases could
    // differ; the adder is phase-exact on the value basis.
    for (std::uint64_t i = 0; i < s.dim(); ++i) CHECK(std::abs(s[i] - expected[i]) < 1e-12);

    // A two-term superposition maps to the shifted two-term superposition.
    StateVector t(q);
    t[2] = std::sqrt(0.5);
    t[9] = std::sqrt(0.5);
    fourier_add_const(t, t.full_range(), 10, Sign::plus);
    CHECK(std::abs(t[(2 + 10) % 16] - std::sqrt(0.5)) < 1e-12);
    CHECK(std::abs(t[(9 + 10) % 16] - std::sqrt(0.5)) < 1e-12);
}

TEST_CASE("register-sourced addition matches the folded-constant form") {
    const int q = 3;
    const std::uint64_t n = 8;
    const QubitRange target{0, q};
    const QubitRange source{q, q};
    for (Sign sign : {Sign::plus, Sign::minus}) {
        for (std::uint64_t a = 0; a < n; ++a) {
            for (std::uint64_t t = 0; t < n; ++t) {
                StateVector s = StateVector::basis_state(2 * q, a | (t << q));
                fourier_add_register(s, target, source, sign);
                const std::uint64_t value =
                    sign == Sign::plus ? (a + t) % n : (a + n - t) % n;
                CHECK(sole_support(s) == (value | (t << q)));
            }
        }
    }

    // Superposed source: |a>(|t1>+|t2>)/sqrt(2) entangles the sums.
    StateVector s(2 * q);
    s[2 | (1ull << q)] = std::sqrt(0.5);
    s[2 | (5ull << q)] = std::sqrt(0.5);
    fourier_add_register(s, target, source, Sign::plus);
    CHECK(std::abs(s[3 | (1ull << q)] - std::sqrt(0.5)) < 1e-12);
    CHECK(std::abs(s[7 | (5ull << q)] - std::sqrt(0.5)) < 1e-12);
}

TEST_CASE("residual oracle shifts codec words and reports overflow") {
    const FixedPoint codec{8, 4, true};
    const QubitRange reg{0, 8};

    SUBCASE("in-range shift lands on the encoded residual") {
        const double xw = 3.25;
        const double y = 2.5;
        const double b = 0.5;
        StateVector s = StateVector::basis_state(8, codec.encode(xw));
        const auto report = apply_f_oracle(s, reg, y, b, codec);
        CHECK(!report.overflow);
        CHECK(report.y_raw == codec.encode(y));
        CHECK(report.b_raw == codec.encode(b));
        CHECK(sole_support(s) == codec.encode(xw - y + b));
    }
    SUBCASE("wrapped result is reported, not rejected") {
        const double xw = 7.5;
        StateVector s = StateVector::basis_state(8, codec.encode(xw));
        const auto report = apply_f_oracle(s, reg, -1.0, 0.0, codec);
        CHECK(report.overflow);
        // 7.5 + 1.0 wraps past max_value() into the negative window.
        const std::uint64_t raw = sole_support(s);
        CHECK(codec.raw_to_int(raw) ==
              codec.raw_to_int(codec.encode(7.5)) + codec.raw_to_int(codec.encode(1.0)) - 256);
    }
    SUBCASE("superpositions shift every branch") {
        StateVector s(8);
        s[codec.encode(1.0)] = std::sqrt(0.5);
        s[codec.encode(-2.0)] = std::sqrt(0.5);
        apply_f_oracle(s, reg, 0.5, 0.25, codec);
        CHECK(std::abs(s[codec.encode(0.75)] - std::sqrt(0.5)) < 1e-12);
        CHECK(std::abs(s[codec.encode(-2.25)] - std::sqrt(0.5)) < 1e-12);
    }
}
