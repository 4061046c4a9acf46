#include "qfl/qsim/gates.hpp"

#include <cmath>
#include <numbers>

namespace qfl::qsim {

Mat2 GateSpec::matrix() const {
    using std::cos;
    using std::sin;
    constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    switch (kind) {
        case Kind::hadamard:
            return {{{amp_t{inv_sqrt2, 0}, amp_t{inv_sqrt2, 0}},
                     {amp_t{inv_sqrt2, 0}, amp_t{-inv_sqrt2, 0}}}};
        case Kind::pauli_x:
            return {{{amp_t{0, 0}, amp_t{1, 0}}, {amp_t{1, 0}, amp_t{0, 0}}}};
        case Kind::phase:
            return {{{amp_t{1, 0}, amp_t{0, 0}},
                     {amp_t{0, 0}, std::polar(1.0, theta)}}};
        case Kind::ry: {
            const double c = cos(theta / 2.0), s = sin(theta / 2.0);
            return {{{amp_t{c, 0}, amp_t{-s, 0}}, {amp_t{s, 0}, amp_t{c, 0}}}};
        }
        case Kind::fourier_phase: {
            // diag(1, e^{-2 pi i / 2^j}); the adjoint (addition direction)
            // carries the positive exponent.
            const double ang = 2.0 * std::numbers::pi / std::ldexp(1.0, index);
            return {{{amp_t{1, 0}, amp_t{0, 0}},
                     {amp_t{0, 0}, std::polar(1.0, adjoint ? ang : -ang)}}};
        }
        case Kind::unitary: {
            const double c = cos(theta / 2.0), s = sin(theta / 2.0);
            return {{{amp_t{c, 0}, -std::polar(s, lambda)},
                     {std::polar(s, phi), std::polar(c, phi + lambda)}}};
        }
    }
    return {};
}

bool is_unitary(const Mat2& m, double tol) {
    // Check M * M^dagger == I entrywise.
    const Mat2 d = dagger(m);
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            amp_t acc{0, 0};
            for (int k = 0; k < 2; ++k) acc += m[r][k] * d[k][c];
            const amp_t expected = (r == c) ? amp_t{1, 0} : amp_t{0, 0};
            if (std::abs(acc - expected) > tol) return false;
        }
    }
    return true;
}

Mat2 dagger(const Mat2& m) {
    return {{{std::conj(m[0][0]), std::conj(m[1][0])},
             {std::conj(m[0][1]), std::conj(m[1][1])}}};
}

}  // namespace qfl::qsim
