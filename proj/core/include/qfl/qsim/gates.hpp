#pragma once

#include <array>

#include "qfl/qsim/state_vector.hpp"

namespace qfl::qsim {

// Row-major 2x2 complex matrix: m[row][col].
using Mat2 = std::array<std::array<amp_t, 2>, 2>;

// Single-qubit gate description. Every kind realizes a 2x2 unitary.
struct GateSpec {
    enum class Kind {
        hadamard,
        pauli_x,
        phase,          // diag(1, e^{i*lambda})
        ry,             // [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]]
        fourier_phase,  // diag(1, e^{-2*pi*i / 2^index}); adjoint flips the sign
        unitary,        // general U(theta, phi, lambda), see matrix()
    };

    Kind kind = Kind::hadamard;
    double theta = 0.0;   // ry angle / phase lambda / unitary theta
    double phi = 0.0;     // unitary only
    double lambda = 0.0;  // unitary only
    int index = 1;        // fourier_phase only: the j in 2^j
    bool adjoint = false; // fourier_phase only

    Mat2 matrix() const;

    static GateSpec h() { return {Kind::hadamard}; }
    static GateSpec x() { return {Kind::pauli_x}; }
    static GateSpec phase(double lambda) { return {Kind::phase, lambda}; }
    static GateSpec ry(double theta) { return {Kind::ry, theta}; }
    static GateSpec fourier_phase(int j, bool adjoint = false) {
        GateSpec g{Kind::fourier_phase};
        g.index = j;
        g.adjoint = adjoint;
        return g;
    }
    static GateSpec unitary(double theta, double phi, double lambda) {
        GateSpec g{Kind::unitary};
        g.theta = theta;
        g.phi = phi;
        g.lambda = lambda;
        return g;
    }
};

bool is_unitary(const Mat2& m, double tol = 1e-10);

Mat2 dagger(const Mat2& m);

}  // namespace qfl::qsim
