#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qfl/qsim/operations.hpp"

namespace qfl::prep {

// Binary rotation-angle tree for amplitude encoding of a real vector.
// Level L (the leaves) holds the vector entries themselves, possibly signed;
// every interior node is the nonnegative root-sum-square of its two children,
// so h[0][0] is the vector's 2-norm. The rotation angle stored at node
// (t, j) is atan2(h[t+1][2j+1], h[t+1][2j]): signs live entirely in the
// angles, which makes the reconstruction exact for signed inputs.
struct AngleTree {
    int depth = 0;                          // L, tree has levels 0..L
    std::size_t original_dim = 0;           // before zero-padding
    bool padded = false;
    std::vector<std::vector<double>> h;     // h[t] has 2^t entries
    std::vector<std::vector<double>> angles;  // angles[t] has 2^t entries, t in [0, L)

    double norm() const { return h.empty() ? 0.0 : h[0][0]; }
    std::size_t dim() const { return h.empty() ? 0 : h.back().size(); }
};

// Builds the tree for `w`, zero-padding to `dim` (a power of two) or, when
// dim == 0, to the next power of two at least 2. Rejects all-zero input.
AngleTree build_angle_tree(std::span<const double> w, std::size_t dim = 0);

// Applies the tree's controlled-rotation cascade to `reg` (|0...0> in, the
// normalized vector's amplitudes out): level-t rotations act on the qubit
// carrying bit (L-1-t) of the register value, selected by the value of the
// higher bits. `inverse` plays the cascade backwards with negated angles.
void apply_angle_tree_rotations(qsim::StateVector& s, const AngleTree& tree,
                                const qsim::QubitRange& reg,
                                const qsim::ControlSpec& ctrl = {}, bool inverse = false);

}  // namespace qfl::prep
