#include "qfl/prep/angle_tree.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qfl::prep {

AngleTree build_angle_tree(std::span<const double> w, std::size_t dim) {
    if (w.empty()) throw std::invalid_argument("cannot build a tree for an empty vector");
    std::size_t target = dim;
    if (target == 0) target = std::bit_ceil(std::max<std::size_t>(w.size(), 2));
    if (!std::has_single_bit(target) || target < w.size())
        throw std::invalid_argument("tree dimension must be a power of two covering the vector");

    AngleTree tree;
    tree.original_dim = w.size();
    tree.padded = target != w.size();
    tree.depth = std::countr_zero(target);

    tree.h.resize(tree.depth + 1);
    tree.h[tree.depth].assign(target, 0.0);
    for (std::size_t j = 0; j < w.size(); ++j) tree.h[tree.depth][j] = w[j];

    bool any_nonzero = false;
    for (double v : tree.h[tree.depth])
        if (v != 0.0) any_nonzero = true;
    if (!any_nonzero) throw std::invalid_argument("cannot build a tree for the zero vector");

    for (int t = tree.depth - 1; t >= 0; --t) {
        tree.h[t].resize(std::size_t{1} << t);
        for (std::size_t j = 0; j < tree.h[t].size(); ++j)
            tree.h[t][j] = std::hypot(tree.h[t + 1][2 * j], tree.h[t + 1][2 * j + 1]);
    }

    tree.angles.resize(tree.depth);
    for (int t = 0; t < tree.depth; ++t) {
        tree.angles[t].resize(std::size_t{1} << t);
        for (std::size_t j = 0; j < tree.angles[t].size(); ++j)
            // atan2(0, 0) == 0, so fully-zero subtrees rotate by nothing.
            tree.angles[t][j] = std::atan2(tree.h[t + 1][2 * j + 1], tree.h[t + 1][2 * j]);
    }
    return tree;
}

void apply_angle_tree_rotations(qsim::StateVector& s, const AngleTree& tree,
                                const qsim::QubitRange& reg, const qsim::ControlSpec& ctrl,
                                bool inverse) {
    if (reg.count != tree.depth)
        throw std::invalid_argument("register width does not match tree depth");
    const double dir = inverse ? -1.0 : 1.0;
    // Level t reads the path prefix from the t highest register bits and
    // rotates the next one down. Bit (count-1-t) of the register value is
    // qubit reg.first + count-1-t.
    for (int step = 0; step < tree.depth; ++step) {
        const int t = inverse ? tree.depth - 1 - step : step;
        const int target = reg.first + reg.count - 1 - t;
        if (t == 0) {
            qsim::apply_1q(s, qsim::GateSpec::ry(dir * 2.0 * tree.angles[0][0]).matrix(), target,
                           ctrl);
            continue;
        }
        const qsim::QubitRange prefix{target + 1, t};
        qsim::apply_value_controlled_1q(
            s, prefix, target,
            [&](std::uint64_t j) {
                return qsim::GateSpec::ry(dir * 2.0 * tree.angles[t][j]).matrix();
            },
            ctrl);
    }
}

}  // namespace qfl::prep
