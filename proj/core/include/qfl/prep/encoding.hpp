#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qfl::prep {

// How the parameter vector enters the overlap circuit.
//   amplitude_rotation ("method one"):  flag-qubit rotations, c2_prime = c2
//   angle_tree         ("method two"):  rotation-tree amplitudes, c2_prime = sqrt(D) * c2
enum class EncodingMethod { amplitude_rotation, angle_tree };

// Normalization constants shared between circuits and their classical
// decodes. All recovery arithmetic must use the same values the circuits
// were built with; keeping them in one struct is what enforces that.
struct EncodingConstants {
    double c1 = 1.0;        // data scale: c1 * |x_i^j| <= 1 required
    double c2 = 1.0;        // parameter scale: c2 * |w^j| <= 1 for amplitude_rotation
    double c2_prime = 1.0;  // c2 for amplitude_rotation, sqrt(D) * c2 for angle_tree
    double c3 = 1.0;        // residual scale, chosen per epoch: c3 * |F_i| <= 1
    std::size_t dimension = 1;  // D, power of two (after padding)
    EncodingMethod method = EncodingMethod::angle_tree;

    // c1 from the client's own data (1 / max |x_i^j|), c2 from the parameter
    // norm (1 / ||w||), c2_prime per method. c3 stays 1 until residuals are
    // known. Throws on all-zero data or zero parameters.
    static EncodingConstants for_dataset(std::span<const std::vector<double>> rows,
                                         std::span<const double> w, EncodingMethod method);

    void validate() const;  // positivity and method/c2_prime consistency
};

}  // namespace qfl::prep
