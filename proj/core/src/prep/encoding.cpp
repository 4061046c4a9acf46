#include "qfl/prep/encoding.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qfl::prep {

EncodingConstants EncodingConstants::for_dataset(std::span<const std::vector<double>> rows,
                                                 std::span<const double> w,
                                                 EncodingMethod method) {
    if (rows.empty()) throw std::invalid_argument("dataset has no rows");
    double max_abs = 0.0;
    for (const auto& row : rows)
        for (double v : row) max_abs = std::max(max_abs, std::abs(v));
    if (max_abs == 0.0) throw std::invalid_argument("dataset is identically zero");

    double wnorm_sq = 0.0;
    for (double v : w) wnorm_sq += v * v;
    if (wnorm_sq == 0.0) throw std::invalid_argument("parameter vector is zero");

    EncodingConstants c;
    c.c1 = 1.0 / max_abs;
    c.c2 = 1.0 / std::sqrt(wnorm_sq);
    c.dimension = std::bit_ceil(std::max<std::size_t>(w.size(), 2));
    c.method = method;
    c.c2_prime = (method == EncodingMethod::angle_tree)
                     ? std::sqrt(static_cast<double>(c.dimension)) * c.c2
                     : c.c2;
    c.c3 = 1.0;
    return c;
}

void EncodingConstants::validate() const {
    if (!(c1 > 0.0) || !(c2 > 0.0) || !(c2_prime > 0.0) || !(c3 > 0.0))
        throw std::invalid_argument("encoding constants must be positive");
    if (dimension == 0 || !std::has_single_bit(dimension))
        throw std::invalid_argument("encoded dimension must be a power of two");
    const double expected = (method == EncodingMethod::angle_tree)
                                ? std::sqrt(static_cast<double>(dimension)) * c2
                                : c2;
    if (std::abs(c2_prime - expected) > 1e-9 * std::max(1.0, expected))
        throw std::invalid_argument("c2_prime is inconsistent with the encoding method");
}

}  // namespace qfl::prep
