#include "qfl/qsim/measure.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qfl/common/rng.hpp"

namespace qfl::qsim {

std::uint64_t Histogram::modal_outcome() const {
    if (counts.empty()) throw std::runtime_error("modal outcome of an empty histogram");
    std::uint64_t best = counts.begin()->first;
    std::uint64_t best_count = counts.begin()->second;
    for (const auto& [outcome, count] : counts) {
        if (count > best_count) {  // strict: first (smallest) key wins ties
            best = outcome;
            best_count = count;
        }
    }
    return best;
}

std::string Histogram::to_csv() const {
    std::ostringstream out;
    out << "outcome,count\n";
    for (const auto& [outcome, count] : counts) out << outcome << "," << count << "\n";
    return out.str();
}

nlohmann::json Histogram::to_json() const {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [outcome, count] : counts) pairs.push_back({outcome, count});
    return nlohmann::json{{"shots", shots}, {"seed", seed}, {"counts", pairs}};
}

Histogram sample_measurement(const StateVector& s, const QubitRange& reg, std::uint64_t shots,
                             std::uint64_t seed) {
    return sample_distribution(marginal_probabilities(s, reg), shots, seed);
}

Histogram sample_distribution(std::span<const double> pmf, std::uint64_t shots,
                              std::uint64_t seed) {
    if (pmf.empty()) throw std::invalid_argument("empty distribution");
    std::vector<double> cum(pmf.size());
    double acc = 0.0;
    for (std::size_t v = 0; v < pmf.size(); ++v) {
        if (pmf[v] < 0.0) throw std::invalid_argument("negative probability mass");
        acc += pmf[v];
        cum[v] = acc;
    }
    if (!(acc > 0.0)) throw std::invalid_argument("distribution has no mass");
    // Weights are relative; cum.back() is the total, which also absorbs any
    // normalization drift of computed marginals.
    std::mt19937_64 gen(seed);
    Histogram h;
    h.shots = shots;
    h.seed = seed;
    for (std::uint64_t n = 0; n < shots; ++n) {
        const double u = common::uniform01(gen) * acc;
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        const std::uint64_t v = static_cast<std::uint64_t>(
            std::min<std::ptrdiff_t>(it - cum.begin(), static_cast<std::ptrdiff_t>(cum.size()) - 1));
        ++h.counts[v];
    }
    return h;
}

}  // namespace qfl::qsim
