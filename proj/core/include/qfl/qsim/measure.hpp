#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "qfl/qsim/operations.hpp"
#include "qfl/qsim/state_vector.hpp"

namespace qfl::qsim {

// Measurement record: outcome value -> count. Keyed by register value, not
// bitstring text, so downstream decoding is orientation-independent.
struct Histogram {
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    // Highest count; ties resolve to the smaller outcome (reproducible).
    std::uint64_t modal_outcome() const;

    std::string to_csv() const;  // header "outcome,count", one row per outcome
    nlohmann::json to_json() const;
};

// Samples `shots` independent measurements of `reg` in the computational
// basis. The state is not collapsed. Identical (state, reg, shots, seed)
// inputs produce bit-identical histograms.
Histogram sample_measurement(const StateVector& s, const QubitRange& reg, std::uint64_t shots,
                             std::uint64_t seed);

// Same sampler on an explicit distribution (weights need not be normalized;
// they are treated as relative). Outcome v draws pmf[v].
Histogram sample_distribution(std::span<const double> pmf, std::uint64_t shots,
                              std::uint64_t seed);

}  // namespace qfl::qsim
