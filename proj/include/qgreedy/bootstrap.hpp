#pragma once

// The feedback transform t_m = m (sum_{n<=m} s_n^{-2})^{-1/2} and its
// iteration from s = 1.

#include <cstddef>
#include <string>
#include <vector>

#include "qgreedy/types.hpp"

namespace qgreedy {

// Positive values s_1..s_M (stored 0-based).
struct GrowthSequence {
    Vector values;
    std::string label;

    [[nodiscard]] std::size_t size() const { return values.size(); }
    // 1-based access, matching the index m of the formulas.
    [[nodiscard]] double at(std::size_t m) const { return values.at(m - 1); }
};

// H_1..H_M with compensated summation.
GrowthSequence harmonic(std::size_t M);

// Throws InvalidInput on a nonpositive or non-finite entry.
GrowthSequence bootstrap_step(const GrowthSequence& s);

// chain[0] = 1, chain[k+1] = bootstrap_step(chain[k]); iterations + 1 stages.
std::vector<GrowthSequence> bootstrap_chain(std::size_t M, std::size_t iterations);

// Columns m, stage0..stageK, stageK_over_m.
std::string chain_to_csv(const std::vector<GrowthSequence>& chain);

} // namespace qgreedy
