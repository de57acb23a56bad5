#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace qgreedy {

using Vector = std::vector<double>;

// Sorted, duplicate-free, 0-based indices. Reports print them 1-based.
using IndexSet = std::vector<std::size_t>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Tolerance for comparisons against certified bounds.
inline constexpr double kBoundTol = 1e-9;

// Data needed to re-evaluate a lower bound by hand. Fields that a given
// estimator does not use stay empty.
struct Witness {
    std::string kind;
    Vector f;            // ambient vector (or coefficient array, see kind)
    Vector gamma;        // multiplier for S_gamma
    Vector signs;        // signs over set_b (or set_a when set_b empty)
    Vector signs_a;      // second sign pattern (super-democracy)
    IndexSet set_a;
    IndexSet set_b;
    std::size_t m = 0;
};

// A sup-type (or inf-type) constant bracketed by a witness-certified side
// and a certified-or-heuristic side.
struct BoundEstimate {
    double lower = 0.0;
    double upper = kInf;
    bool upper_certified = false;  // false: `upper` is +inf or heuristic
    bool heuristic = true;         // false only when the search was exhaustive
    Witness witness;
    std::string note;

    [[nodiscard]] bool exact() const { return !heuristic && upper_certified && upper == lower; }
};

std::string format_set(const IndexSet& set);  // "{1,3,5}"
std::string format_set_compact(const IndexSet& set);  // "1;3;5" (CSV-safe)
std::string format_double(double x);  // shortest round-trip representation

IndexSet normalize_set(IndexSet set);  // sort + dedupe

} // namespace qgreedy

namespace qgreedy {

enum class SearchMode { exact, random };

// Shared knobs of every sampling estimator. `budget` counts sampled
// candidates; `threads == 0` means all cores. Results never depend on
// `threads`.
struct SearchOptions {
    SearchMode mode = SearchMode::random;
    std::size_t budget = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

} // namespace qgreedy
