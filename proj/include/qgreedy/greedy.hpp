#pragma once

// Thresholding greedy algorithm G_m, restricted truncation operators U_m and
// estimators for the constants that bound them.

#include <cstddef>
#include <span>
#include <vector>

#include "qgreedy/bases.hpp"
#include "qgreedy/types.hpp"

namespace qgreedy {

// Indices sorted by decreasing |a_n|, ties broken by the smaller index. The
// first m entries form the greedy set A_m.
std::vector<std::size_t> greedy_ordering(std::span<const double> coeffs);

IndexSet greedy_set_of_coefficients(std::span<const double> coeffs, std::size_t m);
IndexSet greedy_set(const Basis& basis, std::span<const double> f, std::size_t m);

// G_m(f) = S_{A_m(f)} f.
Vector greedy_approximation(const Basis& basis, std::span<const double> f, std::size_t m);

// U(f, A) = min_{n in A} |x_n*(f)| sum_{n in A} sgn(x_n*(f)) x_n, with
// sgn(0) = 1 and U(f, {}) = 0.
Vector restricted_truncation(const Basis& basis, std::span<const double> f, const IndexSet& set);

// U_m(f) = U(f, A_m(f)).
Vector truncation_operator(const Basis& basis, std::span<const double> f, std::size_t m);

// sup_{f, m} ||G_m f|| / ||f||, lower bound with witness (f, m). The upper
// side is never certified. budget = 0 evaluates only f = x_1.
BoundEstimate quasi_greedy_constant(const Basis& basis, const SearchOptions& opts);

// Same for U_m.
BoundEstimate truncation_constant(const Basis& basis, const SearchOptions& opts);

struct ConditionalityRow {
    std::size_t m = 0;
    double lower = 0.0;       // witness-certified
    double upper = kInf;      // certified via r-convexity
    double diagnostic = 0.0;  // lower / (1 + log m)^{1/p}
    IndexSet witness_set;
    Vector witness_f;
    bool exhaustive = false;
};

// k_m = sup_{|A| <= m} ||S_A|| for m = 1..max_m. Exact mode enumerates every
// A with |A| <= max_m (d <= 20); on l_p with p <= 1 that makes the lower
// bound the true k_m.
std::vector<ConditionalityRow> conditionality_growth_profile(const Basis& basis, std::size_t max_m,
                                                             const SearchOptions& opts);

// ||S_A|| restricted to the probe set used by the estimators (exact on l_p,
// p <= 1). Exposed for witness checks.
double projection_norm_lower(const Basis& basis, const IndexSet& set, Vector* witness_f = nullptr);

} // namespace qgreedy
