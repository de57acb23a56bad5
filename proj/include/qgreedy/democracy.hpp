#pragma once

// Democracy functions phi_u / phi_l, SUCC and super-democracy constants.

#include <cstddef>
#include <string>
#include <vector>

#include "qgreedy/bases.hpp"
#include "qgreedy/types.hpp"

namespace qgreedy {

// Exact mode refuses enumerations larger than this many subsets.
inline constexpr double kMaxExactSubsets = 1e7;

struct DemocracyRow {
    std::size_t m = 0;
    BoundEstimate phi_u;  // lower = witness, upper = a m^{1/r}
    BoundEstimate phi_l;  // upper = witness, lower = certified floor
};

// Rows for m = 1..max_m (max_m is clamped to d). Exact mode enumerates
// subsets (or block occupancies on a block l_p(l_2) unit system) and throws
// CombinatorialOverflow when that is out of reach.
std::vector<DemocracyRow> democracy_table(const Basis& basis, std::size_t max_m, const SearchOptions& opts);

// phi_u(m) = sup_{|A| <= m} ||sum_A x_n||.
BoundEstimate upper_democracy(const Basis& basis, std::size_t m, const SearchOptions& opts);
// phi_l(m) = inf_{|A| >= m} ||sum_A x_n||, A ranging over subsets of {1..d}.
BoundEstimate lower_democracy(const Basis& basis, std::size_t m, const SearchOptions& opts);

struct SuccEstimate {
    BoundEstimate suppression;  // ||sum_A e x|| <= C ||sum_B e x||, A in B
    BoundEstimate sign_change;  // ||sum_A t x|| <= C ||sum_A e x||
};

// Exact over all signed subsets when d <= kSuccExactDim and mode is exact;
// sampled otherwise.
inline constexpr std::size_t kSuccExactDim = 13;
SuccEstimate succ_constant(const Basis& basis, const SearchOptions& opts);

// sup ||sum_A t x|| / ||sum_B e x|| over |A| = |B| <= m_max.
BoundEstimate super_democracy_constant(const Basis& basis, std::size_t m_max, const SearchOptions& opts);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root mean square, in log units
    std::size_t m_lo = 0, m_hi = 0;
};

// Least squares of log y on log m over m in [max(2, m_max/4), m_max].
SlopeFit loglog_slope(const std::vector<double>& y);

struct DemocracyProfile {
    std::vector<DemocracyRow> rows;
    SuccEstimate succ;
    BoundEstimate super_democracy;
    BoundEstimate quasi_greedy;
    SlopeFit slope_u, slope_l;
    double max_ratio = 0.0;  // max_m phi_u / phi_l (witness sides)
    bool democratic = false;
    bool almost_greedy = false;
};

// Slopes that differ by at most this count as democratic.
inline constexpr double kDemocraticSlopeGap = 0.1;

DemocracyProfile democracy_profile(const Basis& basis, std::size_t m_max, const SearchOptions& opts);

std::string profile_to_csv(const DemocracyProfile& profile);
std::string profile_to_json(const DemocracyProfile& profile);

} // namespace qgreedy
