#pragma once

// Embedding constants between a basis and weighted Lorentz sequence spaces,
// with the democracy comparison tables that control them.

#include <cstddef>
#include <string>
#include <vector>

#include "qgreedy/bases.hpp"
#include "qgreedy/lorentz.hpp"
#include "qgreedy/types.hpp"

namespace qgreedy {

enum class EmbeddingDirection { space_into_weak_lorentz, lorentz_into_space };

struct EmbeddingRow {
    std::size_t m = 0;
    double s_m = 0.0;
    double phi = 0.0;    // phi_l (into weak Lorentz) or phi_u (from Lorentz)
    double ratio = 0.0;  // s_m / phi_l, or phi_u / s_m
};

struct EmbeddingReport {
    EmbeddingDirection direction = EmbeddingDirection::space_into_weak_lorentz;
    double q = kInf;
    BoundEstimate constant;
    Vector primitive;  // s_1..s_d
    std::vector<EmbeddingRow> table;
};

// sup_f ||F(f)||_{inf,w} / ||f||. The weight must have at least d entries.
EmbeddingReport embed_space_into_weak_lorentz(const Basis& basis, const Weight& w, const SearchOptions& opts);

// sup_g ||sum_n g_n x_n|| / ||g||_{q,w}.
EmbeddingReport embed_lorentz_into_space(const Basis& basis, double q, const Weight& w, const SearchOptions& opts);

// Columns m, s_m, phi_l or phi_u, ratio.
std::string embedding_table_csv(const EmbeddingReport& report);

} // namespace qgreedy
