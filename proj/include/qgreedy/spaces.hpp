#pragma once

// Quasi-norm gauges on finite coefficient arrays and the ambient space
// descriptor that fixes how a Vector is measured.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qgreedy/lorentz.hpp"
#include "qgreedy/types.hpp"

namespace qgreedy {

// (sum |f_j|^p)^{1/p} for p < inf, max |f_j| for p = inf. Throws
// InvalidInput for p <= 0 (or NaN) and for non-finite entries.
double lp_gauge(std::span<const double> f, double p);

// Same, without input validation; for inner loops over data that was
// already checked.
double lp_gauge_unchecked(std::span<const double> f, double p);

// sum |f_j|^p, the p-th power of the gauge (p < inf).
double lp_gauge_pow(std::span<const double> f, double p);

// Permutation of |f| sorted non-increasingly.
Vector nonincreasing_rearrangement(std::span<const double> f);

// ||f+g||_p^p - ||f||_p^p - ||g||_p^p; non-positive up to rounding when
// 0 < p <= 1.
double p_triangle_defect(std::span<const double> f, std::span<const double> g, double p);

void require_finite(std::span<const double> f, const char* what);

struct LpSpace {
    double p;
    std::size_t dim;
};

struct BlockLpL2Space {
    double p;
    std::vector<std::size_t> blocks;
};

struct LorentzSpace {
    double q;
    Weight weight;
};

class AmbientSpace {
public:
    using Variant = std::variant<LpSpace, BlockLpL2Space, LorentzSpace>;

    static AmbientSpace lp(double p, std::size_t dim);
    static AmbientSpace block_lp_l2(double p, std::vector<std::size_t> blocks);
    static AmbientSpace lorentz(double q, Weight weight);

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] const Variant& variant() const { return v_; }
    [[nodiscard]] std::string kind() const;
    [[nodiscard]] std::string describe() const;

    [[nodiscard]] bool is_lp() const { return std::holds_alternative<LpSpace>(v_); }
    [[nodiscard]] bool is_block() const { return std::holds_alternative<BlockLpL2Space>(v_); }
    [[nodiscard]] bool is_lorentz() const { return std::holds_alternative<LorentzSpace>(v_); }

    // The p parameter of Lp / BlockLpL2 ambients (q for Lorentz).
    [[nodiscard]] double exponent() const;

    // Validated evaluation: throws DimensionMismatch / InvalidInput.
    [[nodiscard]] double gauge(std::span<const double> f) const;
    // Hot-path evaluation; caller guarantees size and finiteness.
    [[nodiscard]] double gauge_unchecked(std::span<const double> f) const;

    // Norm of the functional x*(f) = sum_j functional_j f_j. Sets *exact to
    // false when only a lower estimate is available.
    [[nodiscard]] double dual_gauge(std::span<const double> functional, bool* exact = nullptr) const;

    // r such that ||f+g||^r <= ||f||^r + ||g||^r holds for this gauge
    // (r = min(p, 1) for Lp and BlockLpL2); empty when unknown.
    [[nodiscard]] std::optional<double> convexity_exponent() const;

private:
    AmbientSpace(Variant v, std::size_t dim) : v_(std::move(v)), dim_(dim) {}

    Variant v_;
    std::size_t dim_;
};

} // namespace qgreedy
