#pragma once

// Finite biorthogonal systems (x_n, x_n*) over an ambient space, the
// multipliers S_gamma / S_A and the unconditionality constant.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgreedy/spaces.hpp"
#include "qgreedy/types.hpp"

namespace qgreedy {

inline constexpr double kBiorthogonalityTol = 1e-9;

class Basis {
public:
    // `vectors` and `duals` are d rows of length dim(space). Without duals
    // the vector matrix must be square and is inverted. Throws BasisError on
    // any invariant failure (the message names the worst offending pair for
    // biorthogonality violations).
    Basis(AmbientSpace space, std::vector<Vector> vectors, std::optional<std::vector<Vector>> duals = std::nullopt,
          std::vector<std::string> labels = {}, std::string name = "custom");

    [[nodiscard]] std::size_t size() const { return d_; }
    [[nodiscard]] std::size_t ambient_dim() const { return space_.dim(); }
    [[nodiscard]] const AmbientSpace& space() const { return space_; }
    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }

    [[nodiscard]] std::span<const double> vector(std::size_t n) const {
        return {vectors_.data() + n * space_.dim(), space_.dim()};
    }
    [[nodiscard]] std::span<const double> dual(std::size_t n) const {
        return {duals_.data() + n * space_.dim(), space_.dim()};
    }
    // x_n*(e_j)
    [[nodiscard]] double dual_entry(std::size_t n, std::size_t j) const { return duals_[n * space_.dim() + j]; }

    [[nodiscard]] double vector_norm(std::size_t n) const { return vector_norms_[n]; }
    [[nodiscard]] double dual_norm(std::size_t n) const { return dual_norms_[n]; }
    [[nodiscard]] double a() const;  // max ||x_n||
    [[nodiscard]] double b() const;  // max ||x_n*||
    [[nodiscard]] double min_vector_norm() const;
    [[nodiscard]] bool dual_norms_exact() const { return dual_norms_exact_; }
    [[nodiscard]] double biorthogonality_error() const { return biorth_error_; }

    // True when x_n = e_n for every n and d equals the ambient dimension.
    [[nodiscard]] bool is_unit_vector_system() const { return unit_; }

    // (x_n*(f))_n, no validation.
    void coefficients_into(std::span<const double> f, std::span<double> out) const;
    // sum_n c_n x_n, no validation.
    void synthesize_into(std::span<const double> coeffs, std::span<double> out) const;
    // out += c * x_n
    void axpy(double c, std::size_t n, std::span<double> out) const;

    [[nodiscard]] std::vector<Vector> vector_rows() const;
    [[nodiscard]] std::vector<Vector> dual_rows() const;

private:
    AmbientSpace space_;
    std::size_t d_ = 0;
    Vector vectors_;  // row-major d x N
    Vector duals_;
    std::vector<std::string> labels_;
    std::string name_;
    Vector vector_norms_;
    Vector dual_norms_;
    bool dual_norms_exact_ = true;
    bool unit_ = false;
    double biorth_error_ = 0.0;
};

// F(f) = (x_n*(f))_{n<=d}.
Vector coefficient_transform(const Basis& basis, std::span<const double> f);
Vector synthesize(const Basis& basis, std::span<const double> coeffs);

struct SignOperatorResult {
    Vector value;
    bool gamma_outside_unit_ball = false;  // some |gamma_n| > 1
};

// S_gamma f = sum_n gamma_n x_n*(f) x_n.
SignOperatorResult sign_operator(const Basis& basis, std::span<const double> gamma, std::span<const double> f);

// S_A f; throws InvalidInput for indices >= d.
Vector coordinate_projection(const Basis& basis, const IndexSet& set, std::span<const double> f);

// Lower bound on K_u = sup_{|gamma| <= 1} ||S_gamma|| with a stored (gamma, f)
// witness, and a certified upper bound when the ambient gauge is r-convex.
// Exact mode (d <= 20) enumerates gamma over {0,1}^d and {-1,1}^d and then
// refines continuously; it is exhaustive for the suppression family when the
// ambient is l_p with p <= 1.
BoundEstimate unconditional_constant(const Basis& basis, const SearchOptions& opts);

// Certified upper bound for K_u; +inf when no convexity exponent is known.
double unconditional_upper_bound(const Basis& basis);

// ---------------------------------------------------------------------------
// Zoo

struct ZooParams {
    std::size_t dim = 8;
    double p = 0.5;
    std::vector<std::size_t> blocks;  // block_l2
    std::uint64_t seed = 0;           // perturbed_unit
    double perturbation = 0.5;        // perturbed_unit: max off-diagonal row mass
    std::string path;                 // custom_file
};

std::vector<std::string> zoo_names();
Basis zoo(const std::string& name, const ZooParams& params);

} // namespace qgreedy
