#pragma once

// Strongly absolute function of the l_p unit vector system, the sets
// Omega_delta, the counting inequality built on them, the sign-averaged
// square function comparison, and the numeric chain that combines them.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qgreedy/bases.hpp"
#include "qgreedy/types.hpp"

namespace qgreedy {

// eps^{-p/(1-p)}; requires 0 < p < 1 and eps > 0.
double strongly_absolute_function(double p, double eps);

struct StronglyAbsoluteCheck {
    double lhs = 0.0;  // ||f||_1
    double rhs = 0.0;  // max{A(eps) ||f||_inf, eps ||f||_p}
    bool holds = true;
};
StronglyAbsoluteCheck strongly_absolute_check(std::span<const double> f, double p, double eps);

// Pairs (x_n, x_n*) in l_p x l_p^*, measured against the unit vector basis
// (c = K_u = 1).
struct PairFamily {
    double p = 0.5;
    std::vector<Vector> x;
    std::vector<Vector> xstar;

    [[nodiscard]] std::size_t size() const { return x.size(); }
    [[nodiscard]] std::size_t dim() const { return x.empty() ? 0 : x.front().size(); }
    [[nodiscard]] double a() const;  // max ||x_n||_p
    [[nodiscard]] double b() const;  // max ||x_n*||, dual gauge of l_p
    // Throws PreconditionError unless rows have equal length and
    // x_n*(x_n) = 1 within 1e-9.
    void validate() const;
};

// Random family with x_n*(x_n) = 1: Gaussian vectors, functionals rescaled
// after rejecting nearly orthogonal draws.
PairFamily random_normalized_family(std::size_t dim, std::size_t size, double p, std::uint64_t seed,
                                    std::uint64_t index);

// {j : |x_n*(e_j) e_j*(x_n)| >= delta for some n}
IndexSet omega_set(const PairFamily& family, double delta);

struct WoideaParameters {
    double eps = 0.0;
    double a_eps = 0.0;  // A(eps)
    double delta = 0.0;
};
// eps = (C-1)/C / (a b c K_u), delta = (C-1)/C / A(eps). Requires C > 1 and
// positive finite a, b, c, K_u.
WoideaParameters woidea_parameters(double C, double a, double b, double c, double Ku, double p);

struct WoideaResult {
    std::size_t count = 0;  // |A|
    double bound = 0.0;     // C sum_{j in Omega} |lambda_j|
    bool holds = false;
    WoideaParameters params;
    IndexSet omega;
    Vector lambda;  // lambda_j = sum_n x_n*(e_j) e_j*(x_n)
};
WoideaResult woidea_verify(const PairFamily& family, double C);

enum class AverageMode { exact, mc };

struct KhintchineResult {
    double lhs = 0.0;  // Ave_eps ||sum eps_n x_n||_p^p
    double rhs = 0.0;  // sum_j (sum_n x_n[j]^2)^{p/2}
    double ratio = 0.0;
    double std_error = 0.0;  // 0 in exact mode
    std::size_t patterns = 0;
};
// Exact mode enumerates 2^{|A|-1} patterns (the gauge is even), |A| <= 20.
KhintchineResult khintchine_square_function(const std::vector<Vector>& vectors, double p, AverageMode mode,
                                            std::size_t samples = 0, std::uint64_t seed = 0, unsigned threads = 0);

// ---------------------------------------------------------------------------
// Numeric chain of the main lower estimate.

// (1 - p + p^2) / (p^2 - p^3)
double chain_exponent(double p);
// m^{1/p} / (1 + log m)^{chain_exponent(p)}
double chain_weight(double p, std::size_t m);
// 1/2 (2 a b C1)^{-p/(1-p)} (1 + log m)^{-1/(1-p)}
double chain_delta_bound(double p, double a, double b, double C1, std::size_t m);
// (delta / (C2 b)) m^{1/p} / ((2 b C1)^{1/p} (1 + log m)^{1/p^2}) with
// delta = chain_delta_bound(...)
double chain_middle(double p, double a, double b, double C1, double C2, std::size_t m);
// (2 a^{p^2} b C1^{1-p+p^2} C2^{p-p^2})^{-1/(p(1-p))}
double chain_constant(double p, double a, double b, double C1, double C2);

// Step-by-step check of the chain on a concrete basis of l_p (p < 1) and a
// set A, with the extension T_A taken to be S_A itself.
struct ChainCheck {
    std::size_t m = 0;
    double a = 0.0, b = 0.0;  // a = max ||x_n||, b = max ||x_n*|| over A
    double norm_TA = 0.0;     // ||S_A||
    double C1 = 0.0;          // ||S_A|| / (1 + log m)^{1/p}
    double C2 = 0.0;          // square function / ||sum_A x_n||
    WoideaParameters params;  // with C = 2
    IndexSet omega;
    double sum_lambda = 0.0;     // sum_{Omega} |lambda_j|
    double sum_column = 0.0;     // sum_{Omega} ||T_A e_j||
    double min_square = 0.0;     // min_{j in Omega} (sum_n x_n[j]^2)^{1/2}
    double set_norm = 0.0;       // ||sum_A x_n||_p
    double omega_estimate = 0.0; // (delta / (C2 b)) |Omega|^{1/p}
    bool counting = false;       // m <= 2 sum_lambda
    bool column = false;         // sum_lambda <= sum_column <= |Omega| ||T_A||
    bool square = false;         // min_square >= delta / b
    bool final = false;          // set_norm >= omega_estimate
};
ChainCheck chain_check(const Basis& basis, const IndexSet& set);

} // namespace qgreedy
