#pragma once

// Weights, primitive weights and the weighted Lorentz gauges
//
//   ||f||_{q,w} = ( sum_n (a_n*)^q s_n^{q-1} w_n )^{1/q},   0 < q < inf,
//   ||f||_{inf,w} = sup_n s_n a_n*,
//
// where (a_n*) is the non-increasing rearrangement of |f| and s is the
// primitive weight of w. Weights are finite prefixes; an evaluation uses the
// first dim(f) entries.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "qgreedy/types.hpp"

namespace qgreedy {

class PrimitiveWeight;

class Weight {
public:
    explicit Weight(Vector w);

    static Weight constant(std::size_t n, double value = 1.0);
    // w = Delta(n^alpha), so the primitive weight is exactly n^alpha.
    static Weight power_difference(double alpha, std::size_t n);

    [[nodiscard]] const Vector& values() const { return w_; }
    [[nodiscard]] std::size_t size() const { return w_.size(); }
    double operator[](std::size_t i) const { return w_[i]; }

private:
    Vector w_;
};

class PrimitiveWeight {
public:
    // Requires positive entries; monotonicity is only demanded by
    // difference_weight().
    explicit PrimitiveWeight(Vector s);

    static PrimitiveWeight from_function(std::size_t n, const std::function<double(std::size_t)>& fn);

    [[nodiscard]] const Vector& values() const { return s_; }
    [[nodiscard]] std::size_t size() const { return s_.size(); }
    double operator[](std::size_t i) const { return s_[i]; }
    [[nodiscard]] bool strictly_increasing() const;

private:
    Vector s_;
};

// s_n = sum_{k<=n} w_k for n = 1..m, compensated.
PrimitiveWeight primitive_weight(const Weight& w, std::size_t m);
PrimitiveWeight primitive_weight(const Weight& w);

// w_n = s_n - s_{n-1} with s_0 = 0. Throws InvalidWeight unless s is strictly
// increasing.
Weight difference_weight(const PrimitiveWeight& s);

// Named primitive weights used throughout.
PrimitiveWeight power_primitive(double alpha, std::size_t n);                // n^alpha
PrimitiveWeight log_damped_primitive(double p, double q, std::size_t n);     // n^{1/p} / (1 + log n)^q
PrimitiveWeight harmonic_damped_primitive(std::size_t n);                    // n / sqrt(H_n)

// q = kInf selects the weak (sup) gauge.
double lorentz_gauge(std::span<const double> f, double q, const Weight& w);

// Norm of a linear functional on d_q(w) (restricted to the first dim
// coordinates). Exact for q = 1 and q = inf; otherwise the sup over flat
// test vectors, which is a lower bound.
double lorentz_dual_gauge(std::span<const double> functional, double q, const Weight& w, bool* exact = nullptr);

// Smallest / largest observed ratio ||f||_{p, Delta n^{1/p}} / ||f||_p over
// random vectors, together with the permutation-stability check.
struct LorentzLpBracket {
    double lo = kInf;
    double hi = 0.0;
    double max_permutation_drift = 0.0;
};
LorentzLpBracket lorentz_lp_ratio_bracket(double p, std::size_t dim, std::size_t samples, std::uint64_t seed);

} // namespace qgreedy
