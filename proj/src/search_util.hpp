#pragma once

// Internal helpers shared by the sampling estimators.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "qgreedy/bases.hpp"
#include "qgreedy/parallel.hpp"
#include "qgreedy/rng.hpp"

namespace qgreedy::detail {

// A test vector f with its coefficients under the basis and its gauge.
struct Probe {
    Vector f;
    Vector coeffs;
    double norm = 0.0;
};

// True when sup_f ||T f|| / ||f|| equals max_j ||T e_j|| for every linear T.
// Holds on l_p with p <= 1, since ||T f||^p <= sum_j |f_j|^p ||T e_j||^p.
inline bool unit_vectors_are_extreme(const Basis& basis) {
    return basis.space().is_lp() && basis.space().exponent() <= 1.0;
}

inline Probe make_probe(const Basis& basis, Vector f) {
    Probe p;
    p.coeffs.resize(basis.size());
    basis.coefficients_into(f, p.coeffs);
    p.norm = basis.space().gauge_unchecked(f);
    p.f = std::move(f);
    return p;
}

// Ambient unit vectors, plus (unless they are known to be extreme) basis
// vectors and flat / alternating sums.
inline std::vector<Probe> standard_probes(const Basis& basis) {
    const std::size_t dim = basis.ambient_dim();
    const std::size_t d = basis.size();
    std::vector<Probe> probes;
    for (std::size_t j = 0; j < dim; ++j) {
        Vector e(dim, 0.0);
        e[j] = 1.0;
        probes.push_back(make_probe(basis, std::move(e)));
    }
    if (unit_vectors_are_extreme(basis)) return probes;
    for (std::size_t n = 0; n < d; ++n) {
        Vector x(basis.vector(n).begin(), basis.vector(n).end());
        probes.push_back(make_probe(basis, std::move(x)));
    }
    Vector flat(dim, 0.0), alt(dim, 0.0), ones(dim, 1.0);
    for (std::size_t n = 0; n < d; ++n) {
        basis.axpy(1.0, n, flat);
        basis.axpy(n % 2 == 0 ? 1.0 : -1.0, n, alt);
    }
    for (Vector* v : {&flat, &alt, &ones})
        if (basis.space().gauge_unchecked(*v) > 0.0) probes.push_back(make_probe(basis, *v));
    return probes;
}

// Running maximum with deterministic tie-breaking: the first candidate
// (smallest key) reaching the maximum wins.
template <typename Payload>
struct Best {
    double value = -std::numeric_limits<double>::infinity();
    std::size_t key = std::numeric_limits<std::size_t>::max();
    Payload payload{};

    void offer(double v, std::size_t k, const Payload& p) {
        if (v > value || (v == value && k < key)) {
            value = v;
            key = k;
            payload = p;
        }
    }
    void merge(const Best& other) {
        if (other.key != std::numeric_limits<std::size_t>::max()) offer(other.value, other.key, other.payload);
    }
};

template <typename Payload>
struct Worst {
    double value = std::numeric_limits<double>::infinity();
    std::size_t key = std::numeric_limits<std::size_t>::max();
    Payload payload{};

    void offer(double v, std::size_t k, const Payload& p) {
        if (v < value || (v == value && k < key)) {
            value = v;
            key = k;
            payload = p;
        }
    }
    void merge(const Worst& other) {
        if (other.key != std::numeric_limits<std::size_t>::max()) offer(other.value, other.key, other.payload);
    }
};

inline std::uint64_t gray(std::uint64_t i) { return i ^ (i >> 1); }

inline IndexSet mask_to_set(std::uint64_t mask, std::size_t d) {
    IndexSet s;
    for (std::size_t n = 0; n < d; ++n)
        if ((mask >> n) & 1U) s.push_back(n);
    return s;
}

// Random subset of {0..d-1} of exactly k elements (partial Fisher-Yates).
inline IndexSet random_subset(CounterRng& rng, std::size_t d, std::size_t k) {
    std::vector<std::size_t> idx(d);
    for (std::size_t i = 0; i < d; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k && i < d; ++i) std::swap(idx[i], idx[i + rng.below(d - i)]);
    IndexSet s(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(std::min(k, d)));
    std::sort(s.begin(), s.end());
    return s;
}

// Greedy coordinate ascent of `objective` over `x`, trying relative steps of
// decreasing size on each coordinate. Returns the best value found.
inline double coordinate_ascent(Vector& x, const std::function<double(const Vector&)>& objective, int passes = 3) {
    double best = objective(x);
    static constexpr double kSteps[] = {0.5, -0.5, 0.1, -0.1, 0.01, -0.01, 1e-4, -1e-4};
    for (int pass = 0; pass < passes; ++pass) {
        bool improved = false;
        for (std::size_t j = 0; j < x.size(); ++j) {
            double scale = std::max(std::fabs(x[j]), 1.0);
            for (double step : kSteps) {
                double old = x[j];
                x[j] = old + step * scale;
                double v = objective(x);
                if (v > best) {
                    best = v;
                    improved = true;
                } else {
                    x[j] = old;
                }
            }
        }
        if (!improved) break;
    }
    return best;
}

} // namespace qgreedy::detail
