#include "qgreedy/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qgreedy/error.hpp"
#include "qgreedy/rng.hpp"
#include "qgreedy/spaces.hpp"
#include "qgreedy/summation.hpp"

namespace qgreedy {

Weight::Weight(Vector w) : w_(std::move(w)) {
    if (w_.empty()) throw InvalidWeight("weight must have at least one entry");
    for (std::size_t n = 0; n < w_.size(); ++n)
        if (!(w_[n] > 0.0) || !std::isfinite(w_[n]))
            throw InvalidWeight("weight entry " + std::to_string(n + 1) + " is not a positive finite number");
}

Weight Weight::constant(std::size_t n, double value) { return Weight(Vector(n, value)); }

Weight Weight::power_difference(double alpha, std::size_t n) {
    if (!(alpha > 0.0)) throw InvalidWeight("power weight needs alpha > 0");
    return difference_weight(power_primitive(alpha, n));
}

PrimitiveWeight::PrimitiveWeight(Vector s) : s_(std::move(s)) {
    if (s_.empty()) throw InvalidWeight("primitive weight must have at least one entry");
    for (std::size_t n = 0; n < s_.size(); ++n)
        if (!(s_[n] > 0.0) || !std::isfinite(s_[n]))
            throw InvalidWeight("primitive weight entry " + std::to_string(n + 1) + " is not positive");
}

PrimitiveWeight PrimitiveWeight::from_function(std::size_t n, const std::function<double(std::size_t)>& fn) {
    Vector s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = fn(i + 1);
    return PrimitiveWeight(std::move(s));
}

bool PrimitiveWeight::strictly_increasing() const {
    for (std::size_t n = 1; n < s_.size(); ++n)
        if (!(s_[n] > s_[n - 1])) return false;
    return true;
}

PrimitiveWeight primitive_weight(const Weight& w, std::size_t m) {
    if (m > w.size())
        throw InvalidWeight("primitive weight of length " + std::to_string(m) + " requested from a weight of length " +
                            std::to_string(w.size()));
    Vector s(m);
    CompensatedSum acc;
    for (std::size_t n = 0; n < m; ++n) {
        acc += w[n];
        s[n] = acc.value();
    }
    return PrimitiveWeight(std::move(s));
}

PrimitiveWeight primitive_weight(const Weight& w) { return primitive_weight(w, w.size()); }

Weight difference_weight(const PrimitiveWeight& s) {
    Vector w(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) {
        w[n] = n == 0 ? s[0] : s[n] - s[n - 1];
        if (!(w[n] > 0.0))
            throw InvalidWeight("primitive weight is not strictly increasing at n = " + std::to_string(n + 1));
    }
    return Weight(std::move(w));
}

PrimitiveWeight power_primitive(double alpha, std::size_t n) {
    return PrimitiveWeight::from_function(n, [alpha](std::size_t k) { return std::pow(static_cast<double>(k), alpha); });
}

PrimitiveWeight log_damped_primitive(double p, double q, std::size_t n) {
    return PrimitiveWeight::from_function(n, [p, q](std::size_t k) {
        double m = static_cast<double>(k);
        return std::pow(m, 1.0 / p) / std::pow(1.0 + std::log(m), q);
    });
}

PrimitiveWeight harmonic_damped_primitive(std::size_t n) {
    Vector s(n);
    CompensatedSum h;
    for (std::size_t k = 1; k <= n; ++k) {
        h += 1.0 / static_cast<double>(k);
        s[k - 1] = static_cast<double>(k) / std::sqrt(h.value());
    }
    return PrimitiveWeight(std::move(s));
}

namespace {

PrimitiveWeight prefix_primitive(const Weight& w, std::size_t dim) {
    if (dim > w.size())
        throw DimensionMismatch("Lorentz weight has " + std::to_string(w.size()) + " entries, vector has " +
                                std::to_string(dim));
    return primitive_weight(w, dim);
}

} // namespace

double lorentz_gauge(std::span<const double> f, double q, const Weight& w) {
    if (!(q > 0.0)) throw InvalidInput("Lorentz exponent q must lie in (0, inf]");
    if (f.empty()) return 0.0;
    require_finite(f, "lorentz_gauge");
    Vector a = nonincreasing_rearrangement(f);
    PrimitiveWeight s = prefix_primitive(w, a.size());
    if (std::isinf(q)) {
        double best = 0.0;
        for (std::size_t n = 0; n < a.size(); ++n) best = std::max(best, s[n] * a[n]);
        return best;
    }
    // Scale by a_1* so the powers stay in range.
    double top = a[0];
    if (top == 0.0) return 0.0;
    CompensatedSum acc;
    for (std::size_t n = 0; n < a.size(); ++n) {
        if (a[n] == 0.0) break;
        double term = q == 1.0 ? (a[n] / top) * w[n]
                               : std::exp(q * std::log(a[n] / top) + (q - 1.0) * std::log(s[n])) * w[n];
        acc += term;
    }
    return top * std::pow(acc.value(), 1.0 / q);
}

double lorentz_dual_gauge(std::span<const double> functional, double q, const Weight& w, bool* exact) {
    Vector x = nonincreasing_rearrangement(functional);
    PrimitiveWeight s = prefix_primitive(w, x.size());
    if (exact) *exact = std::isinf(q) || q == 1.0;
    if (std::isinf(q)) {
        // Unit ball: a_n* <= 1/s_n, so the sup pairs x_n* with 1/s_n.
        CompensatedSum acc;
        for (std::size_t n = 0; n < x.size(); ++n) acc += x[n] / s[n];
        return acc.value();
    }
    // Every non-increasing a is a positive combination of flat indicators
    // 1_{[1,k]}; for q = 1 the gauge is linear on that cone, so the sup is
    // attained at one of them.
    double best = 0.0;
    CompensatedSum prefix;
    Vector flat;
    for (std::size_t k = 1; k <= x.size(); ++k) {
        prefix += x[k - 1];
        double flat_gauge;
        if (q == 1.0) {
            flat_gauge = s[k - 1];
        } else {
            flat.assign(k, 1.0);
            flat_gauge = lorentz_gauge(flat, q, w);
        }
        best = std::max(best, prefix.value() / flat_gauge);
    }
    return best;
}

LorentzLpBracket lorentz_lp_ratio_bracket(double p, std::size_t dim, std::size_t samples, std::uint64_t seed) {
    if (!(p > 0.0) || std::isinf(p)) throw InvalidInput("bracket needs finite p > 0");
    Weight w = Weight::power_difference(1.0 / p, dim);
    LorentzLpBracket out;
    Vector f(dim), g(dim);
    std::vector<std::size_t> perm(dim);
    for (std::size_t k = 0; k < samples; ++k) {
        CounterRng rng(seed, stream_id(0x10c, k));
        // Mix heavy-tailed, flat and sparse profiles.
        std::size_t support = 1 + rng.below(dim);
        std::fill(f.begin(), f.end(), 0.0);
        for (std::size_t j = 0; j < support; ++j) {
            double u = rng.uniform();
            double mag = (k % 3 == 0) ? 1.0 : (k % 3 == 1 ? std::pow(1.0 - u, -1.0) : u);
            f[rng.below(dim)] = rng.sign() * mag;
        }
        if (lp_gauge_unchecked(f, p) == 0.0) continue;
        double r = lorentz_gauge(f, p, w) / lp_gauge_unchecked(f, p);
        out.lo = std::min(out.lo, r);
        out.hi = std::max(out.hi, r);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = dim; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        for (std::size_t j = 0; j < dim; ++j) g[j] = f[perm[j]];
        double rp = lorentz_gauge(g, p, w) / lp_gauge_unchecked(g, p);
        out.max_permutation_drift = std::max(out.max_permutation_drift, std::fabs(rp - r));
    }
    return out;
}

} // namespace qgreedy
