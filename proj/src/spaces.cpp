#include "qgreedy/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "qgreedy/error.hpp"

namespace qgreedy {

namespace {

void require_exponent(double p, const char* name) {
    if (!(p > 0.0)) throw InvalidInput(std::string(name) + " must lie in (0, inf], got " + format_double(p));
}

// |x|^p with the common exponents special-cased; inner loops call this
// millions of times.
inline double abs_pow(double x, double p) {
    double a = std::fabs(x);
    if (p == 1.0) return a;
    if (p == 0.5) return std::sqrt(a);
    if (p == 2.0) return a * a;
    return std::pow(a, p);
}

inline double root(double s, double p) {
    if (p == 1.0) return s;
    if (p == 0.5) return s * s;
    if (p == 2.0) return std::sqrt(s);
    return std::pow(s, 1.0 / p);
}

} // namespace

void require_finite(std::span<const double> f, const char* what) {
    for (std::size_t j = 0; j < f.size(); ++j)
        if (!std::isfinite(f[j]))
            throw InvalidInput(std::string(what) + ": non-finite entry at coordinate " + std::to_string(j + 1));
}

double lp_gauge_unchecked(std::span<const double> f, double p) {
    double mx = 0.0;
    for (double x : f) mx = std::max(mx, std::fabs(x));
    if (std::isinf(p) || mx == 0.0) return mx;
    // Scaling by the max keeps the sum in range and makes the gauge exactly
    // homogeneous for power-of-two scalings.
    double s = 0.0;
    for (double x : f) s += abs_pow(x / mx, p);
    return mx * root(s, p);
}

double lp_gauge(std::span<const double> f, double p) {
    require_exponent(p, "p");
    require_finite(f, "lp_gauge");
    return lp_gauge_unchecked(f, p);
}

double lp_gauge_pow(std::span<const double> f, double p) {
    double s = 0.0;
    for (double x : f) s += abs_pow(x, p);
    return s;
}

Vector nonincreasing_rearrangement(std::span<const double> f) {
    Vector out(f.size());
    std::transform(f.begin(), f.end(), out.begin(), [](double x) { return std::fabs(x); });
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

double p_triangle_defect(std::span<const double> f, std::span<const double> g, double p) {
    if (!(p > 0.0 && p <= 1.0)) throw InvalidInput("p_triangle_defect requires 0 < p <= 1");
    if (f.size() != g.size()) throw DimensionMismatch("p_triangle_defect: operands differ in length");
    Vector sum(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) sum[j] = f[j] + g[j];
    return lp_gauge_pow(sum, p) - lp_gauge_pow(f, p) - lp_gauge_pow(g, p);
}

// ---------------------------------------------------------------------------

AmbientSpace AmbientSpace::lp(double p, std::size_t dim) {
    require_exponent(p, "p");
    if (dim == 0) throw InvalidInput("ambient dimension must be positive");
    return AmbientSpace(LpSpace{p, dim}, dim);
}

AmbientSpace AmbientSpace::block_lp_l2(double p, std::vector<std::size_t> blocks) {
    require_exponent(p, "p");
    if (blocks.empty()) throw InvalidInput("block list must be nonempty");
    for (auto b : blocks)
        if (b == 0) throw InvalidInput("block sizes must be >= 1");
    std::size_t dim = std::accumulate(blocks.begin(), blocks.end(), std::size_t{0});
    return AmbientSpace(BlockLpL2Space{p, std::move(blocks)}, dim);
}

AmbientSpace AmbientSpace::lorentz(double q, Weight weight) {
    require_exponent(q, "q");
    std::size_t dim = weight.size();
    return AmbientSpace(LorentzSpace{q, std::move(weight)}, dim);
}

std::string AmbientSpace::kind() const {
    if (is_lp()) return "lp";
    if (is_block()) return "block_lp_l2";
    return "lorentz";
}

double AmbientSpace::exponent() const {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, LorentzSpace>)
                return s.q;
            else
                return s.p;
        },
        v_);
}

std::string AmbientSpace::describe() const {
    std::ostringstream os;
    if (const auto* s = std::get_if<LpSpace>(&v_)) {
        os << "lp(p=" << format_double(s->p) << ", dim=" << s->dim << ")";
    } else if (const auto* b = std::get_if<BlockLpL2Space>(&v_)) {
        os << "block_lp_l2(p=" << format_double(b->p) << ", blocks=" << b->blocks.size() << ", dim=" << dim_ << ")";
    } else {
        const auto& l = std::get<LorentzSpace>(v_);
        os << "lorentz(q=" << format_double(l.q) << ", dim=" << dim_ << ")";
    }
    return os.str();
}

double AmbientSpace::gauge_unchecked(std::span<const double> f) const {
    if (const auto* s = std::get_if<LpSpace>(&v_)) return lp_gauge_unchecked(f, s->p);
    if (const auto* b = std::get_if<BlockLpL2Space>(&v_)) {
        double block_norms[64];
        Vector heap;
        double* norms = block_norms;
        if (b->blocks.size() > 64) {
            heap.resize(b->blocks.size());
            norms = heap.data();
        }
        std::size_t off = 0;
        for (std::size_t k = 0; k < b->blocks.size(); ++k) {
            norms[k] = lp_gauge_unchecked(f.subspan(off, b->blocks[k]), 2.0);
            off += b->blocks[k];
        }
        return lp_gauge_unchecked(std::span<const double>(norms, b->blocks.size()), b->p);
    }
    const auto& l = std::get<LorentzSpace>(v_);
    return lorentz_gauge(f, l.q, l.weight);
}

double AmbientSpace::gauge(std::span<const double> f) const {
    if (f.size() != dim_)
        throw DimensionMismatch("vector of length " + std::to_string(f.size()) + " evaluated in " + describe());
    require_finite(f, "gauge");
    return gauge_unchecked(f);
}

namespace {

double conjugate(double p) {
    if (p <= 1.0) return kInf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

} // namespace

double AmbientSpace::dual_gauge(std::span<const double> functional, bool* exact) const {
    if (functional.size() != dim_) throw DimensionMismatch("functional length does not match " + describe());
    require_finite(functional, "dual_gauge");
    if (exact) *exact = true;
    // For p <= 1 the unit ball's closed convex hull is the l_1 ball, so the
    // dual is l_inf; for p > 1 it is the conjugate exponent.
    if (const auto* s = std::get_if<LpSpace>(&v_)) return lp_gauge_unchecked(functional, conjugate(s->p));
    if (const auto* b = std::get_if<BlockLpL2Space>(&v_)) {
        Vector norms(b->blocks.size());
        std::size_t off = 0;
        for (std::size_t k = 0; k < b->blocks.size(); ++k) {
            norms[k] = lp_gauge_unchecked(functional.subspan(off, b->blocks[k]), 2.0);
            off += b->blocks[k];
        }
        return lp_gauge_unchecked(norms, conjugate(b->p));
    }
    const auto& l = std::get<LorentzSpace>(v_);
    return lorentz_dual_gauge(functional, l.q, l.weight, exact);
}

std::optional<double> AmbientSpace::convexity_exponent() const {
    if (const auto* s = std::get_if<LpSpace>(&v_)) return std::min(s->p, 1.0);
    if (const auto* b = std::get_if<BlockLpL2Space>(&v_)) return std::min(b->p, 1.0);
    return std::nullopt;
}

} // namespace qgreedy
