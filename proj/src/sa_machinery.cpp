#include "qgreedy/sa_machinery.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "qgreedy/error.hpp"
#include "qgreedy/parallel.hpp"
#include "qgreedy/rng.hpp"
#include "qgreedy/summation.hpp"

namespace qgreedy {

namespace {

void require_sub_banach(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidInput("exponent must lie in (0, 1), got " + format_double(p));
}

double dot(std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += u[j] * v[j];
    return s;
}

} // namespace

double strongly_absolute_function(double p, double eps) {
    require_sub_banach(p);
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("eps must be positive, got " + format_double(eps));
    return std::pow(eps, -p / (1.0 - p));
}

StronglyAbsoluteCheck strongly_absolute_check(std::span<const double> f, double p, double eps) {
    double A = strongly_absolute_function(p, eps);
    StronglyAbsoluteCheck out;
    out.lhs = lp_gauge(f, 1.0);
    double sup = lp_gauge(f, kInf);
    out.rhs = std::max(A * sup, eps * lp_gauge(f, p));
    // The chain ||f||_1 <= ||f||_inf^{1-p} ||f||_p^p <= rhs is exact in real
    // arithmetic; allow rounding.
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-12) + 1e-300;
    return out;
}

double PairFamily::a() const {
    double a = 0.0;
    for (const auto& v : x) a = std::max(a, lp_gauge(v, p));
    return a;
}

double PairFamily::b() const {
    auto space = AmbientSpace::lp(p, dim());
    double b = 0.0;
    for (const auto& v : xstar) b = std::max(b, space.dual_gauge(v));
    return b;
}

void PairFamily::validate() const {
    if (x.size() != xstar.size()) throw PreconditionError("family needs as many functionals as vectors");
    for (std::size_t n = 0; n < x.size(); ++n) {
        if (x[n].size() != dim() || xstar[n].size() != dim())
            throw PreconditionError("family rows must all have length " + std::to_string(dim()));
        double v = dot(x[n], xstar[n]);
        if (std::fabs(v - 1.0) > 1e-9)
            throw PreconditionError("x_" + std::to_string(n + 1) + "*(x_" + std::to_string(n + 1) + ") = " +
                                    format_double(v) + ", expected 1");
    }
}

PairFamily random_normalized_family(std::size_t dim, std::size_t size, double p, std::uint64_t seed,
                                    std::uint64_t index) {
    PairFamily fam;
    fam.p = p;
    CounterRng rng(seed, stream_id(0xfa, index));
    std::normal_distribution<double> gauss;
    for (std::size_t n = 0; n < size; ++n) {
        Vector x(dim), z(dim);
        double zx = 0.0;
        do {
            for (auto& v : x) v = gauss(rng);
            for (auto& v : z) v = gauss(rng);
            zx = dot(z, x);
        } while (std::fabs(zx) < 0.1 * std::sqrt(dot(x, x) * dot(z, z)));
        for (auto& v : z) v /= zx;
        fam.x.push_back(std::move(x));
        fam.xstar.push_back(std::move(z));
    }
    return fam;
}

IndexSet omega_set(const PairFamily& family, double delta) {
    if (!(delta > 0.0)) throw InvalidInput("delta must be positive, got " + format_double(delta));
    IndexSet out;
    for (std::size_t j = 0; j < family.dim(); ++j)
        for (std::size_t n = 0; n < family.size(); ++n)
            if (std::fabs(family.xstar[n][j] * family.x[n][j]) >= delta) {
                out.push_back(j);
                break;
            }
    return out;
}

WoideaParameters woidea_parameters(double C, double a, double b, double c, double Ku, double p) {
    if (!(C > 1.0) || !std::isfinite(C)) throw InvalidInput("C must exceed 1, got " + format_double(C));
    for (double v : {a, b, c, Ku})
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("a, b, c, K_u must be positive and finite");
    WoideaParameters out;
    double factor = (C - 1.0) / C;
    out.eps = factor / (a * b * c * Ku);
    out.a_eps = strongly_absolute_function(p, out.eps);
    out.delta = factor / out.a_eps;
    return out;
}

WoideaResult woidea_verify(const PairFamily& family, double C) {
    family.validate();
    WoideaResult out;
    out.count = family.size();
    out.params = woidea_parameters(C, family.a(), family.b(), 1.0, 1.0, family.p);
    out.omega = omega_set(family, out.params.delta);
    out.lambda.assign(family.dim(), 0.0);
    for (std::size_t j = 0; j < family.dim(); ++j) {
        CompensatedSum s;
        for (std::size_t n = 0; n < family.size(); ++n) s += family.xstar[n][j] * family.x[n][j];
        out.lambda[j] = s.value();
    }
    CompensatedSum total;
    for (auto j : out.omega) total += std::fabs(out.lambda[j]);
    out.bound = C * total.value();
    out.holds = static_cast<double>(out.count) <= out.bound * (1.0 + 1e-12);
    return out;
}

KhintchineResult khintchine_square_function(const std::vector<Vector>& vectors, double p, AverageMode mode,
                                            std::size_t samples, std::uint64_t seed, unsigned threads) {
    if (vectors.empty()) throw InvalidInput("square function needs at least one vector");
    if (!(p > 0.0) || !std::isfinite(p)) throw InvalidInput("exponent must be positive and finite");
    const std::size_t k = vectors.size();
    const std::size_t dim = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != dim) throw DimensionMismatch("square function vectors must share one length");
        require_finite(v, "vector");
    }

    KhintchineResult out;
    {
        CompensatedSum rhs;
        for (std::size_t j = 0; j < dim; ++j) {
            double sq = 0.0;
            for (const auto& v : vectors) sq += v[j] * v[j];
            rhs += std::pow(sq, p / 2.0);
        }
        out.rhs = rhs.value();
    }

    if (mode == AverageMode::exact) {
        if (k > 20) throw CombinatorialOverflow("exact sign average needs |A| <= 20; use mc mode");
        // eps_1 = +1 fixed: the gauge is even.
        const std::uint64_t total = std::uint64_t{1} << (k - 1);
        auto blocks = map_blocks<double>(total, 4096, threads, [&](std::size_t begin, std::size_t end) {
            Vector sum(dim, 0.0);
            std::uint64_t mask = begin ^ (begin >> 1);
            auto sign_of = [&](std::size_t n) { return n == 0 || !((mask >> (n - 1)) & 1U) ? 1.0 : -1.0; };
            for (std::size_t n = 0; n < k; ++n)
                for (std::size_t j = 0; j < dim; ++j) sum[j] += sign_of(n) * vectors[n][j];
            CompensatedSum acc;
            for (std::uint64_t i = begin;;) {
                acc += lp_gauge_pow(sum, p);
                if (++i == end) break;
                auto flip = static_cast<std::size_t>(std::countr_zero(i));
                mask ^= std::uint64_t{1} << flip;
                double s = sign_of(flip + 1);
                for (std::size_t j = 0; j < dim; ++j) sum[j] += 2.0 * s * vectors[flip + 1][j];
            }
            return acc.value();
        });
        CompensatedSum lhs;
        for (double b : blocks) lhs += b;
        out.patterns = static_cast<std::size_t>(total);
        out.lhs = lhs.value() / static_cast<double>(total);
    } else {
        if (samples == 0) throw InvalidInput("Monte Carlo mode needs samples > 0");
        struct Moments {
            double sum = 0.0, sumsq = 0.0;
        };
        auto blocks = map_blocks<Moments>(samples, 1024, threads, [&](std::size_t begin, std::size_t end) {
            CompensatedSum s, s2;
            Vector sum(dim);
            for (std::size_t t = begin; t < end; ++t) {
                CounterRng rng(seed, stream_id(0x4b, t));
                std::fill(sum.begin(), sum.end(), 0.0);
                for (const auto& v : vectors) {
                    double e = rng.sign();
                    for (std::size_t j = 0; j < dim; ++j) sum[j] += e * v[j];
                }
                double val = lp_gauge_pow(sum, p);
                s += val;
                s2 += val * val;
            }
            return Moments{s.value(), s2.value()};
        });
        CompensatedSum s, s2;
        for (const auto& b : blocks) {
            s += b.sum;
            s2 += b.sumsq;
        }
        double n = static_cast<double>(samples);
        double mean = s.value() / n;
        double var = samples > 1 ? std::max(0.0, (s2.value() - n * mean * mean) / (n - 1.0)) : 0.0;
        out.lhs = mean;
        out.std_error = std::sqrt(var / n);
        out.patterns = samples;
    }
    out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : kInf;
    return out;
}

// ---------------------------------------------------------------------------

double chain_exponent(double p) {
    require_sub_banach(p);
    return (1.0 - p + p * p) / (p * p - p * p * p);
}

double chain_weight(double p, std::size_t m) {
    if (m == 0) throw InvalidInput("m must be >= 1");
    double lm = 1.0 + std::log(static_cast<double>(m));
    return std::pow(static_cast<double>(m), 1.0 / p) / std::pow(lm, chain_exponent(p));
}

double chain_delta_bound(double p, double a, double b, double C1, std::size_t m) {
    require_sub_banach(p);
    double lm = 1.0 + std::log(static_cast<double>(m));
    return 0.5 * std::pow(2.0 * a * b * C1, -p / (1.0 - p)) * std::pow(lm, -1.0 / (1.0 - p));
}

double chain_middle(double p, double a, double b, double C1, double C2, std::size_t m) {
    double delta = chain_delta_bound(p, a, b, C1, m);
    double lm = 1.0 + std::log(static_cast<double>(m));
    return delta / (C2 * b) * std::pow(static_cast<double>(m), 1.0 / p) /
           (std::pow(2.0 * b * C1, 1.0 / p) * std::pow(lm, 1.0 / (p * p)));
}

double chain_constant(double p, double a, double b, double C1, double C2) {
    require_sub_banach(p);
    double base = 2.0 * std::pow(a, p * p) * b * std::pow(C1, 1.0 - p + p * p) * std::pow(C2, p - p * p);
    return std::pow(base, -1.0 / (p * (1.0 - p)));
}

ChainCheck chain_check(const Basis& basis, const IndexSet& set) {
    if (!basis.space().is_lp()) throw InvalidInput("the chain check needs an l_p ambient");
    const double p = basis.space().exponent();
    require_sub_banach(p);
    if (set.empty()) throw InvalidInput("the chain check needs a nonempty set");
    const IndexSet A = normalize_set(set);
    const std::size_t dim = basis.ambient_dim();

    ChainCheck out;
    out.m = A.size();
    for (auto n : A) {
        if (n >= basis.size()) throw InvalidInput("index " + std::to_string(n + 1) + " out of range");
        out.a = std::max(out.a, basis.vector_norm(n));
        out.b = std::max(out.b, basis.dual_norm(n));
    }
    // On l_p, p < 1, ||S_A|| = max_j ||S_A e_j|| exactly.
    std::vector<Vector> columns(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        Vector e(dim, 0.0);
        e[j] = 1.0;
        columns[j] = coordinate_projection(basis, A, e);
        out.norm_TA = std::max(out.norm_TA, lp_gauge_unchecked(columns[j], p));
    }
    double lm = 1.0 + std::log(static_cast<double>(out.m));
    out.C1 = out.norm_TA / std::pow(lm, 1.0 / p);

    PairFamily fam;
    fam.p = p;
    for (auto n : A) {
        fam.x.emplace_back(basis.vector(n).begin(), basis.vector(n).end());
        fam.xstar.emplace_back(basis.dual(n).begin(), basis.dual(n).end());
    }
    WoideaResult wo = woidea_verify(fam, 2.0);
    out.params = wo.params;
    out.omega = wo.omega;
    out.sum_lambda = wo.bound / 2.0;
    out.counting = wo.holds;

    for (auto j : out.omega) out.sum_column += lp_gauge_unchecked(columns[j], p);
    out.column = out.sum_lambda <= out.sum_column * (1.0 + 1e-12) &&
                 out.sum_column <= static_cast<double>(out.omega.size()) * out.norm_TA * (1.0 + 1e-12);

    out.min_square = kInf;
    for (auto j : out.omega) {
        double sq = 0.0;
        for (const auto& x : fam.x) sq += x[j] * x[j];
        out.min_square = std::min(out.min_square, std::sqrt(sq));
    }
    out.square = out.omega.empty() || out.min_square >= out.params.delta / out.b * (1.0 - 1e-12);

    Vector sum(dim, 0.0);
    for (auto n : A) basis.axpy(1.0, n, sum);
    out.set_norm = lp_gauge_unchecked(sum, p);
    double square_fn = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        double sq = 0.0;
        for (const auto& x : fam.x) sq += x[j] * x[j];
        square_fn += std::pow(sq, p / 2.0);
    }
    square_fn = std::pow(square_fn, 1.0 / p);
    out.C2 = out.set_norm > 0.0 ? square_fn / out.set_norm : kInf;
    out.omega_estimate = out.params.delta / (out.C2 * out.b) * std::pow(static_cast<double>(out.omega.size()), 1.0 / p);
    out.final = out.set_norm >= out.omega_estimate * (1.0 - 1e-12);
    return out;
}

} // namespace qgreedy
