#include <algorithm>
#include <bit>
#include <cmath>

#include "qgreedy/bases.hpp"
#include "qgreedy/error.hpp"
#include "search_util.hpp"

namespace qgreedy {

namespace {

using detail::Best;
using detail::Probe;

constexpr std::size_t kExactMaxDim = 20;
constexpr std::size_t kGrayBlock = 4096;

struct GammaHit {
    Vector gamma;
    std::size_t probe = 0;
};

// max_p ||S_gamma f_p|| / ||f_p||, reporting the maximizing probe.
double eval_gamma(const Basis& basis, const std::vector<Probe>& probes, std::span<const double> gamma, Vector& scratch,
                  std::size_t* best_probe) {
    double best = -1.0;
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const Probe& pr = probes[k];
        if (pr.norm == 0.0) continue;
        std::fill(scratch.begin(), scratch.end(), 0.0);
        for (std::size_t n = 0; n < basis.size(); ++n) {
            double c = gamma[n] * pr.coeffs[n];
            if (c != 0.0) basis.axpy(c, n, scratch);
        }
        double r = basis.space().gauge_unchecked(scratch) / pr.norm;
        if (r > best) {
            best = r;
            *best_probe = k;
        }
    }
    return best;
}

std::vector<Vector> canonical_gammas(std::size_t d) {
    std::vector<Vector> out;
    out.emplace_back(d, 1.0);
    Vector alt(d), even(d, 0.0), odd(d, 0.0);
    for (std::size_t n = 0; n < d; ++n) {
        alt[n] = n % 2 == 0 ? 1.0 : -1.0;
        // 1-based even indices are 0-based odd positions.
        (n % 2 == 1 ? even : odd)[n] = 1.0;
    }
    out.push_back(alt);
    out.push_back(even);
    out.push_back(odd);
    for (std::size_t n = 0; n < d; ++n) {
        Vector e(d, 0.0);
        e[n] = 1.0;
        out.push_back(std::move(e));
    }
    return out;
}

// Gray-code sweep over {0,1}^d (signed = false) or {-1,1}^d (signed = true).
Best<GammaHit> sweep(const Basis& basis, const std::vector<Probe>& probes, bool signed_family, unsigned threads) {
    const std::size_t d = basis.size();
    const std::size_t dim = basis.ambient_dim();
    const std::uint64_t total = std::uint64_t{1} << d;
    auto gamma_of = [&](std::uint64_t mask, Vector& g) {
        for (std::size_t n = 0; n < d; ++n) {
            bool bit = (mask >> n) & 1U;
            g[n] = signed_family ? (bit ? -1.0 : 1.0) : (bit ? 1.0 : 0.0);
        }
    };
    auto blocks = map_blocks<Best<std::uint64_t>>(total, kGrayBlock, threads, [&](std::size_t begin, std::size_t end) {
        Best<std::uint64_t> best;
        Vector g(d);
        std::vector<Vector> images(probes.size(), Vector(dim, 0.0));
        std::uint64_t mask = detail::gray(begin);
        gamma_of(mask, g);
        for (std::size_t k = 0; k < probes.size(); ++k)
            for (std::size_t n = 0; n < d; ++n) {
                double c = g[n] * probes[k].coeffs[n];
                if (c != 0.0) basis.axpy(c, n, images[k]);
            }
        for (std::uint64_t i = begin; i < end; ++i) {
            for (std::size_t k = 0; k < probes.size(); ++k) {
                if (probes[k].norm == 0.0) continue;
                double r = basis.space().gauge_unchecked(images[k]) / probes[k].norm;
                best.offer(r, static_cast<std::size_t>(i) * probes.size() + k, mask);
            }
            if (i + 1 == end) break;
            std::size_t flip = static_cast<std::size_t>(std::countr_zero(i + 1));
            mask ^= std::uint64_t{1} << flip;
            bool now_set = (mask >> flip) & 1U;
            double delta = signed_family ? (now_set ? -2.0 : 2.0) : (now_set ? 1.0 : -1.0);
            for (std::size_t k = 0; k < probes.size(); ++k)
                if (probes[k].coeffs[flip] != 0.0) basis.axpy(delta * probes[k].coeffs[flip], flip, images[k]);
        }
        return best;
    });
    Best<std::uint64_t> merged;
    for (const auto& b : blocks) merged.merge(b);
    Best<GammaHit> out;
    if (merged.key == std::numeric_limits<std::size_t>::max()) return out;
    GammaHit hit;
    hit.gamma.resize(d);
    gamma_of(merged.payload, hit.gamma);
    hit.probe = merged.key % probes.size();
    // Re-evaluate from scratch so the stored value carries no drift from the
    // incremental updates.
    Vector scratch(dim);
    std::size_t probe = 0;
    double v = eval_gamma(basis, probes, hit.gamma, scratch, &probe);
    hit.probe = probe;
    out.offer(v, 0, hit);
    return out;
}

} // namespace

double unconditional_upper_bound(const Basis& basis) {
    const std::size_t d = basis.size();
    if (detail::unit_vectors_are_extreme(basis)) {
        // ||S_gamma|| = max_j ||S_gamma e_j|| and, by p-convexity,
        // ||S_gamma e_j||^p <= sum_n |x_n*(e_j)|^p ||x_n||^p.
        double p = basis.space().exponent();
        double best = 0.0;
        for (std::size_t j = 0; j < basis.ambient_dim(); ++j) {
            double s = 0.0;
            for (std::size_t n = 0; n < d; ++n) s += std::pow(std::fabs(basis.dual_entry(n, j)) * basis.vector_norm(n), p);
            best = std::max(best, std::pow(s, 1.0 / p));
        }
        return best;
    }
    auto r = basis.space().convexity_exponent();
    if (!r || !basis.dual_norms_exact()) return kInf;
    double s = 0.0;
    for (std::size_t n = 0; n < d; ++n) s += std::pow(basis.vector_norm(n) * basis.dual_norm(n), *r);
    return std::pow(s, 1.0 / *r);
}

BoundEstimate unconditional_constant(const Basis& basis, const SearchOptions& opts) {
    const std::size_t d = basis.size();
    const std::size_t dim = basis.ambient_dim();
    if (opts.mode == SearchMode::exact && d > kExactMaxDim)
        throw CombinatorialOverflow("exact K_u search needs d <= 20 (d = " + std::to_string(d) + "); use random mode");

    std::vector<Probe> probes = detail::standard_probes(basis);
    Vector scratch(dim);
    Best<GammaHit> best;
    std::size_t key = 0;

    for (const Vector& g : canonical_gammas(d)) {
        std::size_t probe = 0;
        double v = eval_gamma(basis, probes, g, scratch, &probe);
        best.offer(v, key++, GammaHit{g, probe});
    }

    bool suppression_exhaustive = false;
    if (opts.mode == SearchMode::exact) {
        auto supp = sweep(basis, probes, false, opts.threads);
        auto sign = sweep(basis, probes, true, opts.threads);
        best.offer(supp.value, key++, supp.payload);
        best.offer(sign.value, key++, sign.payload);
        suppression_exhaustive = detail::unit_vectors_are_extreme(basis);
    } else if (opts.budget > 0) {
        constexpr std::size_t kBlock = 256;
        auto blocks = map_blocks<Best<GammaHit>>(opts.budget, kBlock, opts.threads, [&](std::size_t begin, std::size_t end) {
            Best<GammaHit> local;
            Vector g(d), buf(dim);
            for (std::size_t s = begin; s < end; ++s) {
                CounterRng rng(opts.seed, stream_id(0x4b75, s));
                const std::uint64_t family = s % 3;
                for (std::size_t n = 0; n < d; ++n) {
                    if (family == 0)
                        g[n] = static_cast<double>(rng.below(2));
                    else if (family == 1)
                        g[n] = rng.sign();
                    else
                        g[n] = 2.0 * rng.uniform() - 1.0;
                }
                std::size_t probe = 0;
                double v = eval_gamma(basis, probes, g, buf, &probe);
                local.offer(v, s, GammaHit{g, probe});
            }
            return local;
        });
        for (auto& b : blocks) {
            b.key += key;
            best.merge(b);
        }
        key += opts.budget;
    }

    // Continuous refinement of the winning multiplier inside [-1, 1]^d.
    if (opts.mode == SearchMode::exact || opts.budget > 0) {
        GammaHit hit = best.payload;
        static constexpr double kGrid[] = {-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0};
        double current = best.value;
        for (int pass = 0; pass < 3; ++pass) {
            bool improved = false;
            for (std::size_t n = 0; n < d; ++n) {
                double keep = hit.gamma[n];
                for (double t : kGrid) {
                    hit.gamma[n] = t;
                    std::size_t probe = 0;
                    double v = eval_gamma(basis, probes, hit.gamma, scratch, &probe);
                    if (v > current) {
                        current = v;
                        keep = t;
                        hit.probe = probe;
                        improved = true;
                    }
                }
                hit.gamma[n] = keep;
            }
            if (!improved) break;
        }
        best.offer(current, key++, hit);
    }

    BoundEstimate out;
    out.lower = best.value;
    out.upper = unconditional_upper_bound(basis);
    out.upper_certified = std::isfinite(out.upper);
    out.witness.kind = "S_gamma";
    out.witness.gamma = best.payload.gamma;
    out.witness.f = probes[best.payload.probe].f;
    out.heuristic = !(out.upper_certified && out.upper <= out.lower + kBoundTol);
    out.note = suppression_exhaustive ? "suppression family {0,1}^d exhaustive" : "sampled";
    return out;
}

} // namespace qgreedy
