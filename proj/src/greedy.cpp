#include "qgreedy/greedy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "qgreedy/error.hpp"
#include "search_util.hpp"

namespace qgreedy {

using detail::Best;

std::vector<std::size_t> greedy_ordering(std::span<const double> coeffs) {
    std::vector<std::size_t> order(coeffs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::fabs(coeffs[a]) > std::fabs(coeffs[b]); });
    return order;
}

IndexSet greedy_set_of_coefficients(std::span<const double> coeffs, std::size_t m) {
    if (m > coeffs.size())
        throw InvalidInput("greedy set of size " + std::to_string(m) + " requested from " + std::to_string(coeffs.size()) +
                           " coefficients");
    auto order = greedy_ordering(coeffs);
    IndexSet set(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
    std::sort(set.begin(), set.end());
    return set;
}

IndexSet greedy_set(const Basis& basis, std::span<const double> f, std::size_t m) {
    return greedy_set_of_coefficients(coefficient_transform(basis, f), m);
}

Vector greedy_approximation(const Basis& basis, std::span<const double> f, std::size_t m) {
    return coordinate_projection(basis, greedy_set(basis, f, m), f);
}

Vector restricted_truncation(const Basis& basis, std::span<const double> f, const IndexSet& set) {
    Vector c = coefficient_transform(basis, f);
    Vector out(basis.ambient_dim(), 0.0);
    if (set.empty()) return out;
    double level = kInf;
    for (auto n : set) {
        if (n >= basis.size()) throw InvalidInput("restricted_truncation: index " + std::to_string(n + 1) + " out of range");
        level = std::min(level, std::fabs(c[n]));
    }
    if (level == 0.0) return out;
    for (auto n : normalize_set(set)) basis.axpy(c[n] < 0.0 ? -level : level, n, out);
    return out;
}

Vector truncation_operator(const Basis& basis, std::span<const double> f, std::size_t m) {
    return restricted_truncation(basis, f, greedy_set(basis, f, m));
}

namespace {

enum class Operator { greedy, truncation };

struct GreedyHit {
    Vector f;
    std::size_t m = 0;
};

// max over m of ||G_m f|| / ||f|| (or U_m), evaluated incrementally along the
// greedy ordering.
double best_over_m(const Basis& basis, Operator op, std::span<const double> f, Vector& coeffs, Vector& partial,
                   Vector& scaled, std::size_t* best_m) {
    double norm = basis.space().gauge_unchecked(f);
    if (!(norm > 0.0)) return -1.0;
    basis.coefficients_into(f, coeffs);
    auto order = greedy_ordering(coeffs);
    std::fill(partial.begin(), partial.end(), 0.0);
    double best = -1.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        std::size_t n = order[k];
        double r;
        if (op == Operator::greedy) {
            basis.axpy(coeffs[n], n, partial);
            r = basis.space().gauge_unchecked(partial) / norm;
        } else {
            basis.axpy(coeffs[n] < 0.0 ? -1.0 : 1.0, n, partial);
            double level = std::fabs(coeffs[n]);
            for (std::size_t j = 0; j < partial.size(); ++j) scaled[j] = level * partial[j];
            r = basis.space().gauge_unchecked(scaled) / norm;
        }
        if (r > best) {
            best = r;
            *best_m = k + 1;
        }
    }
    return best;
}

// Structured coefficient arrays: telescoping blocks of ones with a tiny lift
// on alternating positions, which steers the tie-break towards the sets that
// make the difference basis conditional.
std::vector<Vector> structured_coefficients(std::size_t d) {
    std::vector<Vector> out;
    for (std::size_t k = 1; k <= d; ++k) {
        out.emplace_back(d, 0.0);
        std::fill(out.back().begin(), out.back().begin() + static_cast<std::ptrdiff_t>(k), 1.0);
        for (double lift : {1e-6, 1e-10}) {
            for (std::size_t parity = 0; parity < 2; ++parity) {
                Vector c(d, 0.0);
                for (std::size_t n = 0; n < k; ++n) c[n] = 1.0 + ((n % 2 == parity) ? lift : 0.0);
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

void sample_coefficients(CounterRng& rng, std::size_t s, Vector& c) {
    const std::size_t d = c.size();
    std::fill(c.begin(), c.end(), 0.0);
    switch (s % 4) {
    case 0: {
        std::normal_distribution<double> gauss;
        for (auto& x : c) x = gauss(rng);
        break;
    }
    case 1: {
        std::size_t k = 1 + rng.below(d);
        for (auto n : detail::random_subset(rng, d, k)) c[n] = rng.sign();
        break;
    }
    case 2: {
        // Telescoping prefix with a lift on a random subset.
        std::size_t k = 1 + rng.below(d);
        double lift = std::pow(10.0, -1.0 - 9.0 * rng.uniform());
        for (std::size_t n = 0; n < k; ++n) c[n] = 1.0 + (rng.below(2) != 0U ? lift : 0.0);
        break;
    }
    default: {
        for (auto& x : c) x = rng.sign() / std::sqrt(1.0 - rng.uniform());
        break;
    }
    }
}

BoundEstimate greedy_type_constant(const Basis& basis, Operator op, const SearchOptions& opts) {
    const std::size_t d = basis.size();
    const std::size_t dim = basis.ambient_dim();
    Vector coeffs(d), partial(dim), scaled(dim);
    Best<GreedyHit> best;

    auto offer_f = [&](const Vector& f, std::size_t key, Best<GreedyHit>& into, Vector& cbuf, Vector& pbuf, Vector& sbuf) {
        std::size_t m = 0;
        double v = best_over_m(basis, op, f, cbuf, pbuf, sbuf, &m);
        if (v >= 0.0) into.offer(v, key, GreedyHit{f, m});
    };

    Vector x1(basis.vector(0).begin(), basis.vector(0).end());
    offer_f(x1, 0, best, coeffs, partial, scaled);
    std::size_t key = 1;

    if (opts.budget > 0) {
        for (const Vector& c : structured_coefficients(d)) offer_f(synthesize(basis, c), key++, best, coeffs, partial, scaled);
        Vector f(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            std::fill(f.begin(), f.end(), 0.0);
            f[j] = 1.0;
            offer_f(f, key++, best, coeffs, partial, scaled);
        }

        constexpr std::size_t kBlock = 256;
        const std::size_t base = key;
        auto blocks = map_blocks<Best<GreedyHit>>(opts.budget, kBlock, opts.threads, [&](std::size_t begin, std::size_t end) {
            Best<GreedyHit> local;
            Vector c(d), cb(d), pb(dim), sb(dim);
            for (std::size_t s = begin; s < end; ++s) {
                CounterRng rng(opts.seed, stream_id(op == Operator::greedy ? 0x9e : 0x7c, s));
                sample_coefficients(rng, s, c);
                offer_f(synthesize(basis, c), base + s, local, cb, pb, sb);
            }
            return local;
        });
        for (const auto& b : blocks) best.merge(b);
        key = base + opts.budget;

        // Local refinement of the winning vector in ambient coordinates.
        Vector f_ref = best.payload.f;
        double refined = detail::coordinate_ascent(f_ref, [&](const Vector& g) {
            std::size_t m = 0;
            return best_over_m(basis, op, g, coeffs, partial, scaled, &m);
        });
        if (refined > best.value) offer_f(f_ref, key++, best, coeffs, partial, scaled);
    }

    BoundEstimate out;
    out.lower = best.value;
    out.upper = kInf;
    out.upper_certified = false;
    out.heuristic = true;
    out.witness.kind = op == Operator::greedy ? "G_m" : "U_m";
    out.witness.f = best.payload.f;
    out.witness.m = best.payload.m;
    out.note = "sampled lower bound; no certified upper bound";
    return out;
}

double rpow_sum_of_largest(Vector terms, std::size_t m, double r) {
    std::sort(terms.begin(), terms.end(), std::greater<>());
    double s = 0.0;
    for (std::size_t k = 0; k < std::min(m, terms.size()); ++k) s += std::pow(terms[k], r);
    return std::pow(s, 1.0 / r);
}

double conditionality_upper(const Basis& basis, std::size_t m) {
    const std::size_t d = basis.size();
    if (detail::unit_vectors_are_extreme(basis)) {
        double p = basis.space().exponent();
        double best = 0.0;
        Vector terms(d);
        for (std::size_t j = 0; j < basis.ambient_dim(); ++j) {
            for (std::size_t n = 0; n < d; ++n) terms[n] = std::fabs(basis.dual_entry(n, j)) * basis.vector_norm(n);
            best = std::max(best, rpow_sum_of_largest(terms, m, p));
        }
        return best;
    }
    auto r = basis.space().convexity_exponent();
    if (!r || !basis.dual_norms_exact()) return kInf;
    Vector terms(d);
    for (std::size_t n = 0; n < d; ++n) terms[n] = basis.vector_norm(n) * basis.dual_norm(n);
    return rpow_sum_of_largest(terms, m, *r);
}

// Images S_A f for every probe, maintained under single-index toggles.
struct ProjectionState {
    const Basis* basis;
    const std::vector<detail::Probe>* probes;
    std::vector<Vector> images;

    void reset() {
        images.assign(probes->size(), Vector(basis->ambient_dim(), 0.0));
    }
    void toggle(std::size_t n, bool add) {
        for (std::size_t k = 0; k < probes->size(); ++k) {
            double c = (*probes)[k].coeffs[n];
            if (c != 0.0) basis->axpy(add ? c : -c, n, images[k]);
        }
    }
    double value(std::size_t* probe) const {
        double best = 0.0;
        *probe = 0;
        for (std::size_t k = 0; k < probes->size(); ++k) {
            const auto& pr = (*probes)[k];
            if (pr.norm == 0.0) continue;
            double r = basis->space().gauge_unchecked(images[k]) / pr.norm;
            if (r > best) {
                best = r;
                *probe = k;
            }
        }
        return best;
    }
};

struct SetHit {
    IndexSet set;
    std::size_t probe = 0;
};

} // namespace

BoundEstimate quasi_greedy_constant(const Basis& basis, const SearchOptions& opts) {
    return greedy_type_constant(basis, Operator::greedy, opts);
}

BoundEstimate truncation_constant(const Basis& basis, const SearchOptions& opts) {
    return greedy_type_constant(basis, Operator::truncation, opts);
}

double projection_norm_lower(const Basis& basis, const IndexSet& set, Vector* witness_f) {
    auto probes = detail::standard_probes(basis);
    ProjectionState st{&basis, &probes, {}};
    st.reset();
    for (auto n : set) {
        if (n >= basis.size()) throw InvalidInput("projection index " + std::to_string(n + 1) + " out of range");
        st.toggle(n, true);
    }
    std::size_t probe = 0;
    double v = st.value(&probe);
    if (witness_f) *witness_f = probes[probe].f;
    return v;
}

std::vector<ConditionalityRow> conditionality_growth_profile(const Basis& basis, std::size_t max_m,
                                                             const SearchOptions& opts) {
    const std::size_t d = basis.size();
    max_m = std::min(max_m, d);
    if (max_m == 0) return {};
    auto probes = detail::standard_probes(basis);
    // per_size[k] = best ||S_A|| seen with |A| = k
    std::vector<Best<SetHit>> per_size(max_m + 1);
    bool exhaustive = false;

    auto offer_set = [&](const IndexSet& set, std::size_t key, std::vector<Best<SetHit>>& into) {
        ProjectionState st{&basis, &probes, {}};
        st.reset();
        for (auto n : set) st.toggle(n, true);
        std::size_t probe = 0;
        double v = st.value(&probe);
        into[set.size()].offer(v, key, SetHit{set, probe});
    };

    std::size_t key = 0;
    // Structured sets: alternating sets, intervals, singletons.
    for (std::size_t k = 1; k <= max_m; ++k) {
        for (std::size_t parity = 0; parity < 2; ++parity) {
            IndexSet s;
            for (std::size_t n = parity; n < d && s.size() < k; n += 2) s.push_back(n);
            if (s.size() == k) offer_set(s, key++, per_size);
        }
        for (std::size_t start = 0; start + k <= d; ++start) {
            IndexSet s(k);
            std::iota(s.begin(), s.end(), start);
            offer_set(s, key++, per_size);
        }
    }

    if (opts.mode == SearchMode::exact) {
        if (d > 20) throw CombinatorialOverflow("exact conditionality profile needs d <= 20; use random mode");
        const std::uint64_t total = std::uint64_t{1} << d;
        const std::size_t base = key;
        auto blocks = map_blocks<std::vector<Best<SetHit>>>(total, 4096, opts.threads, [&](std::size_t begin, std::size_t end) {
            std::vector<Best<SetHit>> local(max_m + 1);
            ProjectionState st{&basis, &probes, {}};
            st.reset();
            std::uint64_t mask = detail::gray(begin);
            for (std::size_t n = 0; n < d; ++n)
                if ((mask >> n) & 1U) st.toggle(n, true);
            for (std::uint64_t i = begin; i < end; ++i) {
                auto size = static_cast<std::size_t>(std::popcount(mask));
                if (size >= 1 && size <= max_m) {
                    std::size_t probe = 0;
                    double v = st.value(&probe);
                    local[size].offer(v, base + static_cast<std::size_t>(mask), SetHit{{}, probe});
                    if (local[size].key == base + mask) local[size].payload.set = detail::mask_to_set(mask, d);
                }
                if (i + 1 == end) break;
                auto flip = static_cast<std::size_t>(std::countr_zero(i + 1));
                mask ^= std::uint64_t{1} << flip;
                st.toggle(flip, (mask >> flip) & 1U);
            }
            return local;
        });
        for (auto& b : blocks)
            for (std::size_t k = 1; k <= max_m; ++k) {
                if (b[k].key == std::numeric_limits<std::size_t>::max()) continue;
                // Gray sweeps accumulate rounding; re-evaluate the winner.
                offer_set(b[k].payload.set, b[k].key, per_size);
            }
        key = base + total;
        exhaustive = true;
    } else {
        // Greedy growth from each probe, then random subsets.
        for (std::size_t pi = 0; pi < probes.size(); ++pi) {
            std::vector<detail::Probe> one{probes[pi]};
            ProjectionState st{&basis, &one, {}};
            st.reset();
            IndexSet chosen;
            std::vector<bool> used(d, false);
            for (std::size_t k = 1; k <= max_m; ++k) {
                double best_v = -1.0;
                std::size_t best_n = 0;
                for (std::size_t n = 0; n < d; ++n) {
                    if (used[n]) continue;
                    st.toggle(n, true);
                    std::size_t dummy = 0;
                    double v = st.value(&dummy);
                    if (v > best_v) {
                        best_v = v;
                        best_n = n;
                    }
                    st.toggle(n, false);
                }
                used[best_n] = true;
                st.toggle(best_n, true);
                chosen.push_back(best_n);
                offer_set(normalize_set(chosen), key++, per_size);
            }
        }
        const std::size_t base = key;
        auto blocks = map_blocks<std::vector<Best<SetHit>>>(opts.budget, 256, opts.threads, [&](std::size_t begin, std::size_t end) {
            std::vector<Best<SetHit>> local(max_m + 1);
            for (std::size_t s = begin; s < end; ++s) {
                CounterRng rng(opts.seed, stream_id(0xc0d, s));
                std::size_t k = 1 + rng.below(max_m);
                offer_set(detail::random_subset(rng, d, k), base + s, local);
            }
            return local;
        });
        for (auto& b : blocks)
            for (std::size_t k = 1; k <= max_m; ++k) per_size[k].merge(b[k]);
    }

    std::vector<ConditionalityRow> rows;
    double p = basis.space().exponent();
    Best<SetHit> running;
    for (std::size_t m = 1; m <= max_m; ++m) {
        running.merge(per_size[m]);
        ConditionalityRow row;
        row.m = m;
        row.lower = running.value;
        row.upper = conditionality_upper(basis, m);
        double growth = std::isinf(p) ? 1.0 : std::pow(1.0 + std::log(static_cast<double>(m)), 1.0 / p);
        row.diagnostic = row.lower / growth;
        row.witness_set = running.payload.set;
        row.witness_f = probes[running.payload.probe].f;
        row.exhaustive = exhaustive && detail::unit_vectors_are_extreme(basis);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace qgreedy
