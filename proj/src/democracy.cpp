#include "qgreedy/democracy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "qgreedy/error.hpp"
#include "qgreedy/greedy.hpp"
#include "search_util.hpp"

namespace qgreedy {

using detail::Best;
using detail::Worst;

namespace {

double signed_sum_norm(const Basis& basis, const IndexSet& set, const Vector* signs, Vector& buf) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (std::size_t i = 0; i < set.size(); ++i) basis.axpy(signs ? (*signs)[i] : 1.0, set[i], buf);
    return basis.space().gauge_unchecked(buf);
}

double set_norm(const Basis& basis, const IndexSet& set) {
    Vector buf(basis.ambient_dim());
    return signed_sum_norm(basis, set, nullptr, buf);
}

// Per-size extremes of ||sum_A x_n|| for |A| = 0..d.
struct SizeExtremes {
    std::vector<Best<IndexSet>> hi;
    std::vector<Worst<IndexSet>> lo;
    bool exhaustive = false;
    explicit SizeExtremes(std::size_t d = 0) : hi(d + 1), lo(d + 1) {}

    void offer(const IndexSet& set, double v, std::size_t key) {
        hi[set.size()].offer(v, key, set);
        lo[set.size()].offer(v, key, set);
    }
    void merge(const SizeExtremes& o) {
        for (std::size_t k = 0; k < hi.size(); ++k) {
            hi[k].merge(o.hi[k]);
            lo[k].merge(o.lo[k]);
        }
    }
};

// Block l_p(l_2) unit system: ||sum_A e_n|| depends only on how many indices
// fall in each block, (sum_b c_b^{p/2})^{1/p}. A knapsack over blocks gives
// the extremes for every size.
bool occupancy_applies(const Basis& basis) {
    return basis.space().is_block() && basis.is_unit_vector_system() && std::isfinite(basis.space().exponent());
}

SizeExtremes occupancy_extremes(const Basis& basis) {
    const auto& space = std::get<BlockLpL2Space>(basis.space().variant());
    const double p = space.p;
    const std::size_t d = basis.size();
    const std::size_t nb = space.blocks.size();
    constexpr double kNone = -1.0;
    // best[b][k]: extreme of sum c^{p/2} over the first b blocks with total k
    std::vector<std::vector<double>> hi(nb + 1, std::vector<double>(d + 1, kNone));
    std::vector<std::vector<double>> lo(nb + 1, std::vector<double>(d + 1, kNone));
    std::vector<std::vector<std::size_t>> hi_c(nb + 1, std::vector<std::size_t>(d + 1, 0));
    std::vector<std::vector<std::size_t>> lo_c(nb + 1, std::vector<std::size_t>(d + 1, 0));
    hi[0][0] = lo[0][0] = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        for (std::size_t k = 0; k <= d; ++k) {
            for (std::size_t c = 0; c <= space.blocks[b] && c <= k; ++c) {
                double prev_hi = hi[b][k - c], prev_lo = lo[b][k - c];
                if (prev_hi == kNone) continue;
                double g = std::pow(static_cast<double>(c), p / 2.0);
                if (hi[b + 1][k] == kNone || prev_hi + g > hi[b + 1][k]) {
                    hi[b + 1][k] = prev_hi + g;
                    hi_c[b + 1][k] = c;
                }
                if (lo[b + 1][k] == kNone || prev_lo + g < lo[b + 1][k]) {
                    lo[b + 1][k] = prev_lo + g;
                    lo_c[b + 1][k] = c;
                }
            }
        }
    }
    std::vector<std::size_t> offset(nb, 0);
    for (std::size_t b = 1; b < nb; ++b) offset[b] = offset[b - 1] + space.blocks[b - 1];
    auto rebuild = [&](const std::vector<std::vector<std::size_t>>& choice, std::size_t k) {
        IndexSet set;
        for (std::size_t b = nb; b > 0; --b) {
            std::size_t c = choice[b][k];
            for (std::size_t i = 0; i < c; ++i) set.push_back(offset[b - 1] + i);
            k -= c;
        }
        return normalize_set(set);
    };
    SizeExtremes ext(d);
    for (std::size_t k = 1; k <= d; ++k) {
        IndexSet s_hi = rebuild(hi_c, k), s_lo = rebuild(lo_c, k);
        ext.hi[k].offer(set_norm(basis, s_hi), 0, s_hi);
        ext.lo[k].offer(set_norm(basis, s_lo), 0, s_lo);
    }
    ext.exhaustive = true;
    return ext;
}

constexpr std::size_t kGrayBlock = 4096;

SizeExtremes gray_extremes(const Basis& basis, unsigned threads) {
    const std::size_t d = basis.size();
    const std::size_t dim = basis.ambient_dim();
    const std::uint64_t total = std::uint64_t{1} << d;
    auto blocks = map_blocks<SizeExtremes>(total, kGrayBlock, threads, [&](std::size_t begin, std::size_t end) {
        SizeExtremes local(d);
        Vector sum(dim, 0.0);
        std::uint64_t mask = detail::gray(begin);
        for (std::size_t n = 0; n < d; ++n)
            if ((mask >> n) & 1U) basis.axpy(1.0, n, sum);
        // Track winners by mask, materialize sets afterwards.
        std::vector<Best<std::uint64_t>> hi(d + 1);
        std::vector<Worst<std::uint64_t>> lo(d + 1);
        for (std::uint64_t i = begin;; ) {
            auto size = static_cast<std::size_t>(std::popcount(mask));
            double v = basis.space().gauge_unchecked(sum);
            hi[size].offer(v, mask, mask);
            lo[size].offer(v, mask, mask);
            if (++i == end) break;
            auto flip = static_cast<std::size_t>(std::countr_zero(i));
            mask ^= std::uint64_t{1} << flip;
            basis.axpy(((mask >> flip) & 1U) ? 1.0 : -1.0, flip, sum);
        }
        for (std::size_t k = 0; k <= d; ++k) {
            if (hi[k].key != std::numeric_limits<std::size_t>::max())
                local.hi[k].offer(hi[k].value, hi[k].key, detail::mask_to_set(hi[k].payload, d));
            if (lo[k].key != std::numeric_limits<std::size_t>::max())
                local.lo[k].offer(lo[k].value, lo[k].key, detail::mask_to_set(lo[k].payload, d));
        }
        return local;
    });
    SizeExtremes ext(d);
    for (const auto& b : blocks) {
        // Incremental sums drift; winners are re-evaluated from scratch.
        for (std::size_t k = 0; k <= d; ++k) {
            if (b.hi[k].key != std::numeric_limits<std::size_t>::max())
                ext.hi[k].offer(set_norm(basis, b.hi[k].payload), b.hi[k].key, b.hi[k].payload);
            if (b.lo[k].key != std::numeric_limits<std::size_t>::max())
                ext.lo[k].offer(set_norm(basis, b.lo[k].payload), b.lo[k].key, b.lo[k].payload);
        }
    }
    ext.exhaustive = true;
    return ext;
}

std::vector<IndexSet> structured_sets(const Basis& basis) {
    const std::size_t d = basis.size();
    std::vector<IndexSet> out;
    for (std::size_t k = 1; k <= d; ++k) {
        for (std::size_t start = 0; start + k <= d; ++start) {
            IndexSet s(k);
            std::iota(s.begin(), s.end(), start);
            out.push_back(std::move(s));
        }
        for (std::size_t stride = 2; stride <= 3; ++stride)
            for (std::size_t first = 0; first < stride; ++first) {
                IndexSet s;
                for (std::size_t n = first; n < d && s.size() < k; n += stride) s.push_back(n);
                if (s.size() == k) out.push_back(std::move(s));
            }
    }
    if (basis.space().is_block()) {
        // one index per block, taking the first k blocks
        const auto& blocks = std::get<BlockLpL2Space>(basis.space().variant()).blocks;
        IndexSet spread;
        std::size_t offset = 0;
        for (auto size : blocks) {
            if (size > 0 && offset < d) {
                spread.push_back(offset);
                out.push_back(spread);
            }
            offset += size;
        }
    }
    return out;
}

// One pass of single swaps (out of the set, into the set) improving the
// objective in the direction `sign` (+1 maximize, -1 minimize).
IndexSet local_swaps(const Basis& basis, IndexSet set, double sign, int passes) {
    const std::size_t d = basis.size();
    Vector buf(basis.ambient_dim());
    double best = sign * signed_sum_norm(basis, set, nullptr, buf);
    for (int pass = 0; pass < passes; ++pass) {
        bool improved = false;
        for (std::size_t i = 0; i < set.size(); ++i) {
            for (std::size_t n = 0; n < d; ++n) {
                if (std::binary_search(set.begin(), set.end(), n)) continue;
                IndexSet cand = set;
                cand[i] = n;
                cand = normalize_set(cand);
                double v = sign * signed_sum_norm(basis, cand, nullptr, buf);
                if (v > best) {
                    best = v;
                    set = cand;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) break;
    }
    return set;
}

SizeExtremes sampled_extremes(const Basis& basis, const SearchOptions& opts) {
    const std::size_t d = basis.size();
    SizeExtremes ext(d);
    Vector buf(basis.ambient_dim());
    std::size_t key = 0;
    for (const auto& s : structured_sets(basis)) ext.offer(s, signed_sum_norm(basis, s, nullptr, buf), key++);

    const std::size_t base = key;
    auto blocks = map_blocks<SizeExtremes>(opts.budget, 256, opts.threads, [&](std::size_t begin, std::size_t end) {
        SizeExtremes local(d);
        Vector b(basis.ambient_dim());
        for (std::size_t s = begin; s < end; ++s) {
            CounterRng rng(opts.seed, stream_id(0xde, s));
            IndexSet set = detail::random_subset(rng, d, 1 + rng.below(d));
            local.offer(set, signed_sum_norm(basis, set, nullptr, b), base + s);
        }
        return local;
    });
    for (const auto& b : blocks) ext.merge(b);
    key = base + opts.budget;

    if (opts.budget > 0) {
        for (std::size_t k = 1; k <= d; ++k) {
            IndexSet up = local_swaps(basis, ext.hi[k].payload, 1.0, 2);
            IndexSet down = local_swaps(basis, ext.lo[k].payload, -1.0, 2);
            ext.offer(up, set_norm(basis, up), key++);
            ext.offer(down, set_norm(basis, down), key++);
        }
    }
    return ext;
}

SizeExtremes size_extremes(const Basis& basis, const SearchOptions& opts) {
    const std::size_t d = basis.size();
    if (occupancy_applies(basis)) return occupancy_extremes(basis);
    if (opts.mode == SearchMode::random) return sampled_extremes(basis, opts);
    // phi_l(m) is an inf over every size >= m, so the whole power set is needed.
    if (static_cast<double>(std::uint64_t{1} << std::min<std::size_t>(d, 63)) <= kMaxExactSubsets)
        return gray_extremes(basis, opts.threads);
    throw CombinatorialOverflow("exact democracy functions enumerate all 2^" + std::to_string(d) +
                                " subsets (limit 1e7); use --mode random");
}

double upper_certified(const Basis& basis, std::size_t m) {
    auto r = basis.space().convexity_exponent();
    if (!r) return kInf;
    return basis.a() * std::pow(static_cast<double>(m), 1.0 / *r);
}

// ||sum_A x_n|| >= |x_k*(sum_A x_n)| / ||x_k*|| = 1 / ||x_k*|| for k in A.
double lower_certified(const Basis& basis) {
    if (!basis.dual_norms_exact()) return 0.0;
    return 1.0 / basis.b();
}

} // namespace

std::vector<DemocracyRow> democracy_table(const Basis& basis, std::size_t max_m, const SearchOptions& opts) {
    const std::size_t d = basis.size();
    max_m = std::min(max_m, d);
    if (max_m == 0) return {};
    SizeExtremes ext = size_extremes(basis, opts);
    if (opts.mode == SearchMode::exact) ext.exhaustive = true;

    std::vector<DemocracyRow> rows(max_m);
    Best<IndexSet> up;
    for (std::size_t m = 1; m <= max_m; ++m) {
        up.merge(ext.hi[m]);
        auto& row = rows[m - 1];
        row.m = m;
        row.phi_u.lower = up.value;
        row.phi_u.witness.kind = "phi_u";
        row.phi_u.witness.set_a = up.payload;
        row.phi_u.witness.m = m;
        if (ext.exhaustive) {
            row.phi_u.upper = up.value;
            row.phi_u.upper_certified = true;
            row.phi_u.heuristic = false;
            row.phi_u.note = "exhaustive";
        } else {
            row.phi_u.upper = std::max(upper_certified(basis, m), up.value);
            row.phi_u.upper_certified = std::isfinite(row.phi_u.upper);
            row.phi_u.note = "sampled; upper bound a*m^(1/r)";
        }
    }
    Worst<IndexSet> down;
    for (std::size_t k = d; k >= 1; --k) {
        down.merge(ext.lo[k]);
        if (k > max_m) continue;
        auto& row = rows[k - 1];
        row.phi_l.upper = down.value;
        row.phi_l.upper_certified = ext.exhaustive;
        row.phi_l.witness.kind = "phi_l";
        row.phi_l.witness.set_a = down.payload;
        row.phi_l.witness.m = k;
        if (ext.exhaustive) {
            row.phi_l.lower = down.value;
            row.phi_l.heuristic = false;
            row.phi_l.note = "exhaustive";
        } else {
            row.phi_l.lower = std::min(lower_certified(basis), down.value);
            row.phi_l.note = "sampled; lower bound 1/b";
        }
    }
    return rows;
}

BoundEstimate upper_democracy(const Basis& basis, std::size_t m, const SearchOptions& opts) {
    if (m == 0 || m > basis.size())
        throw InvalidInput("m must lie in 1.." + std::to_string(basis.size()) + ", got " + std::to_string(m));
    return democracy_table(basis, m, opts).back().phi_u;
}

BoundEstimate lower_democracy(const Basis& basis, std::size_t m, const SearchOptions& opts) {
    if (m == 0 || m > basis.size())
        throw InvalidInput("m must lie in 1.." + std::to_string(basis.size()) + ", got " + std::to_string(m));
    return democracy_table(basis, m, opts).back().phi_l;
}

// ---------------------------------------------------------------------------
// SUCC and super-democracy

namespace {

// Signed subset v in {-1,0,1}^d encoded in base 3 (digit 1 = +1, 2 = -1).
struct Ternary {
    std::size_t d;
    std::vector<std::size_t> pow3;
    explicit Ternary(std::size_t d_) : d(d_), pow3(d_ + 1, 1) {
        for (std::size_t i = 1; i <= d; ++i) pow3[i] = pow3[i - 1] * 3;
    }
    std::size_t count() const { return pow3[d]; }
    int digit(std::size_t code, std::size_t n) const { return static_cast<int>((code / pow3[n]) % 3); }
    void decode(std::size_t code, IndexSet& set, Vector& signs) const {
        set.clear();
        signs.clear();
        for (std::size_t n = 0; n < d; ++n) {
            int t = digit(code, n);
            if (t == 0) continue;
            set.push_back(n);
            signs.push_back(t == 1 ? 1.0 : -1.0);
        }
    }
};

Vector all_signed_norms(const Basis& basis, const Ternary& tern, unsigned threads) {
    auto blocks = map_blocks<Vector>(tern.count(), 8192, threads, [&](std::size_t begin, std::size_t end) {
        Vector out;
        out.reserve(end - begin);
        Vector buf(basis.ambient_dim());
        IndexSet set;
        Vector signs;
        for (std::size_t c = begin; c < end; ++c) {
            tern.decode(c, set, signs);
            out.push_back(signed_sum_norm(basis, set, &signs, buf));
        }
        return out;
    });
    Vector norms;
    norms.reserve(tern.count());
    for (auto& b : blocks) norms.insert(norms.end(), b.begin(), b.end());
    return norms;
}

void fill_witness(BoundEstimate& est, const char* kind, const IndexSet& a, const Vector& sa, const IndexSet& b,
                  const Vector& sb) {
    est.witness.kind = kind;
    est.witness.set_a = a;
    est.witness.signs_a = sa;
    est.witness.set_b = b;
    est.witness.signs = sb;
}

struct SignedPair {
    IndexSet a, b;
    Vector sa, sb;
};

void finish(BoundEstimate& est, double value, bool exhaustive, const char* what) {
    est.lower = value;
    if (exhaustive) {
        est.upper = value;
        est.upper_certified = true;
        est.heuristic = false;
        est.note = std::string(what) + ": exhaustive over signed subsets";
    } else {
        est.note = std::string(what) + ": sampled lower bound";
    }
}

SuccEstimate succ_exact(const Basis& basis, unsigned threads) {
    const std::size_t d = basis.size();
    Ternary tern(d);
    Vector norms = all_signed_norms(basis, tern, threads);
    const std::size_t count = tern.count();

    // sub_max[v] = max over restrictions w of v of ||w||; argmax in sub_arg.
    Vector sub_max(norms);
    std::vector<std::size_t> sub_arg(count);
    std::iota(sub_arg.begin(), sub_arg.end(), std::size_t{0});
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t c = 0; c < count; ++c) {
            if (tern.digit(c, n) == 0) continue;
            std::size_t w = c - static_cast<std::size_t>(tern.digit(c, n)) * tern.pow3[n];
            if (sub_max[w] > sub_max[c] || (sub_max[w] == sub_max[c] && sub_arg[w] < sub_arg[c])) {
                sub_max[c] = sub_max[w];
                sub_arg[c] = sub_arg[w];
            }
        }
    }
    Best<std::pair<std::size_t, std::size_t>> supp;
    for (std::size_t c = 1; c < count; ++c)
        if (norms[c] > 0.0) supp.offer(sub_max[c] / norms[c], c, {sub_arg[c], c});

    // Sign change: per support mask, max / min over sign patterns.
    const std::size_t masks = std::size_t{1} << d;
    Vector hi(masks, -1.0), lo(masks, kInf);
    std::vector<std::size_t> hi_c(masks, 0), lo_c(masks, 0);
    for (std::size_t c = 1; c < count; ++c) {
        std::size_t mask = 0;
        for (std::size_t n = 0; n < d; ++n)
            if (tern.digit(c, n) != 0) mask |= std::size_t{1} << n;
        if (norms[c] > hi[mask]) {
            hi[mask] = norms[c];
            hi_c[mask] = c;
        }
        if (norms[c] < lo[mask]) {
            lo[mask] = norms[c];
            lo_c[mask] = c;
        }
    }
    Best<std::pair<std::size_t, std::size_t>> sign;
    for (std::size_t mask = 1; mask < masks; ++mask)
        if (lo[mask] > 0.0) sign.offer(hi[mask] / lo[mask], mask, {hi_c[mask], lo_c[mask]});

    SuccEstimate out;
    SignedPair w;
    tern.decode(supp.payload.first, w.a, w.sa);
    tern.decode(supp.payload.second, w.b, w.sb);
    finish(out.suppression, supp.value, true, "suppression");
    fill_witness(out.suppression, "succ_suppression", w.a, w.sa, w.b, w.sb);
    tern.decode(sign.payload.first, w.a, w.sa);
    tern.decode(sign.payload.second, w.b, w.sb);
    finish(out.sign_change, sign.value, true, "sign change");
    fill_witness(out.sign_change, "succ_sign_change", w.a, w.sa, w.b, w.sb);
    return out;
}

Vector random_signs(CounterRng& rng, std::size_t k) {
    Vector s(k);
    for (auto& x : s) x = rng.sign();
    return s;
}

constexpr std::size_t kEnumerateSubsets = 6;

SuccEstimate succ_sampled(const Basis& basis, const SearchOptions& opts) {
    const std::size_t d = basis.size();
    struct Pair {
        Best<SignedPair> supp, sign;
    };
    auto evaluate = [&](CounterRng* rng, const IndexSet& b, const Vector& sb, std::size_t key, Pair& into, Vector& buf) {
        double nb = signed_sum_norm(basis, b, &sb, buf);
        if (!(nb > 0.0)) return;
        const std::size_t k = b.size();
        // suppression: every A in B when small, random ones otherwise
        std::size_t trials = k <= kEnumerateSubsets ? (std::size_t{1} << k) - 1 : 64;
        for (std::size_t t = 1; t <= trials; ++t) {
            std::uint64_t mask = k <= kEnumerateSubsets ? t : (rng ? (*rng)() : t);
            SignedPair w;
            for (std::size_t i = 0; i < k; ++i)
                if ((mask >> (i % 64)) & 1U) {
                    w.a.push_back(b[i]);
                    w.sa.push_back(sb[i]);
                }
            if (w.a.empty()) continue;
            double na = signed_sum_norm(basis, w.a, &w.sa, buf);
            w.b = b;
            w.sb = sb;
            into.supp.offer(na / nb, key, w);
        }
        // sign change against the same B
        std::size_t sign_trials = k <= kEnumerateSubsets ? (std::size_t{1} << (k - 1)) : 64;
        for (std::size_t t = 0; t < sign_trials; ++t) {
            Vector theta(k);
            for (std::size_t i = 0; i < k; ++i) {
                bool flip = k <= kEnumerateSubsets ? ((t >> i) & 1U) != 0U : (rng && rng->sign() < 0.0);
                theta[i] = flip ? -1.0 : 1.0;
            }
            double nt = signed_sum_norm(basis, b, &theta, buf);
            SignedPair w{b, b, theta, sb};
            into.sign.offer(nt / nb, key, w);
        }
    };

    Pair best;
    Vector buf(basis.ambient_dim());
    std::size_t key = 0;
    for (const auto& s : structured_sets(basis)) {
        Vector ones(s.size(), 1.0);
        evaluate(nullptr, s, ones, key++, best, buf);
    }
    const std::size_t base = key;
    auto blocks = map_blocks<Pair>(opts.budget, 16, opts.threads, [&](std::size_t begin, std::size_t end) {
        Pair local;
        Vector b(basis.ambient_dim());
        for (std::size_t s = begin; s < end; ++s) {
            CounterRng rng(opts.seed, stream_id(0x5cc, s));
            IndexSet set = detail::random_subset(rng, d, 1 + rng.below(d));
            Vector signs = random_signs(rng, set.size());
            evaluate(&rng, set, signs, base + s, local, b);
        }
        return local;
    });
    for (const auto& b : blocks) {
        best.supp.merge(b.supp);
        best.sign.merge(b.sign);
    }
    SuccEstimate out;
    finish(out.suppression, best.supp.value, false, "suppression");
    const auto& ws = best.supp.payload;
    fill_witness(out.suppression, "succ_suppression", ws.a, ws.sa, ws.b, ws.sb);
    finish(out.sign_change, best.sign.value, false, "sign change");
    const auto& wc = best.sign.payload;
    fill_witness(out.sign_change, "succ_sign_change", wc.a, wc.sa, wc.b, wc.sb);
    return out;
}

} // namespace

SuccEstimate succ_constant(const Basis& basis, const SearchOptions& opts) {
    if (opts.mode == SearchMode::exact && basis.size() <= kSuccExactDim) return succ_exact(basis, opts.threads);
    return succ_sampled(basis, opts);
}

BoundEstimate super_democracy_constant(const Basis& basis, std::size_t m_max, const SearchOptions& opts) {
    const std::size_t d = basis.size();
    m_max = std::min(m_max, d);
    if (m_max == 0) throw InvalidInput("super-democracy needs m_max >= 1");
    // Per size: largest and smallest signed sums.
    struct Ext {
        std::vector<Best<SignedPair>> hi;
        std::vector<Worst<SignedPair>> lo;
    };
    auto make = [&] { return Ext{std::vector<Best<SignedPair>>(m_max + 1), std::vector<Worst<SignedPair>>(m_max + 1)}; };
    Ext ext = make();
    bool exhaustive = false;
    Vector buf(basis.ambient_dim());
    auto offer = [&](Ext& into, const IndexSet& s, const Vector& signs, std::size_t key, Vector& b) {
        if (s.empty() || s.size() > m_max) return;
        double v = signed_sum_norm(basis, s, &signs, b);
        SignedPair w{s, {}, signs, {}};
        into.hi[s.size()].offer(v, key, w);
        into.lo[s.size()].offer(v, key, w);
    };

    if (opts.mode == SearchMode::exact && d <= kSuccExactDim) {
        Ternary tern(d);
        Vector norms = all_signed_norms(basis, tern, opts.threads);
        IndexSet s;
        Vector signs;
        for (std::size_t c = 1; c < tern.count(); ++c) {
            tern.decode(c, s, signs);
            if (s.size() > m_max) continue;
            SignedPair w{s, {}, signs, {}};
            ext.hi[s.size()].offer(norms[c], c, w);
            ext.lo[s.size()].offer(norms[c], c, w);
        }
        exhaustive = true;
    } else {
        std::size_t key = 0;
        for (const auto& s : structured_sets(basis)) {
            Vector ones(s.size(), 1.0), alt(s.size());
            for (std::size_t i = 0; i < s.size(); ++i) alt[i] = i % 2 == 0 ? 1.0 : -1.0;
            offer(ext, s, ones, key++, buf);
            offer(ext, s, alt, key++, buf);
        }
        const std::size_t base = key;
        auto blocks = map_blocks<Ext>(opts.budget, 256, opts.threads, [&](std::size_t begin, std::size_t end) {
            Ext local = make();
            Vector b(basis.ambient_dim());
            for (std::size_t s = begin; s < end; ++s) {
                CounterRng rng(opts.seed, stream_id(0x5d, s));
                IndexSet set = detail::random_subset(rng, d, 1 + rng.below(m_max));
                offer(local, set, random_signs(rng, set.size()), base + s, b);
            }
            return local;
        });
        for (const auto& b : blocks)
            for (std::size_t k = 1; k <= m_max; ++k) {
                ext.hi[k].merge(b.hi[k]);
                ext.lo[k].merge(b.lo[k]);
            }
    }

    Best<SignedPair> best;
    for (std::size_t k = 1; k <= m_max; ++k) {
        if (ext.hi[k].key == std::numeric_limits<std::size_t>::max() || !(ext.lo[k].value > 0.0)) continue;
        SignedPair w{ext.hi[k].payload.a, ext.lo[k].payload.a, ext.hi[k].payload.sa, ext.lo[k].payload.sa};
        best.offer(ext.hi[k].value / ext.lo[k].value, k, w);
    }
    BoundEstimate out;
    finish(out, best.value, exhaustive, "super-democracy");
    fill_witness(out, "super_democracy", best.payload.a, best.payload.sa, best.payload.b, best.payload.sb);
    return out;
}

// ---------------------------------------------------------------------------
// Profile

SlopeFit loglog_slope(const std::vector<double>& y) {
    SlopeFit fit;
    const std::size_t m_max = y.size();
    fit.m_lo = std::max<std::size_t>(2, m_max / 4);
    fit.m_hi = m_max;
    if (fit.m_lo >= fit.m_hi) return fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t m = fit.m_lo; m <= fit.m_hi; ++m) {
        if (!(y[m - 1] > 0.0)) continue;
        double lx = std::log(static_cast<double>(m)), ly = std::log(y[m - 1]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return fit;
    double dn = static_cast<double>(n);
    double den = dn * sxx - sx * sx;
    fit.slope = (dn * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / dn;
    double ss = 0.0;
    for (std::size_t m = fit.m_lo; m <= fit.m_hi; ++m) {
        if (!(y[m - 1] > 0.0)) continue;
        double e = std::log(y[m - 1]) - fit.intercept - fit.slope * std::log(static_cast<double>(m));
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / dn);
    return fit;
}

DemocracyProfile democracy_profile(const Basis& basis, std::size_t m_max, const SearchOptions& opts) {
    DemocracyProfile prof;
    prof.rows = democracy_table(basis, m_max, opts);
    prof.succ = succ_constant(basis, opts);
    prof.super_democracy = super_democracy_constant(basis, m_max, opts);
    prof.quasi_greedy = quasi_greedy_constant(basis, opts);
    std::vector<double> u, l;
    for (const auto& r : prof.rows) {
        u.push_back(r.phi_u.lower);
        l.push_back(r.phi_l.upper);
        if (r.phi_l.upper > 0.0) prof.max_ratio = std::max(prof.max_ratio, r.phi_u.lower / r.phi_l.upper);
    }
    prof.slope_u = loglog_slope(u);
    prof.slope_l = loglog_slope(l);
    prof.democratic = std::fabs(prof.slope_u.slope - prof.slope_l.slope) <= kDemocraticSlopeGap;
    prof.almost_greedy = std::isfinite(prof.quasi_greedy.lower) && prof.democratic;
    return prof;
}

std::string profile_to_csv(const DemocracyProfile& profile) {
    std::ostringstream os;
    os << "m,phi_u_lo,phi_u_hi,phi_l_lo,phi_l_hi,witness_u,witness_l\n";
    for (const auto& r : profile.rows) {
        os << r.m << ',' << format_double(r.phi_u.lower) << ',' << format_double(r.phi_u.upper) << ','
           << format_double(r.phi_l.lower) << ',' << format_double(r.phi_l.upper) << ','
           << format_set_compact(r.phi_u.witness.set_a) << ',' << format_set_compact(r.phi_l.witness.set_a) << '\n';
    }
    return os.str();
}

namespace {

nlohmann::ordered_json one_based(const IndexSet& s) {
    auto arr = nlohmann::ordered_json::array();
    for (auto n : s) arr.push_back(n + 1);
    return arr;
}

nlohmann::ordered_json num(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

nlohmann::ordered_json estimate_json(const BoundEstimate& e) {
    nlohmann::ordered_json j;
    j["lower"] = num(e.lower);
    j["upper"] = num(e.upper);
    j["upper_certified"] = e.upper_certified;
    j["heuristic"] = e.heuristic;
    j["note"] = e.note;
    nlohmann::ordered_json w;
    w["kind"] = e.witness.kind;
    if (!e.witness.set_a.empty()) w["set_a"] = one_based(e.witness.set_a);
    if (!e.witness.signs_a.empty()) w["signs_a"] = e.witness.signs_a;
    if (!e.witness.set_b.empty()) w["set_b"] = one_based(e.witness.set_b);
    if (!e.witness.signs.empty()) w["signs"] = e.witness.signs;
    if (!e.witness.f.empty()) w["f"] = e.witness.f;
    if (e.witness.m != 0) w["m"] = e.witness.m;
    j["witness"] = w;
    return j;
}

nlohmann::ordered_json slope_json(const SlopeFit& s) {
    return {{"slope", s.slope}, {"intercept", s.intercept}, {"residual", s.residual}, {"m_lo", s.m_lo}, {"m_hi", s.m_hi}};
}

} // namespace

std::string profile_to_json(const DemocracyProfile& profile) {
    nlohmann::ordered_json j;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : profile.rows) {
        nlohmann::ordered_json row;
        row["m"] = r.m;
        row["phi_u"] = estimate_json(r.phi_u);
        row["phi_l"] = estimate_json(r.phi_l);
        rows.push_back(row);
    }
    j["rows"] = rows;
    j["succ_suppression"] = estimate_json(profile.succ.suppression);
    j["succ_sign_change"] = estimate_json(profile.succ.sign_change);
    j["super_democracy"] = estimate_json(profile.super_democracy);
    j["quasi_greedy"] = estimate_json(profile.quasi_greedy);
    j["slope_u"] = slope_json(profile.slope_u);
    j["slope_l"] = slope_json(profile.slope_l);
    j["max_ratio"] = num(profile.max_ratio);
    j["democratic"] = profile.democratic;
    j["almost_greedy"] = profile.almost_greedy;
    return j.dump(2) + "\n";
}

} // namespace qgreedy
