#include "qgreedy/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "qgreedy/democracy.hpp"
#include "qgreedy/error.hpp"
#include "search_util.hpp"

namespace qgreedy {

using detail::Best;

namespace {

void require_weight(const Basis& basis, const Weight& w) {
    if (w.size() < basis.size())
        throw DimensionMismatch("weight has " + std::to_string(w.size()) + " entries, basis has " +
                                std::to_string(basis.size()));
}

// Intervals and alternating sets of every size, as coefficient indicators.
std::vector<Vector> indicator_candidates(std::size_t d) {
    std::vector<Vector> out;
    for (std::size_t k = 1; k <= d; ++k) {
        for (std::size_t start = 0; start + k <= d; ++start) {
            Vector c(d, 0.0);
            std::fill(c.begin() + static_cast<std::ptrdiff_t>(start), c.begin() + static_cast<std::ptrdiff_t>(start + k), 1.0);
            out.push_back(std::move(c));
        }
        for (std::size_t first = 0; first < 2; ++first) {
            Vector c(d, 0.0);
            std::size_t count = 0;
            for (std::size_t n = first; n < d && count < k; n += 2, ++count) c[n] = 1.0;
            if (count == k) out.push_back(std::move(c));
        }
    }
    return out;
}

template <typename Ratio>
BoundEstimate search(std::size_t length, const std::vector<Vector>& seeds, const Ratio& ratio, const SearchOptions& opts,
                     std::uint64_t tag) {
    Best<Vector> best;
    std::size_t key = 0;
    for (const auto& v : seeds) best.offer(ratio(v), key++, v);
    const std::size_t base = key;
    auto blocks = map_blocks<Best<Vector>>(opts.budget, 256, opts.threads, [&](std::size_t begin, std::size_t end) {
        Best<Vector> local;
        for (std::size_t s = begin; s < end; ++s) {
            CounterRng rng(opts.seed, stream_id(tag, s));
            std::normal_distribution<double> gauss;
            Vector v(length, 0.0);
            if (s % 2 == 0) {
                for (auto& x : v) x = gauss(rng);
            } else {
                // flat on a random support
                auto set = detail::random_subset(rng, length, 1 + rng.below(length));
                for (auto n : set) v[n] = rng.sign();
            }
            local.offer(ratio(v), base + s, v);
        }
        return local;
    });
    for (const auto& b : blocks) best.merge(b);
    if (opts.budget > 0) {
        Vector v = best.payload;
        double r = detail::coordinate_ascent(v, ratio);
        if (r > best.value) best.offer(r, base + opts.budget, v);
    }
    BoundEstimate out;
    out.lower = best.value;
    out.witness.f = best.payload;
    return out;
}

} // namespace

EmbeddingReport embed_space_into_weak_lorentz(const Basis& basis, const Weight& w, const SearchOptions& opts) {
    require_weight(basis, w);
    const std::size_t d = basis.size();
    const std::size_t dim = basis.ambient_dim();
    EmbeddingReport rep;
    rep.direction = EmbeddingDirection::space_into_weak_lorentz;
    rep.primitive = primitive_weight(w, d).values();

    Vector coeffs(d);
    auto ratio = [&](const Vector& f) {
        double nf = basis.space().gauge_unchecked(f);
        if (!(nf > 0.0)) return 0.0;
        basis.coefficients_into(f, coeffs);
        return lorentz_gauge(coeffs, kInf, w) / nf;
    };
    std::vector<Vector> seeds;
    for (std::size_t j = 0; j < dim; ++j) {
        Vector e(dim, 0.0);
        e[j] = 1.0;
        seeds.push_back(std::move(e));
    }
    for (const auto& c : indicator_candidates(d)) seeds.push_back(synthesize(basis, c));

    // The ratio functor owns a shared buffer, so the sampled part runs serially.
    SearchOptions serial = opts;
    serial.threads = 1;
    rep.constant = search(dim, seeds, ratio, serial, 0xe1);
    rep.constant.witness.kind = "F(f) in d_inf(w)";

    double s_max = *std::max_element(rep.primitive.begin(), rep.primitive.end());
    if (basis.is_unit_vector_system() && basis.space().is_lp() && basis.space().exponent() < kInf) {
        // Chebyshev: a_n* <= n^{-1/p} ||f||_p, equality on flat vectors.
        double p = basis.space().exponent();
        double cheb = 0.0;
        for (std::size_t n = 1; n <= d; ++n)
            cheb = std::max(cheb, rep.primitive[n - 1] / std::pow(static_cast<double>(n), 1.0 / p));
        rep.constant.upper = std::max(cheb, rep.constant.lower);
        rep.constant.upper_certified = true;
        rep.constant.note = "upper bound max_n s_n / n^(1/p)";
    } else if (basis.dual_norms_exact()) {
        rep.constant.upper = std::max(s_max * basis.b(), rep.constant.lower);
        rep.constant.upper_certified = true;
        rep.constant.note = "upper bound b * max_n s_n";
    } else {
        rep.constant.note = "no certified upper bound";
    }
    rep.constant.heuristic = !(rep.constant.upper_certified && rep.constant.upper <= rep.constant.lower + kBoundTol);

    for (const auto& row : democracy_table(basis, d, opts)) {
        double s = rep.primitive[row.m - 1];
        double phi = row.phi_l.upper;
        rep.table.push_back({row.m, s, phi, phi > 0.0 ? s / phi : kInf});
    }
    return rep;
}

EmbeddingReport embed_lorentz_into_space(const Basis& basis, double q, const Weight& w, const SearchOptions& opts) {
    require_weight(basis, w);
    if (!(q > 0.0)) throw InvalidInput("Lorentz exponent must be positive, got " + format_double(q));
    const std::size_t d = basis.size();
    EmbeddingReport rep;
    rep.direction = EmbeddingDirection::lorentz_into_space;
    rep.q = q;
    rep.primitive = primitive_weight(w, d).values();

    Vector f(basis.ambient_dim());
    auto ratio = [&](const Vector& g) {
        double ng = lorentz_gauge(g, q, w);
        if (!(ng > 0.0)) return 0.0;
        basis.synthesize_into(g, f);
        return basis.space().gauge_unchecked(f) / ng;
    };
    SearchOptions serial = opts;
    serial.threads = 1;
    rep.constant = search(d, indicator_candidates(d), ratio, serial, 0xe2);
    rep.constant.witness.kind = "g in d_q(w)";

    // On l_p, p >= 1, with the unit basis and q = 1: ||g||_p <= ||g||_1 <=
    // sum a_n* w_n / min w.
    if (basis.is_unit_vector_system() && basis.space().is_lp() && basis.space().exponent() >= 1.0 && q == 1.0) {
        double wmin = *std::min_element(w.values().begin(), w.values().begin() + static_cast<std::ptrdiff_t>(d));
        rep.constant.upper = std::max(1.0 / wmin, rep.constant.lower);
        rep.constant.upper_certified = true;
        rep.constant.note = "upper bound 1 / min w";
    } else {
        rep.constant.note = "no certified upper bound";
    }
    rep.constant.heuristic = !(rep.constant.upper_certified && rep.constant.upper <= rep.constant.lower + kBoundTol);

    for (const auto& row : democracy_table(basis, d, opts)) {
        double s = rep.primitive[row.m - 1];
        double phi = row.phi_u.lower;
        rep.table.push_back({row.m, s, phi, phi / s});
    }
    return rep;
}

std::string embedding_table_csv(const EmbeddingReport& report) {
    std::ostringstream os;
    bool into = report.direction == EmbeddingDirection::space_into_weak_lorentz;
    os << "m,s_m," << (into ? "phi_l" : "phi_u") << ",ratio\n";
    for (const auto& r : report.table)
        os << r.m << ',' << format_double(r.s_m) << ',' << format_double(r.phi) << ',' << format_double(r.ratio) << '\n';
    return os.str();
}

} // namespace qgreedy
