#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qgreedy/error.hpp"
#include "qgreedy/greedy.hpp"
#include "qgreedy/rng.hpp"

using namespace qgreedy;

namespace {

Basis make(const std::string& name, std::size_t d, double p = 0.5) {
    ZooParams zp;
    zp.dim = d;
    zp.p = p;
    return zoo(name, zp);
}

Vector e(std::size_t dim, std::size_t j) {
    Vector v(dim, 0.0);
    v[j] = 1.0;
    return v;
}

} // namespace

TEST_SUITE("greedy") {
    TEST_CASE("greedy sets and tie rule") {
        CHECK(greedy_set_of_coefficients(Vector{1, 2, 2, 2}, 2) == IndexSet{1, 2});
        CHECK(greedy_set_of_coefficients(Vector{0.5, -2, 2, 1}, 2) == IndexSet{1, 2});
        CHECK(greedy_set_of_coefficients(Vector{0.5, -2, 2, 1}, 0).empty());
        CHECK_THROWS_AS(greedy_set_of_coefficients(Vector{1, 2}, 3), InvalidInput);
        CHECK(greedy_ordering(Vector{1, 1, 3, -3}) == std::vector<std::size_t>{2, 3, 0, 1});
    }

    TEST_CASE("ordering invariant and nesting") {
        for (std::size_t t = 0; t < 100; ++t) {
            CounterRng rng(20, t);
            Vector c(10);
            for (auto& x : c) x = static_cast<double>(rng.below(4)) * rng.sign();  // many ties
            auto order = greedy_ordering(c);
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                double a = std::fabs(c[order[i]]), b = std::fabs(c[order[i + 1]]);
                CHECK((a > b || (a == b && order[i] < order[i + 1])));
            }
            for (std::size_t m = 0; m < 10; ++m) {
                auto A = greedy_set_of_coefficients(c, m), B = greedy_set_of_coefficients(c, m + 1);
                CHECK(std::includes(B.begin(), B.end(), A.begin(), A.end()));
            }
        }
    }

    TEST_CASE("greedy approximation") {
        auto unit = make("unit", 3);
        CHECK(greedy_approximation(unit, Vector{3, -1, 2}, 2) == Vector{3, 0, 2});
        CHECK(greedy_approximation(unit, Vector{3, -1, 2}, 3) == Vector{3, -1, 2});
        auto diff = make("difference", 3);
        CHECK(greedy_approximation(diff, e(3, 2), 1) == Vector{1, 0, 0});
        auto pert = make("perturbed_unit", 8);
        for (std::size_t t = 0; t < 30; ++t) {
            CounterRng rng(21, t);
            std::normal_distribution<double> g;
            Vector f(8);
            for (auto& x : f) x = g(rng);
            auto full = greedy_approximation(pert, f, 8);
            for (std::size_t j = 0; j < 8; ++j) CHECK(full[j] == doctest::Approx(f[j]).epsilon(1e-12).scale(1));
            for (std::size_t m = 0; m <= 8; ++m) {
                auto gm = greedy_approximation(pert, f, m);
                auto gg = greedy_approximation(pert, gm, m);
                for (std::size_t j = 0; j < 8; ++j) CHECK(gg[j] == doctest::Approx(gm[j]).epsilon(1e-12).scale(1));
            }
        }
    }

    TEST_CASE("restricted truncation") {
        auto unit = make("unit", 3);
        CHECK(restricted_truncation(unit, Vector{3, -1, 2}, {0, 2}) == Vector{2, 0, 2});
        auto u2 = make("unit", 2);
        CHECK(restricted_truncation(u2, Vector{0, 5}, {0, 1}) == Vector{0, 0});
        CHECK(restricted_truncation(u2, Vector{-3, -3}, {0, 1}) == Vector{-3, -3});
        CHECK(restricted_truncation(u2, Vector{-3, -3}, {}) == Vector{0, 0});
        auto pert = make("perturbed_unit", 6);
        CounterRng rng(22, 0);
        std::normal_distribution<double> g;
        Vector f(6);
        for (auto& x : f) x = g(rng);
        IndexSet A{0, 2, 5};
        auto c = coefficient_transform(pert, restricted_truncation(pert, f, A));
        auto cf = coefficient_transform(pert, f);
        double level = std::min({std::fabs(cf[0]), std::fabs(cf[2]), std::fabs(cf[5])});
        for (std::size_t n = 0; n < 6; ++n) {
            bool in = n == 0 || n == 2 || n == 5;
            CHECK(std::fabs(c[n]) == doctest::Approx(in ? level : 0.0).epsilon(1e-12).scale(1));
        }
    }

    TEST_CASE("truncation continuity on the unit basis") {
        auto u2 = make("unit", 2);
        for (double z : {0.9, 0.99, 0.999999}) {
            Vector f{1, z};
            double r = lp_gauge(truncation_operator(u2, f, 2), 0.5) / lp_gauge(f, 0.5);
            CHECK(r <= 1.0);
            CHECK(r >= z);
        }
    }

    TEST_CASE("constants on the unit basis") {
        SearchOptions opts;
        opts.budget = 2000;
        auto u = make("unit", 6);
        auto q = quasi_greedy_constant(u, opts);
        auto t = truncation_constant(u, opts);
        CHECK(q.lower == 1.0);
        CHECK(t.lower == 1.0);
        CHECK(q.upper == kInf);
        CHECK(q.heuristic);
        SearchOptions zero;
        zero.budget = 0;
        CHECK(quasi_greedy_constant(make("difference", 6), zero).lower == 1.0);
    }

    TEST_CASE("difference basis quasi-greedy lower bound approaches 16") {
        auto diff = make("difference", 8);
        SearchOptions opts;
        opts.budget = 2000;
        auto q = quasi_greedy_constant(diff, opts);
        CHECK(q.lower >= 16.0 * (1 - 1e-4));
        // witness reproduces the value
        auto gm = greedy_approximation(diff, q.witness.f, q.witness.m);
        CHECK(lp_gauge(gm, 0.5) / lp_gauge(q.witness.f, 0.5) == doctest::Approx(q.lower).epsilon(1e-12));

        // explicit tie-perturbed vectors
        for (double eta : {1e-6, 1e-10}) {
            Vector c{1, 1 + eta, 1, 1 + eta};
            auto b4 = make("difference", 4);
            Vector f = synthesize(b4, c);
            CHECK(greedy_set(b4, f, 2) == IndexSet{1, 3});
            double r = lp_gauge(greedy_approximation(b4, f, 2), 0.5) / lp_gauge(f, 0.5);
            CHECK(r < 16.0 * (1 + eta));
            if (eta == 1e-10) CHECK(r >= 16.0 * (1 - 1e-4));
        }

        auto tr = truncation_constant(diff, opts);
        CHECK(tr.lower >= 16.0 * (1 - 1e-4));
    }

    TEST_CASE("conditionality profile") {
        SearchOptions exact;
        exact.mode = SearchMode::exact;
        auto unit = conditionality_growth_profile(make("unit", 8), 8, exact);
        for (const auto& r : unit) {
            CHECK(r.lower == 1.0);
            CHECK(r.upper == 1.0);
            CHECK(r.exhaustive);
        }
        auto b = make("difference", 8);
        auto rows = conditionality_growth_profile(b, 8, exact);
        auto rows_d = oracle::difference_rows(8);
        auto duals = oracle::duals_of(rows_d);
        for (const auto& r : rows) {
            double want = 0.0;
            for (std::uint64_t mask = 1; mask < 256; ++mask)
                if (oracle::popcount(mask) <= r.m) want = std::max(want, oracle::projection_norm(rows_d, duals, mask, 0.5));
            CHECK(r.lower == doctest::Approx(want).epsilon(1e-12));
            CHECK(r.upper >= r.lower - kBoundTol);
            if (2 * r.m <= 8) CHECK(r.lower >= std::pow(2.0 * r.m, 2) - 1e-9);
            CHECK(r.diagnostic == doctest::Approx(r.lower / std::pow(1 + std::log(double(r.m)), 2.0)));
        }
        // monotone in m
        for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].lower >= rows[i - 1].lower);

        SearchOptions rnd;
        rnd.budget = 2000;
        auto sampled = conditionality_growth_profile(b, 8, rnd);
        for (std::size_t i = 0; i < 4; ++i) CHECK(sampled[i].lower >= std::pow(2.0 * (i + 1), 2) - 1e-9);
        for (std::size_t i = 0; i < sampled.size(); ++i) CHECK(sampled[i].lower <= rows[i].lower + 1e-9);
    }

    TEST_CASE("projection witness") {
        auto b = make("difference", 16);
        for (std::size_t m = 1; m <= 8; ++m) {
            IndexSet evens;
            for (std::size_t k = 1; k <= m; ++k) evens.push_back(2 * k - 1);
            Vector f = e(16, 2 * m - 1);
            double v = lp_gauge(coordinate_projection(b, evens, f), 0.5);
            CHECK(v == std::pow(2.0 * m, 2));
            CHECK(projection_norm_lower(b, evens) >= v);
        }
    }
}
