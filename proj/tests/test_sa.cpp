#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qgreedy/error.hpp"
#include "qgreedy/rng.hpp"
#include "qgreedy/sa_machinery.hpp"

using namespace qgreedy;

namespace {

PairFamily unit_family(std::size_t dim, std::size_t m) {
    PairFamily fam;
    fam.p = 0.5;
    for (std::size_t n = 0; n < m; ++n) {
        Vector e(dim, 0.0);
        e[n] = 1.0;
        fam.x.push_back(e);
        fam.xstar.push_back(e);
    }
    return fam;
}

std::vector<Vector> gaussian_vectors(std::size_t k, std::size_t dim, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    std::normal_distribution<double> g;
    std::vector<Vector> out(k, Vector(dim));
    for (auto& v : out)
        for (auto& x : v) x = g(rng);
    return out;
}

} // namespace

TEST_SUITE("sa_machinery") {
    TEST_CASE("strongly absolute function") {
        CHECK(strongly_absolute_function(0.5, 0.5) == doctest::Approx(2.0));
        CHECK(strongly_absolute_function(0.5, 1.0) == 1.0);
        CHECK(strongly_absolute_function(2.0 / 3.0, 0.125) == doctest::Approx(64.0));
        CHECK_THROWS_AS(strongly_absolute_function(1.0, 0.5), InvalidInput);
        CHECK_THROWS_AS(strongly_absolute_function(0.5, 0.0), InvalidInput);
    }

    TEST_CASE("strongly absolute check examples") {
        auto c = strongly_absolute_check(Vector{1, 1}, 0.5, 1.0);
        CHECK(c.lhs == doctest::Approx(2.0));
        CHECK(c.rhs == doctest::Approx(4.0));
        CHECK(c.holds);
        auto z = strongly_absolute_check(Vector{0, 0, 0}, 0.5, 1.0);
        CHECK(z.lhs == 0.0);
        CHECK(z.holds);
        for (double t : {1e-3, 1.0, 1e3}) CHECK(strongly_absolute_check(Vector{t, 0}, 0.5, 0.5).holds);
    }

    TEST_CASE("strongly absolute inequality on random vectors") {
        std::size_t violations = 0;
        for (double p : {0.3, 0.5, 0.7})
            for (double eps : {0.1, 1.0, 10.0})
                for (std::uint64_t t = 0; t < 2000; ++t) {
                    CounterRng rng(31, t);
                    std::size_t dim = 1 + rng.below(20);
                    Vector f(dim);
                    std::normal_distribution<double> g;
                    for (auto& x : f) x = g(rng) * std::exp(3.0 * g(rng));
                    if (!strongly_absolute_check(f, p, eps).holds) ++violations;
                }
        CHECK(violations == 0);
    }

    TEST_CASE("omega set") {
        auto fam = unit_family(6, 3);
        CHECK(omega_set(fam, 1.0) == IndexSet{0, 1, 2});
        CHECK(omega_set(fam, 0.3) == IndexSet{0, 1, 2});
        CHECK(omega_set(fam, 1.5).empty());

        PairFamily one;
        one.p = 0.5;
        one.x = {Vector{0.8, 0.6}};
        one.xstar = {Vector{1.25, 0.0}};
        CHECK(omega_set(one, 0.9) == IndexSet{0});

        auto rf = random_normalized_family(8, 5, 0.5, 3, 0);
        IndexSet prev;
        for (double delta : {4.0, 1.0, 0.5, 0.1, 0.01, 1e-4}) {
            auto cur = omega_set(rf, delta);
            CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
            prev = cur;
        }
    }

    TEST_CASE("counting parameters") {
        auto w = woidea_parameters(2, 1, 1, 1, 1, 0.5);
        CHECK(w.eps == doctest::Approx(0.5));
        CHECK(w.a_eps == doctest::Approx(2.0));
        CHECK(w.delta == doctest::Approx(0.25));
        auto w4 = woidea_parameters(2, 2, 2, 1, 1, 0.5);
        CHECK(w4.eps == doctest::Approx(0.125));
        CHECK(w4.a_eps == doctest::Approx(8.0));
        CHECK(w4.delta == doctest::Approx(1.0 / 16));
        auto near = woidea_parameters(1.0 + 1e-9, 1, 1, 1, 1, 0.5);
        CHECK(near.eps < 1e-8);
        CHECK(near.delta < 1e-8);
        CHECK_THROWS_AS(woidea_parameters(1.0, 1, 1, 1, 1, 0.5), InvalidInput);
    }

    TEST_CASE("counting inequality") {
        for (std::size_t m : {1, 3, 6}) {
            auto r = woidea_verify(unit_family(6, m), 2.0);
            CHECK(r.count == m);
            CHECK(r.bound == doctest::Approx(2.0 * m));
            CHECK(r.holds);
        }
        auto r3 = woidea_verify(unit_family(4, 4), 3.0);
        CHECK(r3.bound == doctest::Approx(12.0));

        std::size_t violations = 0;
        for (std::uint64_t t = 0; t < 300; ++t) {
            CounterRng rng(32, t);
            std::size_t dim = 2 + rng.below(7);
            std::size_t size = 1 + rng.below(dim);
            auto fam = random_normalized_family(dim, size, 0.5, 32, t);
            fam.validate();
            auto r = woidea_verify(fam, 2.0);
            // lambda_j against the definition
            for (std::size_t j = 0; j < dim; ++j) {
                double l = 0.0;
                for (std::size_t n = 0; n < size; ++n) l += fam.xstar[n][j] * fam.x[n][j];
                CHECK(r.lambda[j] == doctest::Approx(l).epsilon(1e-12).scale(1));
            }
            if (!r.holds) ++violations;
        }
        CHECK(violations == 0);

        auto bad = unit_family(3, 2);
        bad.xstar[1][1] = 2.0;
        CHECK_THROWS_AS(bad.validate(), PreconditionError);
        CHECK_THROWS_AS(woidea_verify(bad, 2.0), PreconditionError);
    }

    TEST_CASE("square function examples") {
        std::vector<Vector> units = {Vector{1, 0, 0}, Vector{0, 1, 0}, Vector{0, 0, 1}};
        auto u = khintchine_square_function(units, 0.5, AverageMode::exact);
        CHECK(u.lhs == doctest::Approx(3.0));
        CHECK(u.rhs == doctest::Approx(3.0));
        CHECK(u.ratio == doctest::Approx(1.0));

        std::vector<Vector> pair = {Vector{1, 1}, Vector{1, -1}};
        auto k = khintchine_square_function(pair, 0.5, AverageMode::exact);
        CHECK(k.lhs == doctest::Approx(std::sqrt(2.0)));
        CHECK(k.rhs == doctest::Approx(2.0 * std::pow(2.0, 0.25)));
        CHECK(k.ratio == doctest::Approx(0.5946).epsilon(1e-4));

        CHECK_THROWS_AS(khintchine_square_function(pair, 0.5, AverageMode::mc, 0), InvalidInput);
    }

    TEST_CASE("square function against brute force and Monte Carlo") {
        for (std::uint64_t t = 0; t < 10; ++t) {
            auto vs = gaussian_vectors(2 + t, 6, 40 + t);
            auto ex = khintchine_square_function(vs, 0.5, AverageMode::exact);
            CHECK(ex.lhs == doctest::Approx(oracle::sign_average(vs, 0.5)).epsilon(1e-10));
            CHECK(ex.rhs == doctest::Approx(oracle::square_function(vs, 0.5)).epsilon(1e-12));
            CHECK(ex.ratio >= 0.3);
            CHECK(ex.ratio <= 3.5);
        }
        auto vs = gaussian_vectors(10, 8, 50);
        auto ex = khintchine_square_function(vs, 0.5, AverageMode::exact);
        auto mc = khintchine_square_function(vs, 0.5, AverageMode::mc, 20000, 9);
        CHECK(mc.std_error > 0.0);
        CHECK(std::fabs(mc.lhs - ex.lhs) <= 3.0 * mc.std_error);
        // thread count does not change the Monte Carlo mean
        auto mc1 = khintchine_square_function(vs, 0.5, AverageMode::mc, 20000, 9, 1);
        auto mc4 = khintchine_square_function(vs, 0.5, AverageMode::mc, 20000, 9, 4);
        CHECK(mc1.lhs == mc4.lhs);
        CHECK(mc1.std_error == mc4.std_error);
    }

    TEST_CASE("square function invariances") {
        auto vs = gaussian_vectors(7, 5, 60);
        double base = khintchine_square_function(vs, 0.5, AverageMode::exact).lhs;
        auto flipped = vs;
        for (auto& x : flipped[3]) x = -x;
        CHECK(khintchine_square_function(flipped, 0.5, AverageMode::exact).lhs == doctest::Approx(base).epsilon(1e-12));
        auto perm = vs;
        std::reverse(perm.begin(), perm.end());
        CHECK(khintchine_square_function(perm, 0.5, AverageMode::exact).lhs == doctest::Approx(base).epsilon(1e-12));
    }

    TEST_CASE("chain helpers") {
        CHECK(chain_exponent(0.5) == doctest::Approx(6.0));
        CHECK(chain_weight(0.5, 1) == doctest::Approx(1.0));
        CHECK(chain_weight(0.5, 10) == doctest::Approx(100.0 / std::pow(1 + std::log(10.0), 6.0)));
        for (double p : {0.3, 0.5, 0.8})
            for (std::size_t m : {1, 7, 1000})
                for (double C1 : {1.0, 2.5}) {
                    double a = 1.3, b = 1.7, C2 = 0.9;
                    CHECK(chain_constant(p, a, b, C1, C2) * chain_weight(p, m) ==
                          doctest::Approx(chain_middle(p, a, b, C1, C2, m)).epsilon(1e-10));
                }
        double delta = chain_delta_bound(0.5, 1, 1, 1, 1);
        CHECK(delta == doctest::Approx(0.25));
    }

    TEST_CASE("chain check on concrete bases") {
        for (const std::string name : {"unit", "perturbed_unit"}) {
            ZooParams zp;
            zp.dim = 8;
            zp.p = 0.5;
            zp.seed = 2;
            auto b = zoo(name, zp);
            for (const IndexSet& A : {IndexSet{0}, IndexSet{0, 1, 2}, IndexSet{1, 3, 5, 7}, IndexSet{0, 1, 2, 3, 4, 5, 6, 7}}) {
                auto c = chain_check(b, A);
                CHECK(c.m == A.size());
                CHECK(c.counting);
                CHECK(c.column);
                CHECK(c.square);
                CHECK(c.final);
                CHECK(c.set_norm >= c.omega_estimate);
            }
        }
    }
}
