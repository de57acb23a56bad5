#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qgreedy/bootstrap.hpp"
#include "qgreedy/error.hpp"
#include "qgreedy/rng.hpp"

using namespace qgreedy;

TEST_SUITE("bootstrap") {
    TEST_CASE("harmonic numbers") {
        auto h = harmonic(4);
        CHECK(h.at(1) == 1.0);
        CHECK(h.at(2) == 1.5);
        CHECK(h.at(4) == doctest::Approx(25.0 / 12.0).epsilon(1e-15));
    }

    TEST_CASE("step examples") {
        GrowthSequence ones{Vector(4, 1.0), "ones"};
        CHECK(bootstrap_step(ones).at(4) == doctest::Approx(2.0).epsilon(1e-15));
        GrowthSequence roots{Vector{1.0, std::sqrt(2.0)}, "roots"};
        CHECK(bootstrap_step(roots).at(2) == doctest::Approx(2.0 / std::sqrt(1.5)).epsilon(1e-15));
        CHECK_THROWS_AS(bootstrap_step(GrowthSequence{Vector{1.0, 0.0}, "bad"}), InvalidInput);
        CHECK_THROWS_AS(bootstrap_step(GrowthSequence{Vector{1.0, -2.0}, "bad"}), InvalidInput);
    }

    TEST_CASE("homogeneity and monotone comparison") {
        for (std::uint64_t t = 0; t < 50; ++t) {
            CounterRng rng(70, t);
            std::size_t M = 1 + rng.below(40);
            Vector s(M), s2(M), big(M);
            for (std::size_t i = 0; i < M; ++i) {
                s[i] = 0.1 + 10 * rng.uniform();
                s2[i] = 2.0 * s[i];
                big[i] = s[i] + rng.uniform();
            }
            auto t1 = bootstrap_step({s, ""});
            auto t2 = bootstrap_step({s2, ""});
            auto tb = bootstrap_step({big, ""});
            for (std::size_t m = 1; m <= M; ++m) {
                CHECK(t2.at(m) == doctest::Approx(2.0 * t1.at(m)).epsilon(1e-14));
                CHECK(t1.at(m) <= tb.at(m));
            }
        }
    }

    TEST_CASE("chain against long double oracle") {
        auto chain = bootstrap_chain(2000, 3);
        REQUIRE(chain.size() == 4);
        std::vector<long double> s(2000, 1.0L);
        for (std::size_t k = 1; k <= 3; ++k) {
            s = oracle::feedback(s);
            for (std::size_t m = 1; m <= 2000; ++m)
                CHECK(chain[k].at(m) == doctest::Approx(static_cast<double>(s[m - 1])).epsilon(1e-13));
        }
        auto h = harmonic(2000);
        for (std::size_t m = 1; m <= 2000; ++m) {
            CHECK(chain[0].at(m) == 1.0);
            CHECK(chain[1].at(m) == doctest::Approx(std::sqrt(double(m))).epsilon(1e-13));
            CHECK(chain[2].at(m) == doctest::Approx(m / std::sqrt(h.at(m))).epsilon(1e-13));
        }
        for (std::size_t m = 2; m <= 2000; ++m) CHECK(chain[3].at(m) / m <= chain[3].at(m - 1) / (m - 1));
    }

    TEST_CASE("csv layout") {
        auto csv = chain_to_csv(bootstrap_chain(2, 2));
        CHECK(csv.rfind("m,stage0,stage1,stage2,stage2_over_m\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
        auto zero = chain_to_csv(bootstrap_chain(3, 0));
        CHECK(zero.rfind("m,stage0,stage0_over_m\n1,1,1\n2,1,", 0) == 0);
    }
}
