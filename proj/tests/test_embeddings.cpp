#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "qgreedy/embeddings.hpp"
#include "qgreedy/lorentz.hpp"

using namespace qgreedy;

namespace {

Basis make(const std::string& name, std::size_t d, double p) {
    ZooParams zp;
    zp.dim = d;
    zp.p = p;
    return zoo(name, zp);
}

} // namespace

TEST_SUITE("embeddings") {
    TEST_CASE("unit basis into weak Lorentz") {
        SearchOptions opts;
        opts.budget = 500;
        auto w = difference_weight(power_primitive(2.0, 10));
        auto r = embed_space_into_weak_lorentz(make("unit", 10, 0.5), w, opts);
        CHECK(r.constant.lower == doctest::Approx(1.0));
        CHECK(r.constant.upper == doctest::Approx(1.0));
        REQUIRE(r.table.size() == 10);
        for (const auto& row : r.table) {
            CHECK(row.s_m == doctest::Approx(double(row.m * row.m)));
            CHECK(row.s_m <= row.phi + 1e-9);
        }
    }

    TEST_CASE("unit basis from Lorentz") {
        SearchOptions opts;
        opts.budget = 500;
        auto l1 = embed_lorentz_into_space(make("unit", 8, 1.0), 1.0, Weight::constant(8), opts);
        CHECK(l1.constant.lower == doctest::Approx(1.0));
        CHECK(l1.constant.upper == doctest::Approx(1.0));

        auto w = difference_weight(power_primitive(2.0, 8));
        auto r = embed_lorentz_into_space(make("unit", 8, 0.5), 0.5, w, opts);
        CHECK(std::isfinite(r.constant.lower));
        CHECK(r.constant.lower >= 1.0 - 1e-12);
        for (const auto& row : r.table) {
            CHECK(row.phi <= row.s_m + 1e-9);
            CHECK(row.ratio == doctest::Approx(row.phi / row.s_m));
        }
    }

    TEST_CASE("difference basis has no weak Lorentz embedding at m^(1/p)") {
        SearchOptions opts;
        opts.budget = 200;
        double prev = 0.0;
        for (std::size_t d : {4, 8, 16}) {
            auto w = difference_weight(power_primitive(2.0, d));
            auto r = embed_space_into_weak_lorentz(make("difference", d, 0.5), w, opts);
            // f = e_d has coefficients (1,...,1): ||F f||_{inf,w} = s_d = d^2
            CHECK(r.constant.lower >= double(d * d) - 1e-9);
            CHECK(r.constant.lower > prev);
            prev = r.constant.lower;
            for (const auto& row : r.table) CHECK(row.phi == doctest::Approx(1.0));
        }
    }

    TEST_CASE("singleton weight reduction") {
        SearchOptions opts;
        opts.budget = 100;
        Vector w(6, 1e-12);
        w[0] = 3.0;
        auto b = make("perturbed_unit", 6, 0.5);
        auto r = embed_space_into_weak_lorentz(b, Weight(w), opts);
        CHECK(r.constant.lower <= (3.0 + 1e-11) * b.b() + 1e-9);
        CHECK(r.constant.lower <= r.constant.upper + 1e-9);
    }

    TEST_CASE("table csv") {
        SearchOptions opts;
        opts.budget = 10;
        auto r = embed_space_into_weak_lorentz(make("unit", 3, 0.5), difference_weight(power_primitive(2.0, 3)), opts);
        auto csv = embedding_table_csv(r);
        CHECK(csv.find("m,s_m,") == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    }
}
