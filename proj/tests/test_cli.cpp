#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "qgreedy/cli.hpp"

using qgreedy::run_cli;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "qgreedy");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("qgreedy_test_" + name);
}

} // namespace

TEST_SUITE("cli") {
    TEST_CASE("bootstrap output") {
        auto r = run({"bootstrap", "--max-m", "4", "--iters", "1"});
        CHECK(r.code == 0);
        auto l = lines(r.out);
        REQUIRE(l.size() == 5);
        CHECK(l[0] == "m,stage0,stage1,stage1_over_m");
        CHECK(l[2].rfind("2,1,1.414213562373095", 0) == 0);
        CHECK(l[4].rfind("4,1,2,", 0) == 0);

        auto r2 = run({"bootstrap", "--max-m", "2", "--iters", "2"});
        auto l2 = lines(r2.out);
        REQUIRE(l2.size() == 3);
        std::istringstream row(l2[2]);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
        CHECK(cells[3] == doctest::Approx(2.0 / std::sqrt(1.5)).epsilon(1e-15));

        auto r0 = run({"bootstrap", "--max-m", "3", "--iters", "0"});
        CHECK(lines(r0.out)[3] == "3,1,0.3333333333333333");
    }

    TEST_CASE("analyze unit basis") {
        auto r = run({"analyze", "--zoo", "unit", "--p", "0.5", "--dim", "10", "--max-m", "8", "--mode", "exact",
                      "--format", "csv"});
        CHECK(r.code == 0);
        auto l = lines(r.out);
        REQUIRE(l.size() == 9);
        CHECK(l[3].rfind("3,9,9,9,9,", 0) == 0);
        CHECK(l[8].rfind("8,64,64,64,64,", 0) == 0);
    }

    TEST_CASE("analyze difference basis verdict") {
        auto r = run({"analyze", "--zoo", "difference", "--p", "0.5", "--dim", "12", "--max-m", "6", "--budget", "300",
                      "--format", "json"});
        CHECK(r.code == 0);
        auto j = nlohmann::json::parse(r.out);
        CHECK(j["democratic"] == false);
        CHECK(std::string(j["verdict"]).rfind("not democratic", 0) == 0);
        for (const auto& row : j["conditionality"]) {
            double m = row["m"];
            CHECK(double(row["lower"]) >= 4 * m * m - 1e-9);
        }
    }

    TEST_CASE("exit codes") {
        CHECK(run({"analyze", "--zoo", "nosuch"}).code == 2);
        CHECK(run({"analyze", "--zoo", "unit", "--p", "-1"}).code == 2);
        CHECK(run({"analyze", "--zoo", "unit", "--mode", "fuzzy"}).code == 2);
        CHECK(run({"verify", "nosuch"}).code == 2);
        CHECK(run({"frobnicate"}).code == 2);
        CHECK(run({"zoo", "emit", "nosuch"}).code == 2);

        auto emitted = run({"zoo", "emit", "unit", "--dim", "3"});
        REQUIRE(emitted.code == 0);
        auto j = nlohmann::json::parse(emitted.out);
        j["duals"][1][2] = 0.5;
        auto path = temp_path("bad_duals.json");
        std::ofstream(path) << j.dump();
        auto bad = run({"analyze", "--basis", path.string()});
        CHECK(bad.code == 3);
        CHECK(bad.out.empty());
        CHECK(bad.err.find("x_2*(x_3)") != std::string::npos);
        std::filesystem::remove(path);
        CHECK(run({"analyze", "--basis", temp_path("missing.json").string()}).code == 2);
    }

    TEST_CASE("zoo round trip through a file") {
        auto emitted = run({"zoo", "emit", "perturbed_unit", "--dim", "5", "--seed", "4"});
        REQUIRE(emitted.code == 0);
        auto path = temp_path("pert.json");
        std::ofstream(path) << emitted.out;
        auto a = run({"analyze", "--basis", path.string(), "--mode", "exact", "--format", "csv"});
        auto b = run({"analyze", "--zoo", "perturbed_unit", "--dim", "5", "--seed", "4", "--mode", "exact", "--format", "csv"});
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        std::filesystem::remove(path);
    }

    TEST_CASE("verify suites") {
        CHECK(run({"verify", "lemma32", "--p", "0.5", "--trials", "500", "--seed", "7"}).code == 0);
        CHECK(run({"verify", "lemma33", "--trials", "50"}).code == 0);
        CHECK(run({"verify", "lemma34", "--trials", "5"}).code == 0);
        CHECK(run({"verify", "democracy-lp", "--p", "0.5", "--dim", "10"}).code == 0);
        CHECK(run({"verify", "succ", "--dim", "6"}).code == 0);
        auto b = run({"verify", "bootstrap", "--max-m", "10000", "--iters", "3"});
        CHECK(b.out.find("stage 1") != std::string::npos);
    }

    TEST_CASE("output independent of thread count") {
        for (const std::string mode : {"random", "exact"}) {
            std::vector<std::string> base = {"analyze", "--zoo", "perturbed_unit", "--dim", "10", "--max-m", "6",
                                             "--mode", mode, "--budget", "400", "--seed", "11", "--format", "csv"};
            auto one = base, four = base;
            one.insert(one.end(), {"--threads", "1"});
            four.insert(four.end(), {"--threads", "4"});
            auto a = run(one), b = run(four);
            CHECK(a.code == 0);
            CHECK(a.out == b.out);
        }
    }
}
