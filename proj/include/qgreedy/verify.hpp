#pragma once

// Property suites behind `qgreedy verify`.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qgreedy {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    std::string witness;  // dumped on failure
};

struct VerifyConfig {
    std::optional<double> p;  // suite default when empty
    std::size_t dim = 12;
    std::size_t trials = 0;   // 0 = suite default
    std::uint64_t seed = 0;
    std::size_t max_m = 1000000;
    std::size_t iters = 3;
    unsigned threads = 0;
};

std::vector<std::string> suite_names();

// Throws InvalidInput for an unknown suite.
std::vector<CheckResult> run_suite(const std::string& suite, const VerifyConfig& config);

} // namespace qgreedy
