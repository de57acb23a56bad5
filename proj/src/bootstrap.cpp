#include "qgreedy/bootstrap.hpp"

#include <cmath>
#include <sstream>

#include "qgreedy/error.hpp"
#include "qgreedy/summation.hpp"

namespace qgreedy {

GrowthSequence harmonic(std::size_t M) {
    if (M == 0) throw InvalidInput("harmonic numbers need M >= 1");
    GrowthSequence h{Vector(M), "H"};
    CompensatedSum s;
    for (std::size_t n = 1; n <= M; ++n) {
        s += 1.0 / static_cast<double>(n);
        h.values[n - 1] = s.value();
    }
    return h;
}

GrowthSequence bootstrap_step(const GrowthSequence& s) {
    GrowthSequence t{Vector(s.size()), "step(" + s.label + ")"};
    CompensatedSum acc;
    for (std::size_t m = 1; m <= s.size(); ++m) {
        double v = s.values[m - 1];
        if (!(v > 0.0) || !std::isfinite(v))
            throw InvalidInput("growth sequence entry " + std::to_string(m) + " is not positive: " + format_double(v));
        acc += 1.0 / (v * v);
        t.values[m - 1] = static_cast<double>(m) / std::sqrt(acc.value());
    }
    return t;
}

std::vector<GrowthSequence> bootstrap_chain(std::size_t M, std::size_t iterations) {
    if (M == 0) throw InvalidInput("bootstrap chain needs M >= 1");
    std::vector<GrowthSequence> chain;
    chain.push_back(GrowthSequence{Vector(M, 1.0), "stage0"});
    for (std::size_t k = 1; k <= iterations; ++k) {
        chain.push_back(bootstrap_step(chain.back()));
        chain.back().label = "stage" + std::to_string(k);
    }
    return chain;
}

std::string chain_to_csv(const std::vector<GrowthSequence>& chain) {
    std::ostringstream os;
    const std::size_t K = chain.size() - 1;
    os << "m";
    for (std::size_t k = 0; k <= K; ++k) os << ",stage" << k;
    os << ",stage" << K << "_over_m\n";
    for (std::size_t m = 1; m <= chain.front().size(); ++m) {
        os << m;
        for (const auto& s : chain) os << ',' << format_double(s.at(m));
        os << ',' << format_double(chain.back().at(m) / static_cast<double>(m)) << '\n';
    }
    return os.str();
}

} // namespace qgreedy
