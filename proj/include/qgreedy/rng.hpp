#pragma once

#include <cstdint>
#include <limits>

namespace qgreedy {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based stream: output k of stream (seed, stream) is a pure function
// of the triple, so a sample drawn with a given index is the same no matter
// which thread draws it or in what order. Satisfies
// UniformRandomBitGenerator so it composes with <random> distributions.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 0x8bb84b93962eacc9ULL))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). Slight modulo bias is irrelevant for n << 2^64.
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : (*this)() % n; }

    double sign() { return ((*this)() >> 63) != 0U ? -1.0 : 1.0; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Independent stream identifiers for the different samplers inside one
// estimator, so adding a sampler never perturbs the others.
inline constexpr std::uint64_t stream_id(std::uint64_t tag, std::uint64_t index) {
    return splitmix64(tag * 0x2545f4914f6cdd1dULL) ^ index;
}

} // namespace qgreedy
