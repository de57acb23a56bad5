#include "qgreedy/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace qgreedy {

namespace {

std::string join_one_based(const IndexSet& set, char sep) {
    std::string out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i) out.push_back(sep);
        out += std::to_string(set[i] + 1);
    }
    return out;
}

} // namespace

std::string format_set(const IndexSet& set) { return "{" + join_one_based(set, ',') + "}"; }

std::string format_set_compact(const IndexSet& set) { return join_one_based(set, ';'); }

std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

IndexSet normalize_set(IndexSet set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    return set;
}

} // namespace qgreedy
