#pragma once

// Brute-force reference implementations. They share no code with the library
// beyond the Vector alias: plain loops, long double where cheap, full
// enumeration everywhere.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline double lp(const Vec& f, double p) {
    if (std::isinf(p)) {
        double m = 0;
        for (double x : f) m = std::max(m, std::fabs(x));
        return m;
    }
    long double s = 0;
    for (double x : f) s += std::pow(static_cast<long double>(std::fabs(x)), static_cast<long double>(p));
    return static_cast<double>(std::pow(s, 1.0L / p));
}

inline double block(const Vec& f, double p, const std::vector<std::size_t>& blocks) {
    Vec norms;
    std::size_t at = 0;
    for (auto b : blocks) {
        long double s = 0;
        for (std::size_t i = 0; i < b; ++i, ++at) s += static_cast<long double>(f[at]) * f[at];
        norms.push_back(static_cast<double>(std::sqrt(s)));
    }
    return lp(norms, p);
}

// Rows x_n; returns sum_{n in mask} sign_n x_n.
inline Vec combo(const Mat& rows, std::uint64_t mask, const Vec* signs = nullptr) {
    Vec out(rows.front().size(), 0.0);
    for (std::size_t n = 0; n < rows.size(); ++n)
        if ((mask >> n) & 1U)
            for (std::size_t j = 0; j < out.size(); ++j) out[j] += (signs ? (*signs)[n] : 1.0) * rows[n][j];
    return out;
}

inline std::size_t popcount(std::uint64_t m) {
    std::size_t c = 0;
    for (; m; m &= m - 1) ++c;
    return c;
}

// (phi_u(m), phi_l(m)) over all subsets of {0..d-1}.
inline std::pair<double, double> phi(const Mat& rows, std::size_t m, const std::function<double(const Vec&)>& gauge) {
    const std::size_t d = rows.size();
    double up = 0.0, low = INFINITY;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
        std::size_t k = popcount(mask);
        double v = gauge(combo(rows, mask));
        if (k <= m) up = std::max(up, v);
        if (k >= m) low = std::min(low, v);
    }
    return {up, low};
}

inline Mat identity(std::size_t d) {
    Mat m(d, Vec(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) m[i][i] = 1.0;
    return m;
}

// d_n = e_n - e_{n-1}
inline Mat difference_rows(std::size_t d) {
    Mat m(d, Vec(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        m[i][i] = 1.0;
        if (i > 0) m[i][i - 1] = -1.0;
    }
    return m;
}

// Inverse-transpose rows: duals with <dual_n, row_k> = delta, Gauss-Jordan.
inline Mat duals_of(const Mat& rows) {
    const std::size_t d = rows.size();
    // Solve M^T Y = I where M has rows x_n: dual_n is row n of (M^{-1})^T.
    Mat a(d, Vec(2 * d, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) a[i][j] = rows[j][i];
        a[i][d + i] = 1.0;
    }
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c; r < d; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        double x = a[c][c];
        for (auto& v : a[c]) v /= x;
        for (std::size_t r = 0; r < d; ++r)
            if (r != c) {
                double f = a[r][c];
                for (std::size_t j = 0; j < 2 * d; ++j) a[r][j] -= f * a[c][j];
            }
    }
    Mat out(d, Vec(d));
    for (std::size_t n = 0; n < d; ++n)
        for (std::size_t j = 0; j < d; ++j) out[n][j] = a[n][d + j];
    return out;
}

// ||S_A|| on l_p, p <= 1: max_j ||S_A e_j||.
inline double projection_norm(const Mat& rows, const Mat& duals, std::uint64_t mask, double p) {
    const std::size_t dim = rows.front().size();
    double best = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        Vec out(dim, 0.0);
        for (std::size_t n = 0; n < rows.size(); ++n)
            if ((mask >> n) & 1U)
                for (std::size_t i = 0; i < dim; ++i) out[i] += duals[n][j] * rows[n][i];
        best = std::max(best, lp(out, p));
    }
    return best;
}

// Suppression and sign-change constants by enumerating every B, signs on B,
// and every A subset of B.
inline std::pair<double, double> succ(const Mat& rows, const std::function<double(const Vec&)>& gauge) {
    const std::size_t d = rows.size();
    double supp = 0.0, sign = 0.0;
    for (std::uint64_t B = 1; B < (std::uint64_t{1} << d); ++B) {
        double hi = 0.0, lo = INFINITY;
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << d); ++s) {
            if (s & ~B) continue;
            Vec eps(d);
            for (std::size_t n = 0; n < d; ++n) eps[n] = ((s >> n) & 1U) ? -1.0 : 1.0;
            double nb = gauge(combo(rows, B, &eps));
            hi = std::max(hi, nb);
            lo = std::min(lo, nb);
            for (std::uint64_t A = B; A; A = (A - 1) & B) supp = std::max(supp, gauge(combo(rows, A, &eps)) / nb);
        }
        sign = std::max(sign, hi / lo);
    }
    return {supp, sign};
}

// Ave over all 2^k sign patterns of ||sum eps_n x_n||_p^p.
inline double sign_average(const Mat& vecs, double p) {
    const std::size_t k = vecs.size();
    long double total = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << k); ++s) {
        Vec eps(k);
        for (std::size_t n = 0; n < k; ++n) eps[n] = ((s >> n) & 1U) ? -1.0 : 1.0;
        Vec v = combo(vecs, (std::uint64_t{1} << k) - 1, &eps);
        long double acc = 0;
        for (double x : v) acc += std::pow(static_cast<long double>(std::fabs(x)), static_cast<long double>(p));
        total += acc;
    }
    return static_cast<double>(total / static_cast<long double>(std::uint64_t{1} << k));
}

inline double square_function(const Mat& vecs, double p) {
    long double total = 0;
    for (std::size_t j = 0; j < vecs.front().size(); ++j) {
        long double s = 0;
        for (const auto& v : vecs) s += static_cast<long double>(v[j]) * v[j];
        total += std::pow(s, static_cast<long double>(p) / 2);
    }
    return static_cast<double>(total);
}

// Lorentz gauge straight from the displayed formula.
inline double lorentz(const Vec& f, double q, const Vec& w) {
    Vec a;
    for (double x : f) a.push_back(std::fabs(x));
    std::sort(a.begin(), a.end(), std::greater<>());
    long double s = 0, out = 0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        s += w[n];
        if (std::isinf(q))
            out = std::max(out, s * a[n]);
        else
            out += std::pow(static_cast<long double>(a[n]), static_cast<long double>(q)) *
                   std::pow(s, static_cast<long double>(q) - 1) * w[n];
    }
    return static_cast<double>(std::isinf(q) ? out : std::pow(out, 1.0L / q));
}

// t_m = m (sum_{n<=m} s_n^{-2})^{-1/2} in long double.
inline std::vector<long double> feedback(const std::vector<long double>& s) {
    std::vector<long double> t(s.size());
    long double acc = 0;
    for (std::size_t m = 1; m <= s.size(); ++m) {
        acc += 1.0L / (s[m - 1] * s[m - 1]);
        t[m - 1] = static_cast<long double>(m) / std::sqrt(acc);
    }
    return t;
}

} // namespace oracle
