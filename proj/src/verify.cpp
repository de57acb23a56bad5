#include "qgreedy/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "qgreedy/bases.hpp"
#include "qgreedy/bootstrap.hpp"
#include "qgreedy/democracy.hpp"
#include "qgreedy/error.hpp"
#include "qgreedy/rng.hpp"
#include "qgreedy/sa_machinery.hpp"

namespace qgreedy {

namespace {

std::string vec_str(const Vector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s + ")";
}

// Mixture of dense Gaussian, sparse and heavy-tailed vectors.
Vector random_vector(CounterRng& rng, std::size_t t) {
    std::size_t dim = 1 + rng.below(16);
    Vector f(dim, 0.0);
    std::normal_distribution<double> gauss;
    switch (t % 3) {
    case 0:
        for (auto& x : f) x = gauss(rng);
        break;
    case 1:
        f[rng.below(dim)] = gauss(rng);
        if (dim > 1) f[rng.below(dim)] += 1e-3 * gauss(rng);
        break;
    default:
        for (auto& x : f) x = rng.sign() * std::pow(1.0 - rng.uniform(), -2.0);
        break;
    }
    return f;
}

std::vector<CheckResult> strongly_absolute_suite(const VerifyConfig& cfg) {
    std::vector<double> ps = cfg.p ? std::vector<double>{*cfg.p} : std::vector<double>{0.3, 0.5, 0.7};
    const std::size_t trials = cfg.trials ? cfg.trials : 10000;
    std::vector<CheckResult> out;
    for (double p : ps) {
        for (double eps : {0.1, 1.0, 10.0}) {
            std::size_t violations = 0;
            std::string witness;
            for (std::size_t t = 0; t < trials; ++t) {
                CounterRng rng(cfg.seed, stream_id(0x32, t));
                Vector f = random_vector(rng, t);
                auto c = strongly_absolute_check(f, p, eps);
                if (!c.holds) {
                    if (violations++ == 0)
                        witness = "f=" + vec_str(f) + " lhs=" + format_double(c.lhs) + " rhs=" + format_double(c.rhs);
                }
            }
            std::ostringstream name;
            name << "strongly absolute inequality p=" << format_double(p) << " eps=" << format_double(eps);
            out.push_back({name.str(), violations == 0,
                           std::to_string(violations) + " violations in " + std::to_string(trials) + " vectors", witness});
        }
    }
    return out;
}

std::vector<CheckResult> counting_suite(const VerifyConfig& cfg) {
    const double p = cfg.p.value_or(0.5);
    const std::size_t trials = cfg.trials ? cfg.trials : 1000;
    const std::size_t max_dim = std::min<std::size_t>(cfg.dim, 8);
    std::size_t violations = 0;
    std::string witness;
    double worst_slack = kInf;
    for (std::size_t t = 0; t < trials; ++t) {
        CounterRng rng(cfg.seed, stream_id(0x33, t));
        std::size_t dim = 1 + rng.below(max_dim);
        std::size_t size = 1 + rng.below(max_dim);
        PairFamily fam = random_normalized_family(dim, size, p, cfg.seed, t);
        auto r = woidea_verify(fam, 2.0);
        worst_slack = std::min(worst_slack, r.bound / static_cast<double>(r.count));
        if (!r.holds && violations++ == 0)
            witness = "trial " + std::to_string(t) + ": |A|=" + std::to_string(r.count) + " bound=" + format_double(r.bound) +
                      " delta=" + format_double(r.params.delta) + " omega=" + format_set(r.omega);
    }
    return {{"counting inequality over Omega_delta, p=" + format_double(p) + ", C=2", violations == 0,
             std::to_string(violations) + " violations in " + std::to_string(trials) +
                 " families; min bound/|A| = " + format_double(worst_slack),
             witness}};
}

std::vector<CheckResult> square_function_suite(const VerifyConfig& cfg) {
    const double p = cfg.p.value_or(0.5);
    const std::size_t samples = cfg.trials ? cfg.trials : 100000;
    std::vector<CheckResult> out;
    bool disjoint_ok = true;
    std::string witness;
    for (std::size_t m = 1; m <= 12; ++m) {
        std::vector<Vector> vecs(m, Vector(m, 0.0));
        for (std::size_t n = 0; n < m; ++n) vecs[n][n] = 1.0;
        auto r = khintchine_square_function(vecs, p, AverageMode::exact, 0, 0, cfg.threads);
        double want = static_cast<double>(m);
        if (std::fabs(r.lhs - want) > 1e-9 || std::fabs(r.rhs - want) > 1e-9) {
            disjoint_ok = false;
            witness = "m=" + std::to_string(m) + " lhs=" + format_double(r.lhs) + " rhs=" + format_double(r.rhs);
        }
    }
    out.push_back({"sign average equals square function on disjoint unit vectors, m <= 12", disjoint_ok,
                   "lhs = rhs = m", witness});

    for (std::size_t t = 0; t < 5; ++t) {
        CounterRng rng(cfg.seed, stream_id(0x34, t));
        std::size_t k = 2 + rng.below(11);
        std::size_t dim = 2 + rng.below(11);
        std::normal_distribution<double> gauss;
        std::vector<Vector> vecs(k, Vector(dim));
        for (auto& v : vecs)
            for (auto& x : v) x = gauss(rng);
        auto ex = khintchine_square_function(vecs, p, AverageMode::exact, 0, 0, cfg.threads);
        auto mc = khintchine_square_function(vecs, p, AverageMode::mc, samples, cfg.seed + t, cfg.threads);
        double z = mc.std_error > 0.0 ? std::fabs(ex.lhs - mc.lhs) / mc.std_error : 0.0;
        std::ostringstream detail;
        detail << "|A|=" << k << " dim=" << dim << " exact=" << format_double(ex.lhs) << " mc=" << format_double(mc.lhs)
               << " se=" << format_double(mc.std_error) << " |z|=" << format_double(z)
               << " ratio=" << format_double(ex.ratio);
        out.push_back({"exact sign average vs Monte Carlo, family " + std::to_string(t + 1), z <= 3.0, detail.str(),
                       detail.str()});
    }
    return out;
}

std::vector<CheckResult> bootstrap_suite(const VerifyConfig& cfg) {
    const std::size_t M = cfg.max_m;
    const std::size_t iters = std::max<std::size_t>(cfg.iters, 1);
    auto chain = bootstrap_chain(M, iters);
    auto H = harmonic(M);
    std::vector<CheckResult> out;

    double worst1 = 0.0;
    for (std::size_t m = 1; m <= M; ++m) {
        double want = std::sqrt(static_cast<double>(m));
        worst1 = std::max(worst1, std::fabs(chain[1].at(m) - want) / want);
    }
    out.push_back({"stage 1 equals sqrt(m)", worst1 <= 1e-12, "max relative error " + format_double(worst1), ""});
    if (iters >= 2) {
        double worst2 = 0.0;
        for (std::size_t m = 1; m <= M; ++m) {
            double want = static_cast<double>(m) / std::sqrt(H.at(m));
            worst2 = std::max(worst2, std::fabs(chain[2].at(m) - want) / want);
        }
        out.push_back({"stage 2 equals m / sqrt(H_m)", worst2 <= 1e-12, "max relative error " + format_double(worst2), ""});
    }
    if (iters >= 3) {
        const auto& s3 = chain[3];
        double r = s3.at(M) / static_cast<double>(M);
        out.push_back({"stage 3 ratio at m=" + std::to_string(M) + " in [0.635, 0.655]", r >= 0.635 && r <= 0.655,
                       "ratio " + format_double(r), ""});
        bool monotone = true;
        std::size_t bad = 0;
        for (std::size_t m = 2; m <= M; ++m)
            if (s3.at(m) / static_cast<double>(m) > s3.at(m - 1) / static_cast<double>(m - 1) * (1.0 + 1e-15)) {
                monotone = false;
                bad = m;
                break;
            }
        out.push_back({"stage 3 ratio non-increasing", monotone, monotone ? "ok" : "increase at m=" + std::to_string(bad),
                       ""});
        if (M >= 10) {
            double r10 = s3.at(M / 10) / static_cast<double>(M / 10);
            double gap = std::fabs(r10 - r);
            out.push_back({"stage 3 ratio Cauchy within 1e-6 between m=" + std::to_string(M / 10) + " and " +
                               std::to_string(M),
                           gap <= 1e-6, "gap " + format_double(gap), "ratios " + format_double(r10) + ", " + format_double(r)});
        }
    }
    return out;
}

std::vector<CheckResult> democracy_lp(const VerifyConfig& cfg) {
    const double p = cfg.p.value_or(0.5);
    ZooParams zp;
    zp.dim = cfg.dim;
    zp.p = p;
    Basis basis = zoo("unit", zp);
    SearchOptions opts;
    opts.mode = SearchMode::exact;
    opts.threads = cfg.threads;
    auto rows = democracy_table(basis, cfg.dim, opts);
    double worst = 0.0;
    std::vector<double> u, l;
    for (const auto& r : rows) {
        double want = std::pow(static_cast<double>(r.m), 1.0 / p);
        worst = std::max({worst, std::fabs(r.phi_u.lower - want), std::fabs(r.phi_l.upper - want)});
        u.push_back(r.phi_u.lower);
        l.push_back(r.phi_l.upper);
    }
    auto su = loglog_slope(u), sl = loglog_slope(l);
    std::vector<CheckResult> out;
    out.push_back({"unit basis phi_u = phi_l = m^(1/p), d=" + std::to_string(cfg.dim), worst <= 1e-9,
                   "max deviation " + format_double(worst), ""});
    auto slope_ok = [&](double s) { return std::fabs(s - 1.0 / p) <= 0.01; };
    out.push_back({"log-log slopes equal 1/p within 0.01", slope_ok(su.slope) && slope_ok(sl.slope),
                   "slope_u " + format_double(su.slope) + ", slope_l " + format_double(sl.slope), ""});
    return out;
}

std::vector<CheckResult> succ_suite(const VerifyConfig& cfg) {
    const double p = cfg.p.value_or(0.5);
    SearchOptions opts;
    opts.mode = SearchMode::exact;
    opts.threads = cfg.threads;
    ZooParams zp;
    zp.dim = std::min<std::size_t>(cfg.dim, kSuccExactDim);
    zp.p = p;
    auto unit = succ_constant(zoo("unit", zp), opts);
    auto diff = succ_constant(zoo("difference", zp), opts);
    double want = std::pow(2.0, 1.0 / p);
    std::vector<CheckResult> out;
    out.push_back({"unit basis suppression constant is 1", std::fabs(unit.suppression.lower - 1.0) <= 1e-12,
                   "value " + format_double(unit.suppression.lower), ""});
    out.push_back({"unit basis sign-change constant is 1", std::fabs(unit.sign_change.lower - 1.0) <= 1e-12,
                   "value " + format_double(unit.sign_change.lower), ""});
    out.push_back({"difference basis suppression constant >= 2^(1/p)", diff.suppression.lower >= want - 1e-12,
                   "value " + format_double(diff.suppression.lower) + " with A=" +
                       format_set(diff.suppression.witness.set_a) + " B=" + format_set(diff.suppression.witness.set_b),
                   ""});
    return out;
}

} // namespace

std::vector<std::string> suite_names() { return {"lemma32", "lemma33", "lemma34", "bootstrap", "democracy-lp", "succ"}; }

std::vector<CheckResult> run_suite(const std::string& suite, const VerifyConfig& config) {
    if (suite == "lemma32") return strongly_absolute_suite(config);
    if (suite == "lemma33") return counting_suite(config);
    if (suite == "lemma34") return square_function_suite(config);
    if (suite == "bootstrap") return bootstrap_suite(config);
    if (suite == "democracy-lp") return democracy_lp(config);
    if (suite == "succ") return succ_suite(config);
    throw InvalidInput("unknown verify suite '" + suite + "'");
}

} // namespace qgreedy
