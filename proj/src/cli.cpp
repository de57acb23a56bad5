#include "qgreedy/cli.hpp"

#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qgreedy/bootstrap.hpp"
#include "qgreedy/democracy.hpp"
#include "qgreedy/error.hpp"
#include "qgreedy/greedy.hpp"
#include "qgreedy/io.hpp"
#include "qgreedy/verify.hpp"

namespace qgreedy {

namespace {

constexpr int kExitVerify = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBasis = 3;

struct Config {
    std::string zoo = "unit";
    std::string basis_path;
    double p = 0.5;
    bool p_set = false;
    std::size_t dim = 8;
    std::string blocks;
    std::uint64_t seed = 0;
    double perturbation = 0.5;
    std::size_t max_m = 0;
    std::string mode = "random";
    std::size_t budget = 10000;
    std::string format = "table";
    std::string out;
    unsigned threads = 0;
    std::size_t iters = 3;
    std::size_t trials = 0;
    std::string suite;
    std::string zoo_action;
    std::string zoo_name;
};

// "1,2,3" or "1..12"
std::vector<std::size_t> parse_blocks(const std::string& spec, std::size_t dim) {
    std::vector<std::size_t> out;
    if (spec.empty()) {
        for (std::size_t b = 1; b <= dim; ++b) out.push_back(b);
        return out;
    }
    auto range = spec.find("..");
    try {
        if (range != std::string::npos) {
            std::size_t lo = std::stoul(spec.substr(0, range)), hi = std::stoul(spec.substr(range + 2));
            for (std::size_t b = lo; b <= hi; ++b) out.push_back(b);
        } else {
            std::stringstream ss(spec);
            std::string item;
            while (std::getline(ss, item, ',')) out.push_back(std::stoul(item));
        }
    } catch (const std::exception&) {
        throw InvalidInput("cannot parse --blocks '" + spec + "'; use 1,2,3 or 1..12");
    }
    if (out.empty()) throw InvalidInput("--blocks is empty");
    return out;
}

Basis load(const Config& cfg) {
    if (!cfg.basis_path.empty()) return load_basis(cfg.basis_path);
    ZooParams zp;
    zp.dim = cfg.dim;
    zp.p = cfg.p;
    zp.seed = cfg.seed;
    zp.perturbation = cfg.perturbation;
    if (cfg.zoo == "block_l2") zp.blocks = parse_blocks(cfg.blocks, cfg.dim);
    return zoo(cfg.zoo, zp);
}

SearchOptions search_options(const Config& cfg) {
    SearchOptions o;
    o.mode = cfg.mode == "exact" ? SearchMode::exact : SearchMode::random;
    o.budget = cfg.budget;
    o.seed = cfg.seed;
    o.threads = cfg.threads;
    return o;
}

std::string witness_summary(const Witness& w) {
    std::string s = w.kind;
    if (!w.set_a.empty()) s += " A=" + format_set_compact(w.set_a);
    if (!w.set_b.empty()) s += " B=" + format_set_compact(w.set_b);
    if (w.m != 0) s += " m=" + std::to_string(w.m);
    return s;
}

struct NamedEstimate {
    std::string name;
    BoundEstimate est;
};

struct Analysis {
    std::string header;
    DemocracyProfile profile;
    std::vector<NamedEstimate> constants;
    std::vector<ConditionalityRow> conditionality;
};

Analysis analyze(const Basis& basis, const Config& cfg) {
    Analysis a;
    SearchOptions opts = search_options(cfg);
    std::size_t max_m = cfg.max_m == 0 ? basis.size() : std::min(cfg.max_m, basis.size());
    std::ostringstream h;
    h << "basis " << basis.name() << " on " << basis.space().describe() << ", d=" << basis.size() << ", mode=" << cfg.mode
      << ", budget=" << cfg.budget << ", seed=" << cfg.seed;
    a.header = h.str();
    a.profile = democracy_profile(basis, max_m, opts);
    a.constants.push_back({"K_u", unconditional_constant(basis, opts)});
    a.constants.push_back({"succ_suppression", a.profile.succ.suppression});
    a.constants.push_back({"succ_sign_change", a.profile.succ.sign_change});
    a.constants.push_back({"super_democracy", a.profile.super_democracy});
    a.constants.push_back({"quasi_greedy", a.profile.quasi_greedy});
    a.constants.push_back({"truncation", truncation_constant(basis, opts)});
    a.conditionality = conditionality_growth_profile(basis, max_m, opts);
    return a;
}

std::string constants_csv(const Analysis& a) {
    std::ostringstream os;
    os << "constant,lower,upper,upper_certified,heuristic,witness\n";
    for (const auto& c : a.constants)
        os << c.name << ',' << format_double(c.est.lower) << ',' << format_double(c.est.upper) << ','
           << (c.est.upper_certified ? 1 : 0) << ',' << (c.est.heuristic ? 1 : 0) << ',' << witness_summary(c.est.witness)
           << '\n';
    return os.str();
}

std::string conditionality_csv(const Analysis& a) {
    std::ostringstream os;
    os << "m,k_m_lo,k_m_hi,diagnostic,exhaustive,witness_set\n";
    for (const auto& r : a.conditionality)
        os << r.m << ',' << format_double(r.lower) << ',' << format_double(r.upper) << ',' << format_double(r.diagnostic)
           << ',' << (r.exhaustive ? 1 : 0) << ',' << format_set_compact(r.witness_set) << '\n';
    return os.str();
}

std::string verdict_line(const DemocracyProfile& p) {
    return std::string(p.democratic ? "democratic" : "not democratic") + "; almost greedy: " +
           (p.almost_greedy ? "yes" : "no");
}

std::string analysis_table(const Analysis& a) {
    std::ostringstream os;
    auto cell = [&](const std::string& s, int w) { os << std::setw(w) << s; };
    os << a.header << "\n\ndemocracy functions\n";
    cell("m", 3), cell("phi_u_lo", 20), cell("phi_u_hi", 20), cell("phi_l_lo", 20), cell("phi_l_hi", 20);
    os << "  witness_u | witness_l\n";
    for (const auto& r : a.profile.rows) {
        cell(std::to_string(r.m), 3);
        cell(format_double(r.phi_u.lower), 20), cell(format_double(r.phi_u.upper), 20);
        cell(format_double(r.phi_l.lower), 20), cell(format_double(r.phi_l.upper), 20);
        os << "  " << format_set(r.phi_u.witness.set_a) << " | " << format_set(r.phi_l.witness.set_a) << '\n';
    }
    os << "\nslope phi_u " << format_double(a.profile.slope_u.slope) << " (rms " << format_double(a.profile.slope_u.residual)
       << "), slope phi_l " << format_double(a.profile.slope_l.slope) << " (rms "
       << format_double(a.profile.slope_l.residual) << "), max phi_u/phi_l " << format_double(a.profile.max_ratio)
       << "\nverdict: " << verdict_line(a.profile) << "\n\nconstants\n";
    for (const auto& c : a.constants) {
        cell(c.name, 18), cell(format_double(c.est.lower), 20), cell(format_double(c.est.upper), 20);
        os << "  " << (c.est.exact() ? "exact" : (c.est.heuristic ? "heuristic" : "bracket")) << "  "
           << witness_summary(c.est.witness) << '\n';
    }
    os << "\nconditionality k_m\n";
    cell("m", 3), cell("k_m_lo", 20), cell("k_m_hi", 20), cell("diagnostic", 20);
    os << "  witness\n";
    for (const auto& r : a.conditionality) {
        cell(std::to_string(r.m), 3), cell(format_double(r.lower), 20), cell(format_double(r.upper), 20);
        cell(format_double(r.diagnostic), 20);
        os << "  " << format_set(r.witness_set) << '\n';
    }
    return os.str();
}

std::string analysis_json(const Analysis& a) {
    auto j = nlohmann::ordered_json::parse(profile_to_json(a.profile));
    j["header"] = a.header;
    j["verdict"] = verdict_line(a.profile);
    auto num = [](double x) -> nlohmann::ordered_json {
        if (std::isfinite(x)) return x;
        return format_double(x);
    };
    auto consts = nlohmann::ordered_json::object();
    for (const auto& c : a.constants)
        consts[c.name] = {{"lower", num(c.est.lower)},
                          {"upper", num(c.est.upper)},
                          {"upper_certified", c.est.upper_certified},
                          {"heuristic", c.est.heuristic},
                          {"witness", witness_summary(c.est.witness)},
                          {"note", c.est.note}};
    j["constants"] = consts;
    auto cond = nlohmann::ordered_json::array();
    for (const auto& r : a.conditionality) {
        auto set = nlohmann::ordered_json::array();
        for (auto n : r.witness_set) set.push_back(n + 1);
        cond.push_back({{"m", r.m},
                        {"lower", num(r.lower)},
                        {"upper", num(r.upper)},
                        {"diagnostic", num(r.diagnostic)},
                        {"exhaustive", r.exhaustive},
                        {"witness_set", set}});
    }
    j["conditionality"] = cond;
    return j.dump(2) + "\n";
}

std::string sibling(const std::string& path, const std::string& suffix) {
    std::filesystem::path p(path);
    return (p.parent_path() / (p.stem().string() + suffix)).string();
}

int cmd_analyze(const Config& cfg, std::ostream& out, std::ostream& err) {
    Basis basis = load(cfg);
    Analysis a = analyze(basis, cfg);
    std::string primary;
    if (cfg.format == "csv")
        primary = profile_to_csv(a.profile);
    else if (cfg.format == "json")
        primary = analysis_json(a);
    else
        primary = analysis_table(a);
    if (cfg.out.empty()) {
        out << primary;
    } else {
        save_report(cfg.out, primary);
        if (cfg.format == "csv") {
            save_report(sibling(cfg.out, ".constants.csv"), constants_csv(a));
            save_report(sibling(cfg.out, ".conditionality.csv"), conditionality_csv(a));
        }
        err << "wrote " << cfg.out << '\n';
    }
    return 0;
}

int cmd_verify(const Config& cfg, std::ostream& out, std::ostream& err) {
    VerifyConfig vc;
    if (cfg.p_set) vc.p = cfg.p;
    vc.dim = cfg.dim;
    vc.trials = cfg.trials;
    vc.seed = cfg.seed;
    if (cfg.max_m != 0) vc.max_m = cfg.max_m;
    vc.iters = cfg.iters;
    vc.threads = cfg.threads;
    auto results = run_suite(cfg.suite, vc);
    std::size_t failed = 0;
    for (const auto& r : results) {
        out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        if (!r.pass) {
            ++failed;
            if (!r.witness.empty()) err << "witness for '" << r.name << "': " << r.witness << '\n';
        }
    }
    out << cfg.suite << ": " << (results.size() - failed) << "/" << results.size() << " checks passed\n";
    return failed == 0 ? 0 : kExitVerify;
}

int cmd_bootstrap(const Config& cfg, std::ostream& out, std::ostream& err) {
    std::size_t M = cfg.max_m == 0 ? 10 : cfg.max_m;
    std::string csv = chain_to_csv(bootstrap_chain(M, cfg.iters));
    if (cfg.out.empty()) {
        out << csv;
    } else {
        save_report(cfg.out, csv);
        err << "wrote " << cfg.out << '\n';
    }
    return 0;
}

int cmd_zoo(const Config& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.zoo_action == "list") {
        for (const auto& n : zoo_names()) out << n << '\n';
        return 0;
    }
    Config c = cfg;
    c.zoo = cfg.zoo_name;
    std::string text = basis_to_json(load(c)).dump(2) + "\n";
    if (cfg.out.empty()) {
        out << text;
    } else {
        save_report(cfg.out, text);
        err << "wrote " << cfg.out << '\n';
    }
    return 0;
}

void add_basis_options(CLI::App* app, Config& cfg) {
    app->add_option("--zoo", cfg.zoo, "zoo basis name")->check(CLI::IsMember(zoo_names()));
    app->add_option("--basis", cfg.basis_path, "basis JSON file (overrides --zoo)");
    app->add_option("--dim", cfg.dim, "dimension")->check(CLI::PositiveNumber);
    app->add_option("--blocks", cfg.blocks, "block sizes for block_l2: 1,2,3 or 1..12 (default 1..dim)");
    app->add_option("--perturbation", cfg.perturbation, "off-diagonal mass for perturbed_unit");
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"Greedy-approximation constants of finite bases in quasi-Banach sequence spaces"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--p", cfg.p, "exponent p of the ambient space")
            ->each([&](const std::string&) { cfg.p_set = true; });
        sub->add_option("--seed", cfg.seed, "64-bit seed");
        sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
        sub->add_option("--out", cfg.out, "output path");
    };

    auto* analyze_cmd = app.add_subcommand("analyze", "democracy profile, constants and k_m profile of a basis");
    add_common(analyze_cmd);
    add_basis_options(analyze_cmd, cfg);
    analyze_cmd->add_option("--max-m", cfg.max_m, "largest m (default d)");
    analyze_cmd->add_option("--mode", cfg.mode, "exact or random")->check(CLI::IsMember({"exact", "random"}));
    analyze_cmd->add_option("--budget", cfg.budget, "samples per estimator");
    analyze_cmd->add_option("--format", cfg.format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));

    auto* verify_cmd = app.add_subcommand("verify", "run a property suite");
    add_common(verify_cmd);
    verify_cmd->add_option("suite", cfg.suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
    verify_cmd->add_option("--dim", cfg.dim, "dimension")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--trials", cfg.trials, "number of random trials (suite default when 0)");
    verify_cmd->add_option("--max-m", cfg.max_m, "sequence length for the bootstrap suite");
    verify_cmd->add_option("--iters", cfg.iters, "bootstrap iterations");

    auto* boot_cmd = app.add_subcommand("bootstrap", "iterate the feedback transform from s = 1");
    boot_cmd->add_option("--max-m", cfg.max_m, "sequence length (default 10)");
    boot_cmd->add_option("--iters", cfg.iters, "iterations");
    boot_cmd->add_option("--out", cfg.out, "output path");

    auto* zoo_cmd = app.add_subcommand("zoo", "list zoo bases or emit one as JSON");
    zoo_cmd->add_option("action", cfg.zoo_action, "list or emit")->required()->check(CLI::IsMember({"list", "emit"}));
    zoo_cmd->add_option("name", cfg.zoo_name, "basis name for emit")->check(CLI::IsMember(zoo_names()));
    add_common(zoo_cmd);
    zoo_cmd->add_option("--dim", cfg.dim, "dimension")->check(CLI::PositiveNumber);
    zoo_cmd->add_option("--blocks", cfg.blocks, "block sizes for block_l2");
    zoo_cmd->add_option("--perturbation", cfg.perturbation, "off-diagonal mass for perturbed_unit");
    zoo_cmd->add_option("--basis", cfg.basis_path, "path for custom_file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (*analyze_cmd) return cmd_analyze(cfg, out, err);
        if (*verify_cmd) return cmd_verify(cfg, out, err);
        if (*boot_cmd) return cmd_bootstrap(cfg, out, err);
        if (*zoo_cmd) {
            if (cfg.zoo_action == "emit" && cfg.zoo_name.empty()) throw InvalidInput("zoo emit needs a basis name");
            return cmd_zoo(cfg, out, err);
        }
    } catch (const BasisError& e) {
        err << "basis error: " << e.what() << '\n';
        return kExitBasis;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}

} // namespace qgreedy
