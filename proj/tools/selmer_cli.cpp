#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "selmer/arith.hpp"
#include "selmer/errors.hpp"
#include "selmer/statlab.hpp"
#include "selmer/tables.hpp"

using namespace selmer;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kUsage = 2, kIo = 3 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string family, registry, kind = "distribution", cls, v_branch = "theta", out;
    std::string N = "1e12";
    long q = 0;
    std::vector<int> ks{1};
    std::vector<std::string> As{"0", "1"};
    std::uint64_t p_cut = 300, seed = 1;
    int threads = 1;
};

Json load_registry(const RunConfig& cfg) {
    if (cfg.registry.empty()) return builtin_registry();
    std::ifstream probe(cfg.registry);
    if (!probe) throw IoError("cannot read registry " + cfg.registry);
    return read_registry_file(cfg.registry);
}

FamilySpec load(const RunConfig& cfg) {
    if (cfg.family.empty()) throw DomainError("--family is required");
    return load_family(registry_entry(load_registry(cfg), cfg.family));
}

Int height(const RunConfig& cfg) {
    Int N = parse_int(cfg.N);
    if (N < 1) throw DomainError("--N must be at least 1");
    return N;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    f << body;
    if (!f) throw IoError("write failed for " + path);
}

std::string prefix(const RunConfig& cfg) { return cfg.out.empty() ? cfg.family + "-" + cfg.kind : cfg.out; }

Json config_json(const RunConfig& cfg, bool sampling) {
    Json j{{"family", cfg.family}, {"kind", cfg.kind}, {"N", to_string(height(cfg))}};
    j["seed"] = cfg.seed;
    j["sampling"] = sampling;
    return j;
}

// Table rows as printed: odd-degree rows use u, v; degree-two rows use the parity split.
void print_constants(std::ostream& os, const FamilySpec& fam, const FamilyConstants& k) {
    auto r = [](const Rat& x) { return to_string(x); };
    if (fam.ell == 2) {
        os << "u+(1) = " << k.u_plus1 << ", u+(2) = " << k.u_plus2 << ", u-(1) = " << k.u_minus1
           << ", u-(2) = " << k.u_minus2 << "\n";
        os << "v+(2) = " << r(k.v_plus2) << ", v-(2) = " << r(k.v_minus2) << "\n";
    } else {
        os << "u+ = " << k.u_plus << ", u- = " << k.u_minus << ", v+ = " << r(k.v_plus) << ", v- = " << r(k.v_minus) << "\n";
    }
    os << "c+ = " << r(k.c_plus) << ", c- = " << r(k.c_minus) << "\n";
    os << "mu = " << r(k.mu) << ", sigma^2 = " << r(k.sigma_sq) << ", rho(1) = " << r(rho_exponent(k, fam.ell, 1))
       << ", rho(2) = " << r(rho_exponent(k, fam.ell, 2)) << "\n";
}

int cmd_family_info(const RunConfig& cfg) {
    FamilySpec fam = load(cfg);
    FamilyConstants k = family_constants(fam, fam.split, parse_branch(cfg.v_branch));
    std::ostringstream os;
    os << "family " << fam.name << " (" << fam.label << "), ell = " << fam.ell << ", class " << class_name(fam.cls)
       << ", upsilon = " << fam.upsilon << ", tau = " << fam.tau << ", m = " << fam.m << ", varsigma = " << fam.varsigma
       << ", delta = " << fam.delta << "\n";
    os << "f(t)  = " << fam.f.str() << "\n";
    os << "g(t)  = " << fam.g.str() << "\n";
    os << "f'(t) = " << fam.pair.fp.str() << "\n";
    os << "g'(t) = " << fam.pair.gp.str() << "\n";
    os << "Delta  = " << fam.Delta.str() << "\n";
    os << "Delta' = " << fam.DeltaPrime.str() << "\n";
    os << "D+ = " << fam.split.Dplus.str() << ", D- = " << fam.split.Dminus.str() << ", T = " << fam.split.T.str() << "\n";
    os << "excluded primes:";
    for (const auto& p : fam.bad_primes) os << " " << p;
    os << "\n";
    print_constants(os, fam, k);
    std::cout << os.str();
    if (!cfg.out.empty()) {
        Json j = family_to_json(fam);
        j["constants"] = constants_to_json(k);
        j["rho1"] = to_string(rho_exponent(k, fam.ell, 1));
        j["rho2"] = to_string(rho_exponent(k, fam.ell, 2));
        write_file(cfg.out, j.dump(2) + "\n");
    }
    return kOk;
}

int cmd_registry(const RunConfig& cfg) {
    Json reg = load_registry(cfg);
    Json out = Json::array();
    for (const auto& name : registry_names(reg)) out.push_back(family_to_json(load_family(registry_entry(reg, name))));
    std::string body = out.dump(2) + "\n";
    if (cfg.out.empty()) std::cout << body;
    else write_file(cfg.out, body);
    return kOk;
}

int cmd_verify_tables(const RunConfig& cfg) {
    const VBranch branch = parse_branch(cfg.v_branch);
    Json reg = load_registry(cfg);
    Json report = Json::array();
    bool all_ok = true;
    for (const auto& row : expected_rows()) {
        try {
            FamilySpec fam = load_family(registry_entry(reg, row.family));
            RowCheck rc = check_row(row, fam, family_constants(fam, fam.split, branch));
            all_ok = all_ok && rc.ok;
            std::cout << (rc.ok ? "PASS " : "FAIL ") << row.family << " (" << row.table << ")";
            for (const auto& c : rc.cells)
                if (!c.ok) std::cout << "; " << c.key << " expected " << to_string(c.expected) << ", computed " << to_string(c.computed);
            std::cout << "\n";
            report.push_back(row_check_to_json(rc));
        } catch (const Error& e) {
            all_ok = false;
            std::cout << "FAIL " << row.family << " (" << row.table << "); " << e.what() << "\n";
            report.push_back(Json{{"family", row.family}, {"table", row.table}, {"ok", false}, {"error", e.what()}});
        }
    }
    if (!cfg.out.empty()) write_file(cfg.out, Json{{"branch", cfg.v_branch}, {"rows", report}}.dump(2) + "\n");
    return all_ok ? kOk : kMismatch;
}

int cmd_enumerate(const RunConfig& cfg) {
    FamilySpec fam = load(cfg);
    EnumOptions o;
    o.N = height(cfg);
    o.threads = cfg.threads;
    EnumStats stats;
    auto pts = collect_points(fam, o, &stats);
    std::ostringstream csv;
    write_points_csv(csv, pts);
    if (cfg.out.empty()) std::cout << csv.str();
    else write_file(cfg.out, csv.str());
    std::cerr << pts.size() << " points\n";
    return kOk;
}

CongruenceClass parse_class(const std::string& s, const Int& q) {
    CongruenceClass c;
    c.q = q;
    auto pos = s.find_first_of(":,");
    if (pos == std::string::npos) throw DomainError("--class must look like a:b (projective) or a,b (affine)");
    c.projective = s[pos] == ':';
    c.a1 = parse_int(s.substr(0, pos));
    c.b1 = parse_int(s.substr(pos + 1));
    return c;
}

Json density_row(const CongruenceClass& c, const DensityReport& r) {
    return Json{{"class", c.str()},
                {"observed", r.observed},
                {"total", r.total},
                {"ratio", r.ratio},
                {"predicted", r.predicted},
                {"predicted_exact", r.exact ? to_string(r.predicted_exact) : std::string("")},
                {"relative_error", r.predicted > 0 ? r.ratio / r.predicted - 1 : 0.0},
                {"regime", r.regime}};
}

int cmd_experiment(const RunConfig& cfg) {
    FamilySpec fam = load(cfg);
    const Int N = height(cfg);
    const std::string base = prefix(cfg);
    Json summary = config_json(cfg, false);
    auto records_for = [&]() {
        EnumOptions o;
        o.N = N;
        o.threads = cfg.threads;
        return curve_records(fam, o, 0, cfg.seed);
    };
    auto write_records = [&](const std::vector<CurveRecord>& recs) {
        std::ostringstream csv;
        write_records_csv(csv, recs);
        write_file(base + ".csv", csv.str());
    };
    std::vector<Rat> As;
    for (const auto& a : cfg.As) As.push_back(parse_rat(a));

    if (cfg.kind == "distribution") {
        ExperimentOptions eo;
        eo.N = N;
        eo.p_cut = cfg.p_cut;
        eo.ks = cfg.ks;
        eo.tail_As = As;
        eo.threads = cfg.threads;
        eo.seed = cfg.seed;
        ExperimentSummary s = distribution_experiment(fam, eo);
        write_records(s.records);
        summary["summary"] = summary_to_json(s);
    } else if (cfg.kind == "average") {
        auto recs = records_for();
        FamilyConstants k = family_constants(fam, fam.split);
        Json rows = Json::array();
        for (int kk : cfg.ks) {
            Rat avg = average_power(fam, recs, kk);
            rows.push_back(Json{{"k", kk},
                                {"average", to_string(avg)},
                                {"average_decimal", to_double(avg)},
                                {"rho", to_string(rho_exponent(k, fam.ell, kk))}});
        }
        write_records(recs);
        summary["curve_count"] = recs.size();
        summary["average_power"] = rows;
    } else if (cfg.kind == "tail") {
        auto recs = records_for();
        Json rows = Json::array();
        for (const auto& A : As) {
            TailResult t = tail_count(fam, recs, N, A);
            Json row{{"A", to_string(A)}, {"count", t.count}, {"total", t.total}, {"ratio", t.ratio}, {"threshold", t.threshold}};
            if (t.has_reference) row["delta_A"] = to_string(t.reference_exponent);
            rows.push_back(row);
        }
        write_records(recs);
        summary["tail"] = rows;
    } else if (cfg.kind == "density") {
        if (cfg.q < 1) throw DomainError("--q is required for density experiments");
        const Int q(cfg.q);
        std::vector<CongruenceClass> classes;
        int delta = fam.delta;
        if (cfg.cls.empty()) {
            classes = projective_classes(q);
            delta = 0;
        } else {
            classes.push_back(parse_class(cfg.cls, q));
            if (classes[0].projective) delta = 0;
        }
        EnumOptions o;
        o.N = N;
        o.delta = delta;
        o.threads = cfg.threads;
        auto pts = collect_points(fam, o);
        Json rows = Json::array();
        for (const auto& c : classes) {
            DensityReport r = count_congruence(fam, pts, c, delta);
            rows.push_back(density_row(c, r));
            std::cout << c.str() << ": " << r.observed << "/" << r.total << " = " << r.ratio << " (predicted " << r.predicted
                      << ")\n";
        }
        summary["q"] = cfg.q;
        summary["delta"] = delta;
        summary["points"] = pts.size();
        summary["classes"] = rows;
    } else if (cfg.kind == "profile") {
        summary["profile"] = profile_to_json(theoretical_profile(fam, cfg.p_cut));
    } else {
        throw DomainError("unknown experiment kind '" + cfg.kind + "'");
    }
    write_file(base + ".json", summary.dump(2) + "\n");
    std::cout << "wrote " << base << ".json\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tamagawa-ratio statistics for parametrized families of isogenous elliptic curves"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub, bool needs_family) {
        auto* f = sub->add_option("--family", cfg.family, "registered family name");
        if (needs_family) f->required();
        sub->add_option("--registry", cfg.registry, "registry JSON file (defaults to the built-in registry)");
        sub->add_option("--out", cfg.out, "output path (experiment: file prefix)");
    };
    auto* info = app.add_subcommand("family-info", "derived data and constants of one family");
    common(info, true);
    info->add_option("--v-branch", cfg.v_branch)->check(CLI::IsMember({"theta", "half-u", "definition"}));

    auto* verify = app.add_subcommand("verify-tables", "compare derived constants with the expected table rows");
    common(verify, false);
    verify->add_option("--v-branch", cfg.v_branch)->check(CLI::IsMember({"theta", "half-u", "definition"}));

    auto* reg = app.add_subcommand("registry", "validate the registry and print its normalized form");
    common(reg, false);

    auto* en = app.add_subcommand("enumerate", "parameter points up to height N as CSV");
    common(en, true);
    en->add_option("--N", cfg.N, "height bound, e.g. 1e12");
    en->add_option("--threads", cfg.threads)->check(CLI::PositiveNumber);

    auto* ex = app.add_subcommand("experiment", "distribution, average, tail, density or profile runs");
    common(ex, true);
    ex->add_option("--kind", cfg.kind)->check(CLI::IsMember({"distribution", "average", "tail", "density", "profile"}));
    ex->add_option("--N", cfg.N, "height bound, e.g. 1e12");
    ex->add_option("--q", cfg.q, "modulus for density runs");
    ex->add_option("--class", cfg.cls, "a:b (projective) or a,b (affine)");
    ex->add_option("--k", cfg.ks, "exponents for average_power")->delimiter(',');
    ex->add_option("--A", cfg.As, "tail thresholds (rationals)")->delimiter(',');
    ex->add_option("--p-cut", cfg.p_cut)->check(CLI::Range(5, 1000));
    ex->add_option("--threads", cfg.threads)->check(CLI::PositiveNumber);
    ex->add_option("--seed", cfg.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }
    try {
        if (*info) return cmd_family_info(cfg);
        if (*verify) return cmd_verify_tables(cfg);
        if (*reg) return cmd_registry(cfg);
        if (*en) return cmd_enumerate(cfg);
        if (*ex) return cmd_experiment(cfg);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
