#include "copol/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "copol/csv.hpp"
#include "copol/entropy.hpp"
#include "copol/interface.hpp"
#include "copol/maximizer_checks.hpp"
#include "copol/oracle.hpp"
#include "copol/phases.hpp"
#include "copol/varform.hpp"

namespace copol {

namespace fs = std::filesystem;

namespace {

struct Artifacts {
    std::string dir;
    std::string command;
    const RunConfig* cfg;
    std::vector<std::pair<std::string, std::string>> files;  // name -> checksum
    std::vector<std::string> errors;
    nlohmann::json diagnostics;

    void write_file(const std::string& name, const std::string& content) {
        fs::create_directories(dir);
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        out << content;
        files.emplace_back(name, fnv1a_hex(content));
    }

    void finish(CommandResult& res) {
        nlohmann::json j;
        j["format"] = "copol-manifest";
        j["version"] = 1;
        j["command"] = command;
        nlohmann::json cfgj;
        // the output path is where the manifest lives, not part of the
        // reproducible configuration
        for (const auto& [k, v] : cfg->echo())
            if (k != "out") cfgj[k] = v;
        j["config"] = cfgj;
        nlohmann::json filesj;
        for (const auto& [name, sum] : files) filesj[name] = sum;
        j["files"] = filesj;
        j["diagnostics"] = diagnostics;
        j["errors"] = errors;
        std::ofstream out(fs::path(dir) / "manifest.json", std::ios::binary);
        out << j.dump(2) << "\n";
        for (const auto& [name, sum] : files) res.files.push_back(name);
        res.files.push_back("manifest.json");
        res.errors = errors;
        res.exit_code = errors.empty() ? 0 : 1;
    }
};

InterfaceConfig iface_config(const RunConfig& cfg) {
    InterfaceConfig ic;
    ic.mu_max = cfg.iface_mu_max;
    ic.mu_step = cfg.iface_mu_step;
    ic.ladder = cfg.iface_ladder;
    ic.samples = cfg.iface_samples;
    ic.seed = cfg.seed;
    ic.threads = cfg.threads;
    return ic;
}

FamilyConfig family_config(const RunConfig& cfg) {
    FamilyConfig fc;
    fc.p = cfg.p;
    fc.M = cfg.M;
    fc.meso_seed = hash2(cfg.seed, 555);
    fc.strategies = cfg.family_strategies;
    fc.columns = cfg.family_columns;
    return fc;
}

template <class F>
void parallel_for(int n, int threads, F&& body) {
    unsigned hw = threads > 0 ? static_cast<unsigned>(threads)
                              : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < hw; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace

// ---------------------------------------------------------------------------

CommandResult cmd_entropy(const RunConfig& cfg) {
    CommandResult res;
    Artifacts art{cfg.out_dir + "/entropy", "entropy", &cfg, {}, {}, {}};
    EntropyEvaluator ent(EntropyEvaluator::Config{1e-10, 1e-9, cfg.entropy_ladder, true});

    // kappa and derivative grid
    {
        std::ostringstream csv;
        csv << "u,l,kappa,kappa_derivative\n";
        for (double l : cfg.entropy_l_values)
            for (double u = 1.0 + l; u <= cfg.entropy_u_max + 1e-12; u += cfg.entropy_u_step) {
                double k = ent.kappa(u, l);
                csv << format_double(u) << "," << format_double(l) << "," << format_double(k)
                    << ",";
                if (u > 1.0 + l + 1e-9)
                    csv << format_double(ent.kappa_derivative(u, l));
                csv << "\n";
            }
        art.write_file("kappa_grid.csv", csv.str());
    }

    // finite-L ladder (H_L-snapped)
    {
        std::ostringstream csv;
        csv << "L,u,l,kappa_L\n";
        for (int L : cfg.entropy_ladder)
            for (double l : cfg.entropy_l_values) {
                double lL = std::round(l * L) / L;
                for (double u = 1.0 + std::abs(lL); u <= cfg.entropy_u_max + 1e-12;
                     u += cfg.entropy_u_step) {
                    long long steps = std::llround((u - 1.0 - std::abs(lL)) * L / 2.0);
                    double uL = 1.0 + std::abs(lL) + 2.0 * static_cast<double>(steps) / L;
                    csv << L << "," << format_double(uL) << "," << format_double(lL) << ","
                        << format_double(ent.kappa_finite(L, uL, lL)) << "\n";
                }
            }
        art.write_file("kappa_ladder.csv", csv.str());
    }

    // oracle agreement (exact, small domain)
    {
        std::ostringstream csv;
        csv << "L,steps,displacement,count_enumerated,count_stretch,equal\n";
        int mismatches = 0;
        long long cap = std::min<long long>(cfg.budget, 16);
        for (int L = 1; L <= 3; ++L)
            for (long long S = L; S <= cap; ++S)
                for (long long D = -(S - L); D <= S - L; ++D) {
                    if (((S - L - std::llabs(D)) % 2) != 0) continue;
                    double u = static_cast<double>(S) / L, l = static_cast<double>(D) / L;
                    auto a = oracle::enumerate_column_paths(L, u, l, {cfg.budget});
                    auto b = oracle::count_paths_stretch_form(L, u, l);
                    bool eq = a == b;
                    if (!eq) ++mismatches;
                    csv << L << "," << S << "," << D << "," << a.str() << "," << b.str() << ","
                        << (eq ? 1 : 0) << "\n";
                }
        art.write_file("oracle_agreement.csv", csv.str());
        art.diagnostics["count_mismatches"] = mismatches;
        if (mismatches > 0) art.errors.push_back("path-count mismatch between counters");
    }

    art.finish(res);
    res.summary = "entropy tables written";
    return res;
}

CommandResult cmd_interface(const RunConfig& cfg) {
    CommandResult res;
    Artifacts art{cfg.out_dir + "/interface", "interface", &cfg, {}, {}, {}};
    EntropyEvaluator ent;
    InterfaceTable table = InterfaceTable::build(iface_config(cfg), cfg.alpha, cfg.beta, ent);

    art.write_file("interface_table.json", table.to_json());

    std::ostringstream csv;
    csv << "mu,raw_mean,estimate,err,kappa0,floored,envelope\n";
    double worst_collapse = 0.0;
    for (std::size_t i = 0; i < table.grid.size(); ++i) {
        double mu = table.grid[i];
        double kap = mu <= 1.0 ? 0.0 : ent.kappa(mu, 0.0);
        csv << format_double(mu) << "," << format_double(table.raw_mean[i]) << ","
            << format_double(table.estimate[i]) << "," << format_double(table.err[i]) << ","
            << format_double(kap) << "," << (table.floor_hit[i] ? 1 : 0) << ","
            << format_double(table.mu_phi(mu)) << "\n";
        if (cfg.beta <= 0.0)
            worst_collapse =
                std::max(worst_collapse, std::abs(table.estimate[i] - kap) -
                                             (2.0 * table.err[i] + 0.05));
    }
    art.write_file("interface_diag.csv", csv.str());
    art.diagnostics["envelope_concavity_violation"] = table.hull().concavity_violation();
    if (cfg.beta <= 0.0) {
        art.diagnostics["collapse_excess"] = worst_collapse;
        if (worst_collapse > 0.0)
            art.errors.push_back("beta<=0 collapse check failed beyond tolerance");
    }
    if (table.hull().concavity_violation() > 1e-12)
        art.errors.push_back("envelope not concave after fit");

    art.finish(res);
    res.summary = "interface table written";
    return res;
}

CommandResult cmd_free_energy(const RunConfig& cfg) {
    CommandResult res;
    Artifacts art{cfg.out_dir + "/free_energy", "free-energy", &cfg, {}, {}, {}};
    EntropyEvaluator ent;
    InterfaceTable table = InterfaceTable::build(iface_config(cfg), cfg.alpha, cfg.beta, ent);
    std::vector<SlopeMeasure> family = measure_family_from_disorder(family_config(cfg));
    SlopeEngine eng{&ent, &table, cfg.alpha, cfg.beta};

    std::ostringstream csv, trace;
    csv << "label,value,iterations,residual,saturated\n";
    trace << "label,iteration,c\n";
    double best = -1.0;
    std::string best_label;
    for (const SlopeMeasure& m : family) {
        try {
            DinkelbachResult r = free_energy_for_measure(eng, m, cfg.dinkelbach_tol);
            csv << m.label << "," << format_double(r.value) << "," << r.iterations << ","
                << format_double(r.residual) << "," << (r.saturated ? 1 : 0) << "\n";
            for (std::size_t k = 0; k < r.trace.size(); ++k)
                trace << m.label << "," << k << "," << format_double(r.trace[k]) << "\n";
            if (r.value > best) {
                best = r.value;
                best_label = m.label;
            }
        } catch (const NonPositive&) {
            csv << m.label << ",0,0,0,0\n";
        }
    }
    art.write_file("free_energy.csv", csv.str());
    art.write_file("dinkelbach_trace.csv", trace.str());
    art.write_file("family.json", measures_to_json(family));
    AttainmentReport att = family_attainment(eng, family);
    art.diagnostics["f_lower_bound"] = best;
    art.diagnostics["argmax"] = best_label;
    art.diagnostics["argmax_margin_over_runner_up"] = att.margin;
    art.diagnostics["family_size"] = family.size();
    art.diagnostics["provenance"] =
        "lower bound (family of size " + std::to_string(family.size()) + ")";
    art.finish(res);
    res.summary = "f >= " + format_double(best) + " via " + best_label;
    return res;
}

CommandResult cmd_phase_diagram(const RunConfig& cfg) {
    CommandResult res;
    Artifacts art{cfg.out_dir + "/phase_diagram", "phase-diagram", &cfg, {}, {}, {}};
    EntropyEvaluator ent;

    PhaseEngine::Config pcfg;
    pcfg.iface = iface_config(cfg);
    pcfg.iface.samples = cfg.scan_iface_samples;
    pcfg.iface.mu_step = cfg.scan_iface_mu_step;
    pcfg.iface.ladder = cfg.scan_iface_ladder;
    pcfg.decision_margin = cfg.scan_margin;
    PhaseEngine phase(ent, pcfg);

    std::vector<SlopeMeasure> family = measure_family_from_disorder(family_config(cfg));

    const int na = cfg.scan_alpha_steps, nb = cfg.scan_beta_steps;
    const int n = na * nb;
    std::vector<PhasePoint> pts(static_cast<std::size_t>(n));
    std::vector<std::string> errs(static_cast<std::size_t>(n));
    parallel_for(n, cfg.threads, [&](int i) {
        int ia = i / nb, ib = i % nb;
        double a = cfg.scan_alpha_min +
                   (na > 1 ? ia * (cfg.scan_alpha_max - cfg.scan_alpha_min) / (na - 1) : 0.0);
        double b = cfg.scan_beta_min +
                   (nb > 1 ? ib * (cfg.scan_beta_max - cfg.scan_beta_min) / (nb - 1) : 0.0);
        if (a < std::abs(b)) {  // outside CONE: clamp onto the boundary
            a = std::abs(b);
        }
        try {
            InterfaceConfig ic = pcfg.iface;
            ic.seed = hash3(cfg.seed, static_cast<std::uint64_t>(ia),
                            static_cast<std::uint64_t>(ib));
            InterfaceTable table = InterfaceTable::build(ic, a, b, ent);
            pts[static_cast<std::size_t>(i)] = phase.classify(a, b, cfg.p, family, table);
        } catch (const std::exception& e) {
            errs[static_cast<std::size_t>(i)] = e.what();
        }
    });

    std::ostringstream csv;
    csv << "alpha,beta,p,phase,f,fD,fD2,fL2,margin,flags\n";
    for (int i = 0; i < n; ++i) {
        const PhasePoint& pt = pts[static_cast<std::size_t>(i)];
        if (!errs[static_cast<std::size_t>(i)].empty()) {
            art.errors.push_back("scan point failed: " + errs[static_cast<std::size_t>(i)]);
            continue;
        }
        std::string flags = pt.lower_bound_family ? "lower-bound" : "";
        if (pt.table_saturated) flags += "|saturated";
        csv << format_double(pt.alpha) << "," << format_double(pt.beta) << ","
            << format_double(pt.p) << "," << to_string(pt.phase) << "," << format_double(pt.f)
            << "," << format_double(pt.fD) << "," << format_double(pt.fD2) << ","
            << format_double(pt.fL2) << "," << format_double(pt.margin) << "," << flags
            << "\n";
    }
    art.write_file("phases.csv", csv.str());

    // critical curves
    std::ostringstream crit;
    crit << "kind,alpha,value,lo,hi,flags\n";
    PhaseEngine::AlphaStar as = phase.alpha_star(family);
    {
        std::string flags;
        if (as.at_lower_edge) flags = "at-lower-edge";
        if (as.no_crossing) flags += (flags.empty() ? "" : "|") + std::string("no-crossing");
        crit << "alpha_star,," << format_double(as.value) << "," << format_double(as.bracket_lo)
             << "," << format_double(as.bracket_hi) << "," << flags << "\n";
    }
    double prev_beta_c = -1.0;
    bool monotone = true;
    for (double a : cfg.critical_alphas) {
        PhaseEngine::BetaC bc = phase.beta_c(a, family);
        std::string flags;
        if (bc.undecided) flags = "undecided";
        if (bc.table_saturated) flags += (flags.empty() ? "" : "|") + std::string("saturated");
        crit << "beta_c," << format_double(a) << "," << format_double(bc.value) << ","
             << format_double(bc.lo) << "," << format_double(bc.hi) << "," << flags << "\n";
        if (prev_beta_c >= 0.0 && bc.value + (bc.hi - bc.lo) < prev_beta_c) monotone = false;
        prev_beta_c = bc.value;
    }
    art.write_file("critical.csv", crit.str());
    art.diagnostics["beta_c_monotone_within_ci"] = monotone;
    art.diagnostics["p_supercritical_label"] = cfg.p > pcfg.p_c;
    art.diagnostics["family_size"] = family.size();

    art.finish(res);
    res.summary = "phase scan written";
    return res;
}

CommandResult cmd_oracle_check(const RunConfig& cfg) {
    CommandResult res;
    Artifacts art{cfg.out_dir + "/oracle_check", "oracle-check", &cfg, {}, {}, {}};
    EntropyEvaluator ent;
    std::ostringstream rep;
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        rep << (ok ? "[ok]   " : "[FAIL] ") << what << "\n";
        if (!ok) {
            ++failures;
            art.errors.push_back(what);
        }
    };

    // exact count equality over the budgeted domain
    {
        bool all = true;
        long long cap = std::min<long long>(cfg.budget, 20);
        for (int L = 1; L <= 4 && all; ++L)
            for (long long S = L; S <= cap && all; ++S)
                for (long long D = -(S - L); D <= S - L && all; ++D) {
                    if (((S - L - std::llabs(D)) % 2) != 0) continue;
                    double u = static_cast<double>(S) / L, l = static_cast<double>(D) / L;
                    all = oracle::enumerate_column_paths(L, u, l, {cfg.budget}) ==
                          oracle::count_paths_stretch_form(L, u, l);
                }
        check(all, "enumerate_column_paths == count_paths_stretch_form on H_L");
    }

    // mirror symmetry (displacements of matching parity)
    {
        bool all = true;
        for (long long D = 2; D <= 6; D += 2)
            all = all && oracle::enumerate_column_paths(2, 4.0, D / 2.0) ==
                             oracle::enumerate_column_paths(2, 4.0, -D / 2.0);
        check(all, "path counts are vertical-mirror symmetric");
    }

    // finite free energy: zero coupling reduces to the path count
    {
        ModelParams prm;
        prm.alpha = 0.0;
        prm.beta = 0.0;
        prm.p = cfg.p;
        prm.M = cfg.M;
        prm.m = cfg.m;
        DisorderPair dis = DisorderPair::make(hash2(cfg.seed, 1), hash2(cfg.seed, 2), 12, cfg.p);
        double f = oracle::finite_free_energy(12, 2, dis, prm, {cfg.budget});
        double ref = oracle::log_big(oracle::finite_path_count(12, 2, prm.M, {cfg.budget})) / 12.0;
        check(std::abs(f - ref) < 1e-12, "finite_free_energy(0,0) == (1/n)log|W_{n,M}|");
        check(std::abs(f) <= std::log(3.0) + prm.alpha + 1e-12, "free energy bound log3+alpha");
    }

    // column free energy vs the variational formula with matched finite-L entropy
    {
        InterfaceConfig ic = iface_config(cfg);
        ic.samples = std::max(16, cfg.iface_samples / 4);
        InterfaceTable table = InterfaceTable::build(ic, cfg.alpha, cfg.beta, ent);
        ColumnSolver solver(ent, table);
        const int L = 3;
        solver.override_kappa(
            [&](double uu, double ll) { return ent.kappa_finite(L, uu, ll); });
        ModelParams prm;
        prm.alpha = cfg.alpha;
        prm.beta = cfg.beta;
        prm.p = cfg.p;
        prm.M = cfg.M;
        prm.m = cfg.m;
        bool all = true;
        for (int i = 0; i < 4; ++i) {
            Label solv = (i % 2 == 0) ? Label::A : Label::B;
            int dpi = i / 2;
            ColumnType th = uniform_column(solv, cfg.m, dpi, 1.0 / L, 1.0 / L, 1);
            ColumnGeometry g = geometry(th);
            double u = g.t + 2.0 / L;
            long long S = std::llround(u * L);
            if (S > cfg.budget) continue;
            auto st = oracle::column_free_energy_finite(th, u, L, 48, hash2(cfg.seed, 33 + i),
                                                        prm, {cfg.budget});
            double psi = solver.psi(th, u).value;
            if (std::abs(st.mean - psi) > 3.0 * st.stderr_ + 0.1) all = false;
        }
        check(all, "column oracle matches the variational formula at matched L");
    }

    // interface partition sanity
    {
        std::vector<Label> omega(32, Label::B);
        double z = interface_log_partition(4, 1.0, omega, cfg.alpha, -1.0);
        check(std::abs(z) < 1e-12, "interface partition at mu=1 is a single flat path");
        double z2 = interface_log_partition(4, 2.0, omega, 0.0, 0.0);
        double ref = ent.kappa_finite(4, 2.0, 0.0) * 8.0;
        check(std::abs(z2 - ref) < 1e-9, "zero-coupling interface partition counts paths");
    }

    art.write_file("oracle_check.txt", rep.str());
    art.diagnostics["failures"] = failures;
    art.finish(res);
    res.summary = rep.str();
    return res;
}

bool verify_manifest(const std::string& dir, std::string* detail) {
    std::ifstream in(fs::path(dir) / "manifest.json", std::ios::binary);
    if (!in) {
        if (detail) *detail = "manifest.json missing";
        return false;
    }
    nlohmann::json j = nlohmann::json::parse(in);
    for (const auto& [name, sum] : j.at("files").items()) {
        std::ifstream f(fs::path(dir) / name, std::ios::binary);
        if (!f) {
            if (detail) *detail = name + " missing";
            return false;
        }
        std::stringstream ss;
        ss << f.rdbuf();
        if (fnv1a_hex(ss.str()) != sum.get<std::string>()) {
            if (detail) *detail = name + " checksum mismatch";
            return false;
        }
    }
    return true;
}

} // namespace copol
