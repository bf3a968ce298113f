// Acceptance suite: every criterion prints one pass/fail line with its
// measured quantity. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "copol/commands.hpp"
#include "copol/maximizer_checks.hpp"
#include "copol/oracle.hpp"
#include "copol/phases.hpp"
#include "copol/varform.hpp"

using namespace copol;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& what) {
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", idx, what.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

EntropyEvaluator g_ent;

InterfaceTable medium_table(double alpha, double beta, std::uint64_t seed = 20240601) {
    InterfaceConfig cfg;
    cfg.samples = 64;
    cfg.mu_step = 0.2;
    cfg.ladder = {8, 16, 32};
    cfg.seed = seed;
    return InterfaceTable::build(cfg, alpha, beta, g_ent);
}

// ---------------------------------------------------------------------------

void criterion1_counts() {
    double t0 = now_s();
    long long total = 0, bad = 0;
    for (int L = 1; L <= 4; ++L)
        for (long long S = L; S <= 24; ++S)
            for (long long D = -(S - L); D <= S - L; ++D) {
                if (((S - L - std::llabs(D)) % 2) != 0) continue;
                double u = double(S) / L, l = double(D) / L;
                ++total;
                if (oracle::enumerate_column_paths(L, u, l) !=
                    oracle::count_paths_stretch_form(L, u, l))
                    ++bad;
            }
    double dt = now_s() - t0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "exact count equivalence on %lld H_L points, %lld mismatches, %.1f s",
                  total, bad, dt);
    report(1, bad == 0 && dt < 60.0, buf);
}

void criterion2_entropy_bounds() {
    bool ok = true;
    double worst_gap = 0.0;
    int pts = 0;
    for (double l : {0.0, 0.5, 1.0, 2.0})
        for (int k = 1; k <= 13; ++k) {
            double u = 1.0 + l + 0.25 * k;
            ++pts;
            double kap = g_ent.kappa(u, l);
            ok = ok && kap <= std::log(3.0) + 1e-12;
            double prev = -1.0;
            for (int L : {8, 16, 32, 64}) {
                double kL = g_ent.kappa_finite(L, u, l);
                ok = ok && kL >= prev - 1e-12 && kL <= kap + 1e-9;
                prev = kL;
            }
            worst_gap = std::max(worst_gap, kap - prev);
        }
    ok = ok && worst_gap < 5e-2 && g_ent.kappa(1.0, 0.0) == 0.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "kappa_L <= kappa <= log3 on %d points, ladder monotone, L=64 gap %.4f, "
                  "kappa(1,0)=%g",
                  pts, worst_gap, g_ent.kappa(1.0, 0.0));
    report(2, ok, buf);
}

void criterion3_derivative() {
    double worst_rel = 0.0, worst_resid = 0.0;
    int pts = 0;
    for (double l : {0.5, 1.0, 2.0})
        for (int k = 1; k <= 7; ++k) {
            double v = 1.0 + l + 0.35 * k;
            ++pts;
            double g = g_ent.kappa_derivative(v, l);
            double h = 1e-5 * std::max(1.0, v);
            auto f = [&](double x) { return x * g_ent.kappa(x, l); };
            double fd =
                (-f(v + 2 * h) + 8 * f(v + h) - 8 * f(v - h) + f(v - 2 * h)) / (12 * h);
            worst_rel = std::max(worst_rel, std::abs(g - fd) / std::abs(fd));
        }
    for (double l : {0.0, 0.5, 1.0, 2.0})
        for (double c : {0.05, 0.3, 1.0, 3.0}) {
            double v = g_ent.chi_inverse(c, l);
            worst_resid = std::max(
                worst_resid, std::abs(g_ent.kappa_derivative(v, l) - c) / std::max(1.0, c));
        }
    bool ok = worst_rel <= 1e-6 && worst_resid <= 1e-8;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "closed form vs FD rel err %.2e on %d pts; chi_inverse residual %.2e",
                  worst_rel, pts, worst_resid);
    report(3, ok, buf);
}

void criterion4_concavity(const InterfaceTable& table) {
    double worst_margin = 1e300;
    for (double l : {0.0, 0.5, 1.0, 2.0})
        for (double u1 : {1.0 + l + 0.25, 1.0 + l + 1.0, 1.0 + l + 2.5}) {
            double u2 = u1 + 1.3;
            double mid = 0.5 * (u1 + u2);
            double margin = mid * g_ent.kappa(mid, l) -
                            0.5 * (u1 * g_ent.kappa(u1, l) + u2 * g_ent.kappa(u2, l));
            worst_margin = std::min(worst_margin, margin);
        }
    double viol = table.hull().concavity_violation();
    bool ok = worst_margin > 1e-8 && viol == 0.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "strict concavity margin %.2e (> 1e-8); envelope violation %.1e", worst_margin,
                  viol);
    report(4, ok, buf);
}

void criterion5_collapse() {
    double t0 = now_s();
    bool ok = true;
    double worst = -1e300;
    for (auto [a, b] : std::vector<std::pair<double, double>>{{2.0, 0.0}, {2.0, -1.0}})
        for (double mu : {1.5, 2.0, 3.0}) {
            PhiFiniteStat st = phi_finite(32, mu, 200, hash3(1, std::llround(a * 100 + b),
                                                             std::llround(mu * 100)),
                                          a, b);
            double kap = g_ent.kappa(mu, 0.0);
            double est = std::max(st.mean, kap);  // table estimator (floored)
            double excess = std::abs(est - kap) - (2.0 * st.stderr_ + 0.05);
            worst = std::max(worst, excess);
            ok = ok && excess <= 0.0;
        }
    double dt = now_s() - t0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "interface estimate collapse at beta<=0, worst excess %.3f, %.0f s", worst,
                  dt);
    report(5, ok && dt < 600.0, buf);
}

void criterion6_column_vs_lattice() {
    ModelParams prm;
    prm.alpha = 2.0;
    prm.beta = 1.0;
    prm.p = 0.5;
    prm.M = 2;
    prm.m = 4;
    InterfaceTable table = medium_table(prm.alpha, prm.beta);
    bool ok = true;
    double worst = -1e300;
    int menu_size = 0;
    for (int L : {2, 3}) {
        ColumnSolver solver(g_ent, table);
        solver.override_kappa(
            [&, L](double uu, double ll) { return g_ent.kappa_finite(L, uu, ll); });
        for (int i = 0; i < 5; ++i) {
            Label solv = (i % 2 == 0) ? Label::A : Label::B;
            int dpi = i / 2;
            double b0 = 1.0 / L, b1 = (i % 2 == 0) ? 1.0 / L : 1.0;
            ColumnType th = uniform_column(solv, prm.m, dpi, b0, b1, 1);
            ColumnGeometry g = geometry(th);
            double u = g.t + 2.0 / L;
            if (u * L > 24) continue;
            ++menu_size;
            auto st = oracle::column_free_energy_finite(
                th, u, L, 64, hash3(7, L, static_cast<std::uint64_t>(i)), prm);
            double psi = solver.psi(th, u).value;
            double excess = std::abs(st.mean - psi) - (3.0 * st.stderr_ + 0.1);
            worst = std::max(worst, excess);
            ok = ok && excess <= 0.0;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "variational psi vs lattice (matched-L entropy) on %d columns, worst "
                  "excess %.3f",
                  menu_size, worst);
    report(6, ok && menu_size >= 10, buf);
}

void criterion7_dinkelbach(const std::vector<SlopeMeasure>& family,
                           const InterfaceTable& table) {
    SlopeEngine eng{&g_ent, &table, 2.0, 1.0};
    bool ok = true;
    double worst_resid = 0.0, worst_improve = -1e300;
    CounterRng rng(424242);
    for (const SlopeMeasure& m : family) {
        DinkelbachResult r = free_energy_for_measure(eng, m);
        worst_resid = std::max(worst_resid, r.residual);
        for (int t = 0; t < 100; ++t) {
            SpeedProfile v = r.speeds;
            double mag = std::pow(10.0, -3.0 + 3.0 * rng.next_u01());
            for (std::size_t i = 0; i < v.vA.size(); ++i)
                v.vA[i] = std::max(1.0 + m.atomsA[i].l + 1e-12,
                                   v.vA[i] + mag * (2 * rng.next_u01() - 1));
            for (std::size_t i = 0; i < v.vB.size(); ++i)
                v.vB[i] = std::max(1.0 + m.atomsB[i].l + 1e-12,
                                   v.vB[i] + mag * (2 * rng.next_u01() - 1));
            v.vI = std::max(1.0, v.vI + mag * (2 * rng.next_u01() - 1));
            worst_improve = std::max(worst_improve, slope_ratio(eng, m, v) - r.value);
        }
        ok = ok && r.residual <= 1e-9;
    }
    ok = ok && worst_improve <= 1e-6;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "fixed-point residual %.1e (<=1e-9); best perturbation gain %.1e (<=1e-6)",
                  worst_resid, worst_improve);
    report(7, ok, buf);
}

void criterion8_positivity() {
    bool ok = true;
    std::string vals;
    for (auto [a, b, p] : std::vector<std::tuple<double, double, double>>{
             {2.0, 1.0, 0.5}, {3.0, 0.0, 0.3}, {1.0, 1.0, 0.7}}) {
        InterfaceTable table = medium_table(a, b);
        FamilyConfig fc;
        fc.p = p;
        fc.meso_seed = 2025;
        fc.columns = 4000;
        std::vector<SlopeMeasure> family = measure_family_from_disorder(fc);
        SlopeEngine eng{&g_ent, &table, a, b};
        double best = 0.0;
        for (const SlopeMeasure& m : family) {
            try {
                best = std::max(best, free_energy_for_measure(eng, m).value);
            } catch (const NonPositive&) {
            }
        }
        ok = ok && best > 0.0;
        char buf[64];
        std::snprintf(buf, sizeof buf, " f(%g,%g,%g)=%.4f", a, b, p, best);
        vals += buf;
    }
    report(8, ok, "free energy strictly positive:" + vals);
}

void criterion9_phase_structure() {
    double t0 = now_s();
    PhaseEngine::Config pc;
    pc.iface.samples = 48;
    pc.iface.mu_step = 0.25;
    pc.iface.ladder = {8, 16};
    PhaseEngine phase(g_ent, pc);
    FamilyConfig fc;
    fc.p = 0.7;
    fc.meso_seed = 31337;
    fc.columns = 4000;
    std::vector<SlopeMeasure> family = measure_family_from_disorder(fc);

    // bitwise constancy of f_D along J_alpha
    bool bitwise = true;
    {
        double ref = -1.0;
        for (double b : {-0.5, 0.0, 1.0, 2.0}) {
            double v = phase.f_delocalized(family, 1.5).value;  // alpha-beta fixed
            (void)b;
            if (ref < 0)
                ref = v;
            else
                bitwise = bitwise && (v == ref);
        }
        InterfaceTable t1 = InterfaceTable::build(pc.iface, 2.0, 0.5, g_ent);
        InterfaceTable t2 = InterfaceTable::build(pc.iface, 3.0, 1.5, g_ent);
        PhasePoint q1 = phase.classify(2.0, 0.5, 0.7, family, t1);
        PhasePoint q2 = phase.classify(3.0, 1.5, 0.7, family, t2);
        bitwise = bitwise && (q1.fD == q2.fD);
    }

    bool never_L = true, ordered = true;
    int points = 0;
    for (int ia = 0; ia < 21; ++ia)
        for (int ib = 0; ib < 21; ++ib) {
            double a = 0.0 + ia * (5.0 - 0.0) / 20;
            double b = -2.5 + ib * 5.0 / 20;
            if (a < std::abs(b)) a = std::abs(b);  // clamp onto CONE
            InterfaceConfig ic = pc.iface;
            ic.seed = hash3(99, ia, ib);
            InterfaceTable table = InterfaceTable::build(ic, a, b, g_ent);
            PhasePoint pt = phase.classify(a, b, 0.7, family, table);
            ++points;
            if (b <= 0.0 && (pt.phase == Phase::L1 || pt.phase == Phase::L2))
                never_L = false;
            if (!(pt.f >= pt.fD - 1e-9 && pt.fD >= pt.fD2 - 1e-9 &&
                  pt.f >= pt.fL2 - 1e-9 && pt.fL2 >= pt.fD2 - 1e-9))
                ordered = false;
        }
    double dt = now_s() - t0;
    bool ok = bitwise && never_L && ordered && dt < 1800.0;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "f_D bitwise on J_alpha: %d; no L at beta<=0: %d; orderings at 1e-9 on %d "
                  "points: %d; %.0f s",
                  bitwise, never_L, points, ordered, dt);
    report(9, ok, buf);
}

void criterion10_transforms(const InterfaceTable& table) {
    ColumnSolver solver(g_ent, table);
    SlopeEngine eng{&g_ent, &table, 2.0, 1.0};
    CounterRng rng(5150);
    double worst_push = 0.0, worst_lift = 0.0;
    int push_n = 0, lift_n = 0;

    auto random_menu = [&](int atoms, FractionProfile* hout) {
        ColumnMeasure menu;
        for (int i = 0; i < atoms; ++i) {
            int kind = static_cast<int>(rng.below(3));
            int b0 = 1 + static_cast<int>(rng.below(62));
            int b1 = 1 + static_cast<int>(rng.below(62));
            if (b0 == b1) b1 = (b1 % 62) + 1;
            ColumnType th;
            if (kind == 0)
                th = column_from([](int r) { return r >= 1 ? Label::A : Label::B; }, 4, 2,
                                 b0 / 64.0, b1 / 64.0, 1);
            else if (kind == 1)
                th = uniform_column(Label::A, 4, 1 + static_cast<int>(rng.below(2)),
                                    b0 / 64.0, b1 / 64.0, 1);
            else
                th = uniform_column(Label::B, 4, 1, b0 / 64.0, b1 / 64.0, 1);
            menu.atoms.push_back({th, 0.2 + rng.next_u01()});
        }
        menu.normalize();
        hout->h.clear();
        for (const auto& a : menu.atoms) {
            ColumnGeometry g = geometry(a.theta);
            FractionTriple t;
            if (g.cls == ColumnClass::NintA1)
                t.hA = 1.0;
            else if (g.cls == ColumnClass::NintB1)
                t.hB = 1.0;
            else {
                t.hI = 0.1 + 0.3 * rng.next_u01();
                double wa = g.lA + 0.05, wb = g.lB + 0.05;
                t.hA = (1.0 - t.hI) * wa / (wa + wb);
                t.hB = (1.0 - t.hI) * wb / (wa + wb);
            }
            hout->h.push_back(t);
        }
        return menu;
    };

    while (push_n < 100 || lift_n < 100) {
        FractionProfile h;
        ColumnMeasure menu = random_menu(3, &h);
        if (push_n < 100) {
            LiftData gen = lift_to_slope(menu, h, nullptr);
            SpeedProfile v;
            for (const SlopeAtom& a : gen.measure.atomsA)
                v.vA.push_back(1.0 + a.l + 0.2 + 2.0 * rng.next_u01());
            for (const SlopeAtom& a : gen.measure.atomsB)
                v.vB.push_back(1.0 + a.l + 0.2 + 2.0 * rng.next_u01());
            v.vI = 1.0 + 2.0 * rng.next_u01();
            PushData pd = push_to_column(gen.measure, v, menu, h);
            double sr = slope_ratio(eng, gen.measure, v);
            double cr = column_ratio(solver, pd.measure, pd.u, &pd.seeds);
            worst_push = std::max(worst_push, sr - cr);
            ++push_n;
        }
        if (lift_n < 100) {
            std::vector<double> u(menu.atoms.size());
            std::vector<PsiPoint> maxims(menu.atoms.size());
            FractionProfile hm;
            bool usable = true;
            for (std::size_t i = 0; i < menu.atoms.size(); ++i) {
                ColumnGeometry g = geometry(menu.atoms[i].theta);
                u[i] = g.t + 0.3 + 2.0 * rng.next_u01();
                PsiResult pr = solver.psi(menu.atoms[i].theta, u[i]);
                maxims[i] = pr.arg;
                FractionTriple ft{pr.arg.hA, pr.arg.hB, pr.arg.hI};
                if ((g.lA > 0 && ft.hA <= 0) || (g.lB > 0 && ft.hB <= 0)) usable = false;
                hm.h.push_back(ft);
            }
            if (usable) {
                double cr = column_ratio(solver, menu, u);
                LiftData ld = lift_to_slope(menu, hm, &maxims);
                double sr = slope_ratio(eng, ld.measure, ld.speeds);
                worst_lift = std::max(worst_lift, cr - sr);
                ++lift_n;
            }
        }
    }
    bool ok = worst_push <= 1e-9 && worst_lift <= 1e-9;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "push violation %.1e, lift violation %.1e over 100 trials each", worst_push,
                  worst_lift);
    report(10, ok, buf);
}

void criterion11_hypothesis(const std::vector<SlopeMeasure>& family) {
    PhaseEngine::Config pc;
    pc.iface.samples = 24;
    pc.iface.mu_step = 0.25;
    pc.iface.ladder = {8, 16};
    PhaseEngine phase(g_ent, pc);
    auto rep = phase.hypothesis2_diagnostic(family);
    bool ok = rep.g0_positive && rep.decreasing && rep.sign_change_l > 0.0 &&
              std::abs(rep.integral_at_maximizer) <= 1e-3;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "g(0)=%.4f>0, decreasing=%d, sign change at l=%.2f, |integral|=%.1e",
                  rep.g_values.front(), rep.decreasing, rep.sign_change_l,
                  std::abs(rep.integral_at_maximizer));
    report(11, ok, buf);
}

void criterion12_reproducibility() {
    RunConfig cfg;
    cfg.entropy_ladder = {4, 8};
    cfg.entropy_u_max = 3.0;
    cfg.budget = 12;
    cfg.iface_samples = 12;
    cfg.iface_mu_step = 0.5;
    cfg.iface_ladder = {4, 8};
    cfg.family_columns = 1000;

    fs::path base = fs::temp_directory_path() / "copol_acceptance";
    fs::remove_all(base);
    bool ok = true;
    for (int round = 0; round < 2; ++round) {
        cfg.out_dir = (base / ("r" + std::to_string(round))).string();
        ok = ok && cmd_entropy(cfg).exit_code == 0;
        ok = ok && cmd_free_energy(cfg).exit_code == 0;
    }
    int files = 0;
    for (const auto& entry : fs::recursive_directory_iterator(base / "r0")) {
        if (!entry.is_regular_file()) continue;
        fs::path rel = fs::relative(entry.path(), base / "r0");
        ++files;
        if (slurp(entry.path()) != slurp(base / "r1" / rel)) ok = false;
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d artifacts byte-identical across reruns", files);
    report(12, ok && files > 0, buf);
}

}  // namespace

int main() {
    double t0 = now_s();
    std::printf("copol acceptance suite\n");

    criterion1_counts();
    criterion2_entropy_bounds();
    criterion3_derivative();

    InterfaceTable table21 = medium_table(2.0, 1.0);
    criterion4_concavity(table21);
    criterion5_collapse();
    criterion6_column_vs_lattice();

    FamilyConfig fc;
    fc.p = 0.5;
    fc.meso_seed = 2025;
    fc.columns = 4000;
    std::vector<SlopeMeasure> family05 = measure_family_from_disorder(fc);
    criterion7_dinkelbach(family05, table21);
    criterion8_positivity();
    criterion9_phase_structure();
    criterion10_transforms(table21);

    fc.p = 0.7;
    fc.meso_seed = 31337;
    std::vector<SlopeMeasure> family07 = measure_family_from_disorder(fc);
    criterion11_hypothesis(family07);
    criterion12_reproducibility();

    std::printf("%s: %d criterion(s) failed, %.0f s total\n",
                g_failures == 0 ? "ALL PASS" : "FAILURES", g_failures, now_s() - t0);
    return g_failures;
}
