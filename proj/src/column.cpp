#include "copol/column.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace copol {

namespace {

constexpr double kGolden = 0.6180339887498949;

// maximize a concave 1-d slice by golden section on [lo,hi]
template <class Fn>
double golden_max(Fn&& f, double lo, double hi, double tol) {
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? x1 : x2;
}

inline double clamp(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

struct ActiveFlags {
    bool A = false;
    bool B = false;
};

// solvent pairs with l_k = 0 on the interface-carrying classes are pinned to
// zero (their mass routes through the interface term at no loss)
ActiveFlags active_flags(const ColumnGeometry& g) {
    ActiveFlags f;
    if (g.cls == ColumnClass::Int) {
        f.A = g.lA > 0.0;
        f.B = g.lB > 0.0;
    } else if (g.cls == ColumnClass::NintA2) {
        f.A = g.lA > 0.0;
    } else if (g.cls == ColumnClass::NintB2) {
        f.B = g.lB > 0.0;
    }
    return f;
}

}  // namespace

double ColumnSolver::objective(const ColumnGeometry& g, double u, const PsiPoint& p) const {
    (void)u;
    const double bshift = 0.5 * (iface_->beta - iface_->alpha);
    double val = 0.0;
    auto solvent = [&](double a, double h, double l) -> double {
        if (h <= 0.0 || a <= 0.0) return 0.0;
        return a * kappa(a / h, l / h);
    };
    val += solvent(p.aA, p.hA, g.lA);
    val += solvent(p.aB, p.hB, g.lB) + p.aB * bshift;
    if (p.hI > 0.0 && p.aI > 0.0) val += p.hI * iface_->mu_phi(p.aI / p.hI);
    return val;
}

PsiResult ColumnSolver::solve_from(const ColumnGeometry& g, double u, PsiPoint seed,
                                   bool activeA, bool activeB) const {
    PsiPoint p = seed;
    // project the seed into the feasible set
    if (!activeA) p.hA = p.aA = 0.0;
    if (!activeB) p.hB = p.aB = 0.0;
    p.hA = clamp(p.hA, 0.0, 1.0);
    p.hB = clamp(p.hB, 0.0, 1.0 - p.hA);
    p.hI = 1.0 - p.hA - p.hB;
    if (activeA) p.aA = std::max(p.aA, p.hA + g.lA);
    if (activeB) p.aB = std::max(p.aB, p.hB + g.lB);
    {
        double floorA = activeA ? p.hA + g.lA : 0.0;
        double floorB = activeB ? p.hB + g.lB : 0.0;
        double slack = u - floorA - floorB - p.hI;
        if (slack < 0.0) slack = 0.0;
        double exA = p.aA - floorA, exB = p.aB - floorB;
        double tot = exA + exB;
        if (p.aA + p.aB + p.hI > u) {
            if (tot > 0.0) {
                p.aA = floorA + slack * (exA / tot);
                p.aB = floorB + slack * (exB / tot);
            } else {
                p.aA = floorA;
                p.aB = floorB;
            }
        }
        p.aI = u - p.aA - p.aB;
    }

    auto value = [&](const PsiPoint& q) { return objective(g, u, q); };
    double best = value(p);

    // line search along a coupled direction d = (dhA,daA,dhB,daB); the
    // feasible s-interval comes from a ratio test on the linear constraints
    auto direction_search = [&](double dhA, double daA, double dhB, double daB) {
        if (!activeA) dhA = daA = 0.0;
        if (!activeB) dhB = daB = 0.0;
        if (dhA == 0.0 && daA == 0.0 && dhB == 0.0 && daB == 0.0) return;
        double smin = -1e18, smax = 1e18;
        auto bound = [&](double val, double der) {
            // constraint val + s*der >= 0
            if (der > 1e-15)
                smin = std::max(smin, -val / der);
            else if (der < -1e-15)
                smax = std::min(smax, -val / der);
            else if (val < -1e-12)
                smax = smin - 1.0;  // infeasible direction
        };
        double hI = 1.0 - p.hA - p.hB;
        double aI = u - p.aA - p.aB;
        bound(p.hA, dhA);
        bound(p.hB, dhB);
        bound(hI, -dhA - dhB);
        if (activeA) bound(p.aA - p.hA - g.lA, daA - dhA);
        if (activeB) bound(p.aB - p.hB - g.lB, daB - dhB);
        bound(aI - hI, -daA - daB + dhA + dhB);
        bound(aI, -daA - daB);
        if (!(smax > smin)) return;
        auto at = [&](double s) {
            PsiPoint q = p;
            q.hA += s * dhA;
            q.aA += s * daA;
            q.hB += s * dhB;
            q.aB += s * daB;
            q.hI = 1.0 - q.hA - q.hB;
            q.aI = u - q.aA - q.aB;
            return q;
        };
        double s = golden_max([&](double x) { return value(at(x)); }, smin, smax,
                              cfg_.coord_tol * std::max(1.0, smax - smin));
        PsiPoint q = at(s);
        if (value(q) >= value(p)) p = q;
    };

    for (int sweep = 0; sweep < cfg_.max_sweeps; ++sweep) {
        if (activeA) {
            double lo = std::max(0.0, 1.0 - p.hB - (u - p.aA - p.aB));
            double hi = std::min(1.0 - p.hB, p.aA - g.lA);
            if (hi > lo)
                p.hA = golden_max(
                    [&](double x) {
                        PsiPoint q = p;
                        q.hA = x;
                        q.hI = 1.0 - q.hA - q.hB;
                        return value(q);
                    },
                    lo, hi, cfg_.coord_tol);
            p.hI = 1.0 - p.hA - p.hB;

            double alo = p.hA + g.lA;
            double ahi = u - p.aB - p.hI;
            if (ahi > alo)
                p.aA = golden_max(
                    [&](double x) {
                        PsiPoint q = p;
                        q.aA = x;
                        q.aI = u - q.aA - q.aB;
                        return value(q);
                    },
                    alo, ahi, cfg_.coord_tol);
            else
                p.aA = alo;
            p.aI = u - p.aA - p.aB;
        }
        if (activeB) {
            double lo = std::max(0.0, 1.0 - p.hA - (u - p.aA - p.aB));
            double hi = std::min(1.0 - p.hA, p.aB - g.lB);
            if (hi > lo)
                p.hB = golden_max(
                    [&](double x) {
                        PsiPoint q = p;
                        q.hB = x;
                        q.hI = 1.0 - q.hA - q.hB;
                        return value(q);
                    },
                    lo, hi, cfg_.coord_tol);
            p.hI = 1.0 - p.hA - p.hB;

            double alo = p.hB + g.lB;
            double ahi = u - p.aA - p.hI;
            if (ahi > alo)
                p.aB = golden_max(
                    [&](double x) {
                        PsiPoint q = p;
                        q.aB = x;
                        q.aI = u - q.aA - q.aB;
                        return value(q);
                    },
                    alo, ahi, cfg_.coord_tol);
            else
                p.aB = alo;
            p.aI = u - p.aA - p.aB;
        }
        // coupled moves unlock corners the single coordinates cannot leave
        direction_search(1.0, 1.0, 0.0, 0.0);   // trade interface mass into A
        direction_search(0.0, 0.0, 1.0, 1.0);   // ... into B
        direction_search(1.0, 0.0, -1.0, 0.0);  // A<->B horizontal trade
        direction_search(0.0, 1.0, 0.0, -1.0);  // A<->B step trade
        if (p.hA > 1e-12 && p.aA > 0.0)
            direction_search(1.0, p.aA / p.hA, 0.0, 0.0);  // ray move at fixed A-speed
        if (p.hB > 1e-12 && p.aB > 0.0)
            direction_search(0.0, 0.0, 1.0, p.aB / p.hB);
        double now = value(p);
        if (now - best <= cfg_.sweep_tol * std::max(1.0, std::abs(best))) {
            best = std::max(best, now);
            break;
        }
        best = now;
    }

    PsiResult r;
    r.arg = p;
    r.value = best;  // u * psi scale
    if (p.hI > 0.0 && p.aI / p.hI >= iface_->cfg.mu_max - 1e-12) r.interface_saturated = true;
    return r;
}

std::vector<PsiPoint> ColumnSolver::default_seeds(const ColumnGeometry& g, double u,
                                                  bool activeA, bool activeB) const {
    auto build = [&](double fA, double fB, double wA, double wB) {
        PsiPoint p;
        if (!activeA) fA = 0.0;
        if (!activeB) fB = 0.0;
        double fI = 1.0 - fA - fB;
        p.hA = fA;
        p.hB = fB;
        p.hI = fI;
        double slack = u - (activeA ? fA + g.lA : 0.0) - (activeB ? fB + g.lB : 0.0) - fI;
        if (slack < 0.0) slack = 0.0;
        if (!activeA) wA = 0.0;
        if (!activeB) wB = 0.0;
        p.aA = activeA ? p.hA + g.lA + slack * wA : 0.0;
        p.aB = activeB ? p.hB + g.lB + slack * wB : 0.0;
        p.aI = u - p.aA - p.aB;
        return p;
    };

    std::vector<PsiPoint> seeds;
    seeds.push_back(build(0.05, 0.05, 0.05, 0.05));  // interface-leaning
    seeds.push_back(build(0.85, 0.05, 0.80, 0.05));  // A-leaning
    seeds.push_back(build(0.05, 0.85, 0.05, 0.80));  // B-leaning
    {
        double pa = g.lA + 0.2, pb = g.lB + 0.2, pi = 0.3;
        double tot = (activeA ? pa : 0.0) + (activeB ? pb : 0.0) + pi;
        seeds.push_back(build(activeA ? pa / tot : 0.0, activeB ? pb / tot : 0.0,
                              activeA ? pa / tot : 0.0, activeB ? pb / tot : 0.0));
    }
    PsiPoint bestp = seeds.front();
    double bestv = -std::numeric_limits<double>::infinity();
    for (double fA : {0.0, 0.2, 0.45, 0.7, 0.95})
        for (double fB : {0.0, 0.2, 0.45, 0.7, 0.95}) {
            if (fA + fB > 1.0) continue;
            for (double wA : {0.1, 0.5, 0.9})
                for (double wB : {0.1, 0.5, 0.9}) {
                    if (wA + wB > 1.0) continue;
                    PsiPoint p = build(fA, fB, wA, wB);
                    double v = objective(g, u, p);
                    if (v > bestv) {
                        bestv = v;
                        bestp = p;
                    }
                }
        }
    seeds.push_back(bestp);
    return seeds;
}

std::vector<PsiResult> ColumnSolver::psi_multistart(const ColumnType& th, double u) const {
    ColumnGeometry g = geometry(th);
    if (u < g.t - 1e-12) throw DomainError("psi: u < t_Theta");
    u = std::max(u, g.t);

    const double bshift = 0.5 * (iface_->beta - iface_->alpha);
    std::vector<PsiResult> out;

    if (g.cls == ColumnClass::NintA1) {
        PsiResult r;
        r.arg.hA = 1.0;
        r.arg.aA = u;
        r.value = u * kappa(u, g.lA);
        out.push_back(r);
        return out;
    }
    if (g.cls == ColumnClass::NintB1) {
        PsiResult r;
        r.arg.hB = 1.0;
        r.arg.aB = u;
        r.value = u * (kappa(u, g.lB) + bshift);
        out.push_back(r);
        return out;
    }

    ActiveFlags fl = active_flags(g);
    for (PsiPoint s : default_seeds(g, u, fl.A, fl.B))
        out.push_back(solve_from(g, u, s, fl.A, fl.B));
    return out;
}

PsiResult ColumnSolver::psi(const ColumnType& th, double u,
                            const std::vector<PsiPoint>& extra_seeds) const {
    ColumnGeometry g = geometry(th);
    if (u < g.t - 1e-12) throw DomainError("psi: u < t_Theta");
    u = std::max(u, g.t);

    std::vector<PsiResult> runs = psi_multistart(th, u);
    if (!extra_seeds.empty() && g.cls != ColumnClass::NintA1 && g.cls != ColumnClass::NintB1) {
        ActiveFlags fl = active_flags(g);
        for (const PsiPoint& s : extra_seeds) runs.push_back(solve_from(g, u, s, fl.A, fl.B));
    }

    PsiResult best = runs.front();
    double worst = best.value;
    for (const PsiResult& r : runs) {
        if (r.value > best.value) best = r;
        worst = std::min(worst, r.value);
    }
    best.multistart_spread = (best.value - worst) / std::max(1.0, std::abs(best.value));
    best.value /= u;
    return best;
}

UThetaResult ColumnSolver::u_theta_of_c(const ColumnType& th, double c) const {
    if (!(c > 0.0)) throw DomainError("u_theta_of_c: c must be positive");
    ColumnGeometry g = geometry(th);
    const double bshift = 0.5 * (iface_->beta - iface_->alpha);

    // pure-solvent classes have closed-form slopes
    if (!kappa_override_ && g.cls == ColumnClass::NintA1)
        return {std::max(g.t, ent_->chi_inverse(c, g.lA)), false};
    if (!kappa_override_ && g.cls == ColumnClass::NintB1) {
        if (c <= bshift + 1e-12) return {cfg_.u_max, true};  // asymptotic slope (beta-alpha)/2
        return {std::max(g.t, ent_->chi_inverse(c - bshift, g.lB)), false};
    }

    auto G = [&](double u) { return u * psi(th, u).value; };
    const double d0 = cfg_.slope_step * std::max(1.0, g.t);
    auto slope = [&](double u) { return (G(u + d0) - G(u - d0)) / (2.0 * d0); };

    double right_at_t = (G(g.t + 2.0 * d0) - G(g.t)) / (2.0 * d0);
    if (right_at_t <= c) return {g.t, false};

    double lo = g.t, hi = std::max(2.0 * g.t, g.t + 1.0);
    while (slope(hi) > c) {
        hi *= 2.0;
        if (hi >= cfg_.u_max) return {cfg_.u_max, true};
    }
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (slope(mid) > c)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-6 * std::max(1.0, hi)) break;
    }
    return {0.5 * (lo + hi), false};
}

// ----------------------------------------------------------------------------

std::string menu_to_json(const std::vector<MenuAtom>& menu) {
    nlohmann::json j;
    j["format"] = "copol-column-menu";
    j["version"] = 1;
    nlohmann::json atoms = nlohmann::json::array();
    for (const MenuAtom& a : menu) {
        nlohmann::json t;
        std::string chi;
        for (Label l : a.theta.chi) chi.push_back(l == Label::A ? 'A' : 'B');
        t["chi"] = chi;
        t["m"] = a.theta.m;
        t["dpi"] = a.theta.dpi;
        t["b0"] = a.theta.b0;
        t["b1"] = a.theta.b1;
        t["x"] = a.theta.x;
        t["weight"] = a.weight;
        ColumnGeometry g = geometry(a.theta);
        t["geometry"] = {{"k", g.k}, {"t", g.t}, {"lA", g.lA}, {"lB", g.lB},
                         {"class", to_string(g.cls)}};
        atoms.push_back(t);
    }
    j["atoms"] = atoms;
    return j.dump(2);
}

std::vector<MenuAtom> menu_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format") != "copol-column-menu") throw DomainError("not a column menu");
    std::vector<MenuAtom> out;
    for (const auto& t : j.at("atoms")) {
        MenuAtom a;
        std::string chi = t.at("chi");
        a.theta.m = t.at("m");
        a.theta.chi.clear();
        for (char ch : chi) a.theta.chi.push_back(ch == 'A' ? Label::A : Label::B);
        a.theta.dpi = t.at("dpi");
        a.theta.b0 = t.at("b0");
        a.theta.b1 = t.at("b1");
        a.theta.x = t.at("x");
        a.weight = t.at("weight");
        a.theta.validate();
        out.push_back(a);
    }
    return out;
}

} // namespace copol
