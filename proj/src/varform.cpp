#include "copol/varform.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <limits>
#include <map>

#include "json.hpp"
#include "copol/rng.hpp"

namespace copol {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// measures
// ---------------------------------------------------------------------------

double SlopeMeasure::total() const {
    double t = wI;
    for (const SlopeAtom& a : atomsA) t += a.w;
    for (const SlopeAtom& a : atomsB) t += a.w;
    return t;
}

void SlopeMeasure::normalize() {
    double t = total();
    if (t <= 0.0) throw ConstraintViolation("SlopeMeasure: zero total mass");
    for (SlopeAtom& a : atomsA) a.w /= t;
    for (SlopeAtom& a : atomsB) a.w /= t;
    wI /= t;
}

void SlopeMeasure::validate() const {
    for (const SlopeAtom& a : atomsA)
        if (!(a.w > 0.0) || !(a.l >= 0.0) || !std::isfinite(a.l))
            throw ConstraintViolation("SlopeMeasure: bad A atom");
    for (const SlopeAtom& a : atomsB)
        if (!(a.w > 0.0) || !(a.l >= 0.0) || !std::isfinite(a.l))
            throw ConstraintViolation("SlopeMeasure: bad B atom");
    if (wI < 0.0) throw ConstraintViolation("SlopeMeasure: negative interface mass");
    if (std::abs(total() - 1.0) > 1e-12)
        throw ConstraintViolation("SlopeMeasure: total mass must be 1");
}

double SlopeMeasure::massB() const {
    double t = 0.0;
    for (const SlopeAtom& a : atomsB) t += a.w;
    return t;
}

void ColumnMeasure::normalize() {
    double t = 0.0;
    for (const ColumnMeasureAtom& a : atoms) t += a.weight;
    if (t <= 0.0) throw ConstraintViolation("ColumnMeasure: zero total mass");
    for (ColumnMeasureAtom& a : atoms) a.weight /= t;
}

void FractionProfile::validate(const ColumnMeasure& rho) const {
    if (h.size() != rho.atoms.size())
        throw ConstraintViolation("FractionProfile: size mismatch");
    for (std::size_t i = 0; i < h.size(); ++i) {
        const FractionTriple& t = h[i];
        if (t.hA < 0 || t.hB < 0 || t.hI < 0 ||
            std::abs(t.hA + t.hB + t.hI - 1.0) > 1e-9)
            throw ConstraintViolation("FractionProfile: not a probability triple");
        ColumnGeometry g = geometry(rho.atoms[i].theta);
        if (g.lA > 0.0 && !(t.hA > 0.0))
            throw ConstraintViolation("FractionProfile: hA=0 with lA>0");
        if (g.lB > 0.0 && !(t.hB > 0.0))
            throw ConstraintViolation("FractionProfile: hB=0 with lB>0");
        if (g.cls == ColumnClass::NintA1 && std::abs(t.hA - 1.0) > 1e-9)
            throw ConstraintViolation("FractionProfile: nint(A,1) needs hA=1");
        if (g.cls == ColumnClass::NintB1 && std::abs(t.hB - 1.0) > 1e-9)
            throw ConstraintViolation("FractionProfile: nint(B,1) needs hB=1");
        if (g.cls == ColumnClass::NintA2 && std::abs(t.hA + t.hI - 1.0) > 1e-9)
            throw ConstraintViolation("FractionProfile: nint(A,2) needs hA+hI=1");
        if (g.cls == ColumnClass::NintB2 && std::abs(t.hB + t.hI - 1.0) > 1e-9)
            throw ConstraintViolation("FractionProfile: nint(B,2) needs hB+hI=1");
    }
}

// ---------------------------------------------------------------------------
// slope-based formula
// ---------------------------------------------------------------------------

double slope_ratio(const SlopeEngine& eng, const SlopeMeasure& rho, const SpeedProfile& v) {
    if (v.vA.size() != rho.atomsA.size() || v.vB.size() != rho.atomsB.size())
        throw ConstraintViolation("SpeedProfile not aligned with measure");
    double N = 0.0, D = 0.0;
    for (std::size_t i = 0; i < rho.atomsA.size(); ++i) {
        double l = rho.atomsA[i].l, w = rho.atomsA[i].w, s = v.vA[i];
        if (std::isinf(s)) return -kInf;  // D-bar = infinity convention
        if (s < 1.0 + l - 1e-9) throw ConstraintViolation("vA below 1+l");
        N += w * s * eng.ent->kappa(s, l);
        D += w * s;
    }
    for (std::size_t i = 0; i < rho.atomsB.size(); ++i) {
        double l = rho.atomsB[i].l, w = rho.atomsB[i].w, s = v.vB[i];
        if (std::isinf(s)) return -kInf;
        if (s < 1.0 + l - 1e-9) throw ConstraintViolation("vB below 1+l");
        N += w * (s * eng.ent->kappa(s, l) + s * eng.bshift());
        D += w * s;
    }
    if (rho.wI > 0.0) {
        if (std::isinf(v.vI)) return -kInf;
        if (v.vI < 1.0 - 1e-9) throw ConstraintViolation("vI below 1");
        N += rho.wI * eng.iface->mu_phi(v.vI);  // = vI * phi(vI)
        D += rho.wI * v.vI;
    }
    if (D <= 0.0) throw ConstraintViolation("slope_ratio: empty denominator");
    return N / D;
}

SpeedProfile optimal_speed(const SlopeEngine& eng, double c, const SlopeMeasure& rho) {
    if (!(c > 0.0)) throw DomainError("optimal_speed: c must be positive");
    SpeedProfile v;
    v.vA.reserve(rho.atomsA.size());
    v.vB.reserve(rho.atomsB.size());
    for (const SlopeAtom& a : rho.atomsA) v.vA.push_back(eng.ent->chi_inverse(c, a.l));
    const double cb = c + 0.5 * (eng.alpha - eng.beta);
    for (const SlopeAtom& a : rho.atomsB) v.vB.push_back(eng.ent->chi_inverse(cb, a.l));
    if (rho.wI > 0.0) {
        SpeedQuery q = eng.iface->v_I_of_c(c);
        v.vI = q.v;
        v.saturated = q.saturated;
    }
    return v;
}

DinkelbachResult free_energy_for_measure(const SlopeEngine& eng, const SlopeMeasure& rho,
                                         double tol, int max_iter) {
    rho.validate();
    DinkelbachResult out;

    // positivity probe: with the exact inner maximizer, ratio(v(eps)) > eps
    // iff the fixed point exceeds eps
    const double eps = 1e-6;
    double c = slope_ratio(eng, rho, optimal_speed(eng, eps, rho));
    if (!(c > eps))
        throw NonPositive("free energy not positive for this measure (probe failed)");

    out.trace.push_back(c);
    for (int it = 1; it <= max_iter; ++it) {
        SpeedProfile v = optimal_speed(eng, c, rho);
        double cn = slope_ratio(eng, rho, v);
        out.iterations = it;
        out.residual = std::abs(cn - c);
        out.trace.push_back(cn);
        if (out.residual <= tol) {
            out.value = cn;
            out.speeds = std::move(v);
            out.saturated = out.speeds.saturated;
            return out;
        }
        c = cn;
    }
    throw NoConvergence("Dinkelbach did not converge");
}

// ---------------------------------------------------------------------------
// column-based formula
// ---------------------------------------------------------------------------

double column_ratio(const ColumnSolver& solver, const ColumnMeasure& rho,
                    const std::vector<double>& u, const std::vector<PsiPoint>* seeds) {
    if (u.size() != rho.atoms.size()) throw ConstraintViolation("u-map not aligned");
    if (seeds && seeds->size() != rho.atoms.size())
        throw ConstraintViolation("seed list not aligned");
    double N = 0.0, D = 0.0;
    for (std::size_t i = 0; i < rho.atoms.size(); ++i) {
        double w = rho.atoms[i].weight;
        std::vector<PsiPoint> extra;
        if (seeds) extra.push_back((*seeds)[i]);
        double val = solver.psi(rho.atoms[i].theta, u[i], extra).value;
        N += w * u[i] * val;
        D += w * u[i];
    }
    if (D <= 0.0) throw ConstraintViolation("column_ratio: empty denominator");
    return N / D;
}

ColumnDinkelbachResult column_free_energy_for_measure(const ColumnSolver& solver,
                                                      const ColumnMeasure& rho, double tol,
                                                      int max_iter) {
    ColumnDinkelbachResult out;
    const double eps = 1e-6;

    auto speeds_for = [&](double c) {
        std::vector<double> u(rho.atoms.size());
        bool sat = false;
        for (std::size_t i = 0; i < rho.atoms.size(); ++i) {
            UThetaResult r = solver.u_theta_of_c(rho.atoms[i].theta, c);
            u[i] = r.u;
            sat = sat || r.saturated;
        }
        out.saturated = sat;
        return u;
    };

    double c = column_ratio(solver, rho, speeds_for(eps));
    if (!(c > eps)) throw NonPositive("column free energy not positive for this measure");

    for (int it = 1; it <= max_iter; ++it) {
        std::vector<double> u = speeds_for(c);
        double cn = column_ratio(solver, rho, u);
        out.iterations = it;
        out.residual = std::abs(cn - c);
        if (out.residual <= tol) {
            out.value = cn;
            out.u = std::move(u);
            return out;
        }
        c = cn;
    }
    throw NoConvergence("column Dinkelbach did not converge");
}

// ---------------------------------------------------------------------------
// transforms
// ---------------------------------------------------------------------------

namespace {

void add_atom(std::map<double, std::pair<double, double>>& acc, double l, double w,
              double speed_mass) {
    // merge atoms at equal slopes; speeds combine as conditional expectations
    auto it = acc.find(l);
    if (it == acc.end())
        acc.emplace(l, std::make_pair(w, speed_mass));
    else {
        it->second.first += w;
        it->second.second += speed_mass;
    }
}

}  // namespace

LiftData lift_to_slope(const ColumnMeasure& rho, const FractionProfile& h,
                       const std::vector<PsiPoint>* maximizers) {
    h.validate(rho);
    if (maximizers && maximizers->size() != rho.atoms.size())
        throw ConstraintViolation("maximizer list not aligned");

    std::map<double, std::pair<double, double>> accA, accB;  // l -> (w, sum w*r)
    double wI = 0.0, wIr = 0.0;

    for (std::size_t i = 0; i < rho.atoms.size(); ++i) {
        const double w = rho.atoms[i].weight;
        const FractionTriple& t = h.h[i];
        ColumnGeometry g = geometry(rho.atoms[i].theta);
        double rA = 0.0, rB = 0.0, rI = 0.0;
        if (maximizers) {
            const PsiPoint& m = (*maximizers)[i];
            auto ratio_or = [](double a, double hh, double lo) {
                return hh > 1e-12 ? a / hh : lo;
            };
            rA = ratio_or(m.aA, m.hA, 1.0 + (t.hA > 1e-12 ? g.lA / t.hA : 0.0));
            rB = ratio_or(m.aB, m.hB, 1.0 + (t.hB > 1e-12 ? g.lB / t.hB : 0.0));
            rI = ratio_or(m.aI, m.hI, 1.0);
        }
        if (t.hA > 0.0) add_atom(accA, g.lA / t.hA, w * t.hA, w * t.hA * rA);
        if (t.hB > 0.0) add_atom(accB, g.lB / t.hB, w * t.hB, w * t.hB * rB);
        if (t.hI > 0.0) {
            wI += w * t.hI;
            wIr += w * t.hI * rI;
        }
    }

    LiftData out;
    out.has_speeds = maximizers != nullptr;
    for (const auto& [l, acc] : accA) {
        out.measure.atomsA.push_back({l, acc.first});
        out.speeds.vA.push_back(acc.first > 0 ? acc.second / acc.first : 1.0 + l);
    }
    for (const auto& [l, acc] : accB) {
        out.measure.atomsB.push_back({l, acc.first});
        out.speeds.vB.push_back(acc.first > 0 ? acc.second / acc.first : 1.0 + l);
    }
    out.measure.wI = wI;
    out.speeds.vI = wI > 0.0 && out.has_speeds ? wIr / wI : 1.0;
    out.measure.label = rho.label + "+lift";
    out.measure.normalize();  // weights already sum to 1 when rho does
    return out;
}

PushData push_to_column(const SlopeMeasure& rho_bar, const SpeedProfile& v,
                        const ColumnMeasure& menu, const FractionProfile& h) {
    h.validate(menu);
    // the menu with h must generate rho_bar
    LiftData gen = lift_to_slope(menu, h, nullptr);
    auto match = [](const std::vector<SlopeAtom>& a, const std::vector<SlopeAtom>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (std::abs(a[i].l - b[i].l) > 1e-9 || std::abs(a[i].w - b[i].w) > 1e-9)
                return false;
        return true;
    };
    SlopeMeasure sorted = rho_bar;
    std::sort(sorted.atomsA.begin(), sorted.atomsA.end(),
              [](const SlopeAtom& x, const SlopeAtom& y) { return x.l < y.l; });
    std::sort(sorted.atomsB.begin(), sorted.atomsB.end(),
              [](const SlopeAtom& x, const SlopeAtom& y) { return x.l < y.l; });
    if (!match(gen.measure.atomsA, sorted.atomsA) ||
        !match(gen.measure.atomsB, sorted.atomsB) ||
        std::abs(gen.measure.wI - rho_bar.wI) > 1e-9)
        throw MenuMismatch("menu with h does not generate rho_bar");

    // speed lookup by slope (profile aligned with rho_bar as given)
    auto speed_at = [&](const std::vector<SlopeAtom>& atoms, const std::vector<double>& vs,
                        double l) {
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (std::abs(atoms[i].l - l) <= 1e-9) return vs[i];
        throw MenuMismatch("no speed for requested slope");
    };

    PushData out;
    out.measure = menu;
    out.u.resize(menu.atoms.size());
    out.seeds.resize(menu.atoms.size());
    for (std::size_t i = 0; i < menu.atoms.size(); ++i) {
        const FractionTriple& t = h.h[i];
        ColumnGeometry g = geometry(menu.atoms[i].theta);
        double dA = t.hA > 0.0 ? g.lA / t.hA : 0.0;
        double dB = t.hB > 0.0 ? g.lB / t.hB : 0.0;
        double sA = t.hA > 0.0 ? speed_at(rho_bar.atomsA, v.vA, dA) : 0.0;
        double sB = t.hB > 0.0 ? speed_at(rho_bar.atomsB, v.vB, dB) : 0.0;
        double sI = t.hI > 0.0 ? v.vI : 0.0;
        out.u[i] = t.hA * sA + t.hB * sB + t.hI * sI;
        PsiPoint seed;
        seed.hA = t.hA;
        seed.hB = t.hB;
        seed.hI = t.hI;
        seed.aA = t.hA * sA;
        seed.aB = t.hB * sB;
        seed.aI = t.hI * sI;
        out.seeds[i] = seed;
    }
    return out;
}

// ---------------------------------------------------------------------------
// families
// ---------------------------------------------------------------------------

SlopeMeasure rho_hor(double p) {
    SlopeMeasure m;
    m.label = "rho_hor";
    if (p > 0.0) m.atomsA.push_back({0.0, p * p});
    if (p < 1.0) m.atomsB.push_back({0.0, (1.0 - p) * (1.0 - p)});
    m.wI = 2.0 * p * (1.0 - p);
    m.normalize();
    return m;
}

namespace {

// coarse-grained walk bookkeeping
struct WalkState {
    long long row = 0;  // mesoscopic block row of the current column entry
};

struct StrategySpec {
    enum Kind { Straight, AGreedy, Hugger, ASaturated } kind = Straight;
    int dpi_pref = 0;     // 0: small steps, 1: larger steps allowed
    double b = 0.5;
    const char* name = "straight";
};

Label meso_label(std::uint64_t seed, double p, long long j, long long k) {
    return u01(hash3(seed, static_cast<std::uint64_t>(j) * 2 + 11,
                     static_cast<std::uint64_t>(k * 2 + 1000000007LL))) < p
               ? Label::A
               : Label::B;
}

// heuristic horizontal-fraction profile for lifting empirical measures
FractionTriple heuristic_fractions(const ColumnGeometry& g) {
    FractionTriple t;
    switch (g.cls) {
        case ColumnClass::NintA1: t.hA = 1.0; break;
        case ColumnClass::NintB1: t.hB = 1.0; break;
        case ColumnClass::NintA2: {
            t.hI = std::clamp(1.0 / (1.0 + g.lA), 0.2, 0.9);
            if (g.lA <= 0.0) t.hI = 1.0;
            t.hA = 1.0 - t.hI;
            break;
        }
        case ColumnClass::NintB2: {
            t.hI = std::clamp(1.0 / (1.0 + g.lB), 0.2, 0.9);
            if (g.lB <= 0.0) t.hI = 1.0;
            t.hB = 1.0 - t.hI;
            break;
        }
        case ColumnClass::Int: {
            t.hI = 0.15;
            double pa = g.lA, pb = g.lB;
            if (pa <= 0.0 && pb <= 0.0) {
                t.hI = 1.0;
                break;
            }
            if (pa <= 0.0) {  // all mass to B (plus interface)
                t.hB = 1.0 - t.hI;
                break;
            }
            if (pb <= 0.0) {
                t.hA = 1.0 - t.hI;
                break;
            }
            t.hA = (1.0 - t.hI) * pa / (pa + pb);
            t.hB = (1.0 - t.hI) * pb / (pa + pb);
            break;
        }
    }
    return t;
}

}  // namespace

std::vector<SlopeMeasure> measure_family_from_disorder(const FamilyConfig& cfg) {
    if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw DomainError("family: p in [0,1]");
    const int m = cfg.M + 2;

    std::vector<StrategySpec> specs = {
        {StrategySpec::Straight, 0, 0.5, "straight"},
        {StrategySpec::AGreedy, 0, 0.5, "a_greedy_small"},
        {StrategySpec::AGreedy, 1, 0.5, "a_greedy_wide"},
        {StrategySpec::Hugger, 0, 0.5, "interface_hugger"},
        {StrategySpec::ASaturated, 0, 0.5, "a_saturated_small"},
        {StrategySpec::ASaturated, 1, 0.5, "a_saturated_wide"},
        {StrategySpec::Straight, 0, 0.25, "straight_low"},
        {StrategySpec::AGreedy, 0, 0.25, "a_greedy_low"},
        {StrategySpec::Hugger, 1, 0.5, "interface_hugger_wide"},
        {StrategySpec::ASaturated, 0, 0.25, "a_saturated_low"},
        {StrategySpec::AGreedy, 1, 0.75, "a_greedy_high"},
    };

    std::vector<SlopeMeasure> family;
    family.push_back(rho_hor(cfg.p));

    auto label_fn = [&](long long j, long long k) {
        return meso_label(cfg.meso_seed, cfg.p, j, k);
    };

    int want = std::max(1, cfg.strategies);
    for (int s = 0; s + 1 < want && s < static_cast<int>(specs.size()); ++s) {
        const StrategySpec& sp = specs[static_cast<std::size_t>(s)];
        // aggregate by geometry signature (k,t,lA,lB,class) rather than raw
        // windows: the lift only depends on the geometry
        struct Agg {
            ColumnGeometry g;
            double w = 0.0;
        };
        std::map<std::array<double, 5>, Agg> acc;
        WalkState st;
        long long kept = 0;
        for (int j = 0; j < cfg.columns; ++j) {
            auto window = [&](long long r) { return label_fn(j, st.row + r); };
            int dpi = 0;
            bool record = true;
            int span = sp.dpi_pref == 0 ? 1 : cfg.M;
            if (sp.kind == StrategySpec::Straight) {
                dpi = 0;
            } else if (sp.kind == StrategySpec::AGreedy) {
                // minimize B-distance, then |dpi|
                double bestlB = kInf;
                int bestd = 0;
                for (int d = -span; d <= span; ++d) {
                    ColumnType th = column_from(window, m, d, sp.b, sp.b, 1);
                    ColumnGeometry gg = geometry(th);
                    double lb = gg.k != 0 ? gg.lB
                                          : (gg.cls == ColumnClass::NintB1 ? gg.lB + 1.0
                                                                           : gg.lB);
                    if (lb < bestlB - 1e-12 ||
                        (std::abs(lb - bestlB) <= 1e-12 && std::abs(d) < std::abs(bestd))) {
                        bestlB = lb;
                        bestd = d;
                    }
                }
                dpi = bestd;
            } else if (sp.kind == StrategySpec::ASaturated) {
                // B-free crossings only: the crossing of column j spans the
                // block rows between entry and exit, all of which must be A
                std::vector<int> cands;
                for (int d = -cfg.M; d <= cfg.M; ++d) {
                    bool free = true;
                    for (int r = std::min(0, d); r <= std::max(0, d); ++r)
                        if (window(r) == Label::B) free = false;
                    if (free) cands.push_back(d);
                }
                if (!cands.empty()) {
                    // prefer a candidate whose landing block stays A
                    std::vector<int> good;
                    for (int d : cands)
                        if (label_fn(j + 1, st.row + d) == Label::A) good.push_back(d);
                    const std::vector<int>& pool = good.empty() ? cands : good;
                    int bestd = pool.front();
                    for (int d : pool) {
                        bool better = sp.dpi_pref == 0
                                          ? std::abs(d) < std::abs(bestd) ||
                                                (std::abs(d) == std::abs(bestd) && d > bestd)
                                          : std::abs(d) > std::abs(bestd) ||
                                                (std::abs(d) == std::abs(bestd) && d > bestd);
                        if (better) bestd = d;
                    }
                    dpi = bestd;
                } else {
                    // blocked: hop to the nearest A-block without recording
                    record = false;
                    dpi = 0;
                    for (int rad = 1; rad <= 4 * cfg.M; ++rad) {
                        if (label_fn(j, st.row + rad) == Label::A) {
                            dpi = rad;
                            break;
                        }
                        if (label_fn(j, st.row - rad) == Label::A) {
                            dpi = -rad;
                            break;
                        }
                    }
                }
            } else {  // Hugger: head for the nearest interface, crossing it if possible
                int bestd = 0;
                double bestscore = kInf;
                for (int d = -span; d <= span; ++d) {
                    ColumnType th = column_from(window, m, d, sp.b, sp.b, 1);
                    ColumnGeometry gg = geometry(th);
                    double score = (gg.k != 0) ? 0.0 : 1.0 + std::abs(d);
                    if (score < bestscore) {
                        bestscore = score;
                        bestd = d;
                    }
                }
                dpi = bestd;
            }

            if (!record) {
                st.row += dpi;
                continue;
            }
            ColumnType th = column_from(window, m, dpi, sp.b, sp.b, 1);
            // hugger uses reach-interface columns when it cannot cross one
            if (sp.kind == StrategySpec::Hugger) {
                ColumnGeometry gg = geometry(th);
                if (gg.k == 0 && !gg.interfaces.empty()) th.x = 2;
            }
            ColumnGeometry g = geometry(th);
            std::array<double, 5> key{static_cast<double>(g.k), g.t, g.lA, g.lB,
                                      static_cast<double>(static_cast<int>(g.cls))};
            auto& slot = acc[key];
            slot.g = g;
            slot.w += 1.0;
            ++kept;
            st.row += dpi;
        }
        if (acc.empty()) continue;

        // lift the aggregated geometry classes with heuristic fractions
        std::map<double, double> lA_atoms, lB_atoms;
        double wI = 0.0;
        for (const auto& [key, agg] : acc) {
            (void)key;
            FractionTriple t = heuristic_fractions(agg.g);
            double w = agg.w / static_cast<double>(kept);
            if (t.hA > 0.0) lA_atoms[agg.g.lA / t.hA] += w * t.hA;
            if (t.hB > 0.0) lB_atoms[agg.g.lB / t.hB] += w * t.hB;
            wI += w * t.hI;
        }
        SlopeMeasure mres;
        for (const auto& [l, w] : lA_atoms) mres.atomsA.push_back({l, w});
        for (const auto& [l, w] : lB_atoms) mres.atomsB.push_back({l, w});
        mres.wI = wI;
        mres.label = sp.name;
        if (mres.total() <= 0.0) continue;
        mres.normalize();
        family.push_back(mres);
        if (static_cast<int>(family.size()) >= want) break;
    }

    // degenerate members where percolation trivially permits
    if (cfg.p >= 1.0 - 1e-12 && static_cast<int>(family.size()) < want) {
        SlopeMeasure d;
        d.atomsA.push_back({0.0, 1.0});
        d.label = "delta_A0";
        family.push_back(d);
    }
    return family;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

std::string measures_to_json(const std::vector<SlopeMeasure>& family) {
    nlohmann::json j;
    j["format"] = "copol-slope-measures";
    j["version"] = 1;
    nlohmann::json arr = nlohmann::json::array();
    for (const SlopeMeasure& m : family) {
        nlohmann::json e;
        e["label"] = m.label;
        nlohmann::json a = nlohmann::json::array(), b = nlohmann::json::array();
        for (const SlopeAtom& x : m.atomsA) a.push_back({{"l", x.l}, {"w", x.w}});
        for (const SlopeAtom& x : m.atomsB) b.push_back({{"l", x.l}, {"w", x.w}});
        e["A"] = a;
        e["B"] = b;
        e["wI"] = m.wI;
        arr.push_back(e);
    }
    j["measures"] = arr;
    return j.dump(2);
}

std::vector<SlopeMeasure> measures_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format") != "copol-slope-measures") throw DomainError("not a measure set");
    std::vector<SlopeMeasure> out;
    for (const auto& e : j.at("measures")) {
        SlopeMeasure m;
        m.label = e.value("label", "");
        for (const auto& x : e.at("A")) m.atomsA.push_back({x.at("l"), x.at("w")});
        for (const auto& x : e.at("B")) m.atomsB.push_back({x.at("l"), x.at("w")});
        m.wI = e.at("wI");
        out.push_back(m);
    }
    return out;
}

} // namespace copol
