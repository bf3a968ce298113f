#include "copol/maximizer_checks.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "copol/rng.hpp"

namespace copol {

MaximizerReport verify_inner_uniqueness(const SlopeEngine& eng, const SlopeMeasure& rho,
                                        int trials, std::uint64_t seed) {
    DinkelbachResult opt = free_energy_for_measure(eng, rho);
    MaximizerReport rep;
    rep.measure_label = rho.label;
    rep.fixed_point = opt.value;
    rep.trials = trials;

    CounterRng rng(seed);
    for (int t = 0; t < trials; ++t) {
        SpeedProfile v = opt.speeds;
        // log-spaced perturbation magnitudes probe both tight and loose moves
        double mag = std::pow(10.0, -4.0 + 4.0 * rng.next_u01());
        double dist = 0.0;
        for (std::size_t i = 0; i < v.vA.size(); ++i) {
            double d = mag * (2.0 * rng.next_u01() - 1.0);
            double lo = 1.0 + rho.atomsA[i].l;
            v.vA[i] = std::max(lo + 1e-12, v.vA[i] + d);
            dist = std::max(dist, std::abs(v.vA[i] - opt.speeds.vA[i]));
        }
        for (std::size_t i = 0; i < v.vB.size(); ++i) {
            double d = mag * (2.0 * rng.next_u01() - 1.0);
            double lo = 1.0 + rho.atomsB[i].l;
            v.vB[i] = std::max(lo + 1e-12, v.vB[i] + d);
            dist = std::max(dist, std::abs(v.vB[i] - opt.speeds.vB[i]));
        }
        if (rho.wI > 0.0) {
            double d = mag * (2.0 * rng.next_u01() - 1.0);
            v.vI = std::max(1.0, v.vI + d);
            dist = std::max(dist, std::abs(v.vI - opt.speeds.vI));
        }
        double r = slope_ratio(eng, rho, v);
        double margin = r - opt.value;
        rep.worst_margin = std::max(rep.worst_margin, margin);
        if (margin > 1e-6) rep.improvement_found = true;
        if (margin >= -1e-6) {
            ++rep.accepted;
            rep.worst_gap = std::max(rep.worst_gap, dist);
        }
    }
    return rep;
}

ColumnUniquenessReport verify_column_uniqueness(const ColumnSolver& solver,
                                                const ColumnType& th, double u) {
    ColumnUniquenessReport rep;
    std::vector<PsiResult> runs = solver.psi_multistart(th, u);
    double best = -std::numeric_limits<double>::infinity(), worst = best;
    for (const PsiResult& r : runs) best = std::max(best, r.value);
    worst = best;
    for (const PsiResult& r : runs) worst = std::min(worst, r.value);
    rep.value = best / u;
    rep.value_spread = (best - worst) / std::max(1.0, std::abs(best));

    // agreement of the arguments across near-optimal runs
    const PsiPoint* ref = nullptr;
    for (const PsiResult& r : runs)
        if (r.value >= best - 1e-7 * std::max(1.0, std::abs(best))) {
            if (!ref) {
                ref = &r.arg;
                continue;
            }
            double d = std::max({std::abs(r.arg.hA - ref->hA), std::abs(r.arg.hB - ref->hB),
                                 std::abs(r.arg.hI - ref->hI), std::abs(r.arg.aA - ref->aA),
                                 std::abs(r.arg.aB - ref->aB), std::abs(r.arg.aI - ref->aI)});
            rep.arg_spread = std::max(rep.arg_spread, d);
        }

    // structural conditions of the unique maximizer
    ColumnGeometry g = geometry(th);
    const PsiPoint& m = runs.front().arg;  // re-checked against the best run below
    const PsiPoint& bestArg = [&]() -> const PsiPoint& {
        const PsiResult* b = &runs.front();
        for (const PsiResult& r : runs)
            if (r.value > b->value) b = &r;
        return b->arg;
    }();
    (void)m;
    auto check = [&](bool cond, const char* what) {
        if (!cond) {
            rep.structure_ok = false;
            if (!rep.violation.empty()) rep.violation += "; ";
            rep.violation += what;
        }
    };
    const double tol = 1e-9;
    check(!(bestArg.aA > tol && bestArg.hA <= tol), "aA>0 with hA=0");
    check(!(bestArg.aB > tol && bestArg.hB <= tol), "aB>0 with hB=0");
    check(!(bestArg.aI > tol && bestArg.hI <= tol), "aI>0 with hI=0");
    if (g.cls == ColumnClass::Int || g.cls == ColumnClass::NintA2)
        if (g.lA <= 0.0) check(bestArg.aA <= tol && bestArg.hA <= tol, "lA=0 pair not zero");
    if (g.cls == ColumnClass::Int || g.cls == ColumnClass::NintB2)
        if (g.lB <= 0.0) check(bestArg.aB <= tol && bestArg.hB <= tol, "lB=0 pair not zero");
    return rep;
}

AttainmentReport family_attainment(const SlopeEngine& eng,
                                   const std::vector<SlopeMeasure>& family) {
    AttainmentReport rep;
    double best = -1e300, second = -1e300;
    for (const SlopeMeasure& m : family) {
        double v = 0.0;
        try {
            v = free_energy_for_measure(eng, m).value;
        } catch (const NonPositive&) {
        }
        if (v > best) {
            second = best;
            best = v;
            rep.argmax_label = m.label;
        } else if (v > second) {
            second = v;
        }
    }
    rep.value = best;
    rep.runner_up = second;
    rep.margin = best - second;
    return rep;
}

std::string MaximizerReport::to_json() const {
    nlohmann::json j;
    j["measure"] = measure_label;
    j["fixed_point"] = fixed_point;
    j["trials"] = trials;
    j["accepted"] = accepted;
    j["worst_gap"] = worst_gap;
    j["worst_margin"] = worst_margin;
    j["improvement_found"] = improvement_found;
    return j.dump(2);
}

std::string ColumnUniquenessReport::to_json() const {
    nlohmann::json j;
    j["value"] = value;
    j["value_spread"] = value_spread;
    j["arg_spread"] = arg_spread;
    j["structure_ok"] = structure_ok;
    j["violation"] = violation;
    return j.dump(2);
}

} // namespace copol
