#include "copol/phases.hpp"

#include <algorithm>
#include <cmath>

namespace copol {

PhaseEngine::PhaseEngine(const EntropyEvaluator& ent, Config cfg)
    : ent_(&ent), cfg_(std::move(cfg)) {
    twin_ = InterfaceTable::entropy_reference(cfg_.iface, ent);
}

double PhaseEngine::member_value(const SlopeMeasure& rho, const InterfaceTable& table,
                                 double alpha, double beta, bool* saturated) const {
    SlopeEngine eng{ent_, &table, alpha, beta};
    try {
        DinkelbachResult r = free_energy_for_measure(eng, rho);
        if (saturated) *saturated = *saturated || r.saturated;
        return r.value;
    } catch (const NonPositive&) {
        return 0.0;  // the member contributes nothing above the trivial bound
    }
}

PhaseEngine::FamilyValue PhaseEngine::f_full(const std::vector<SlopeMeasure>& family,
                                             const InterfaceTable& table, double alpha,
                                             double beta) const {
    if (family.empty()) throw DomainError("empty family");
    FamilyValue out;
    out.value = -1.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        bool sat = false;
        double v = member_value(family[i], table, alpha, beta, &sat);
        if (v > out.value) {
            out.value = v;
            out.argmax = i;
        }
        out.saturated = out.saturated || sat;
    }
    return out;
}

PhaseEngine::FamilyValue PhaseEngine::f_delocalized(const std::vector<SlopeMeasure>& family,
                                                    double alpha_minus_beta) const {
    // interface mass runs on the entropy twin; the B-term sees only the
    // difference, passed as (alpha_minus_beta, 0)
    return f_full(family, twin_, alpha_minus_beta, 0.0);
}

std::vector<std::size_t> PhaseEngine::saturated_subfamily(
    const std::vector<SlopeMeasure>& family, double* K_hat) {
    double K = std::numeric_limits<double>::infinity();
    for (const SlopeMeasure& m : family) K = std::min(K, m.massB());
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < family.size(); ++i)
        if (family[i].massB() <= K + 1e-12) idx.push_back(i);
    if (K_hat) *K_hat = K;
    return idx;
}

PhaseEngine::FamilyValue PhaseEngine::f_saturated(const std::vector<SlopeMeasure>& family,
                                                  double alpha_minus_beta) const {
    double K = 0.0;
    std::vector<std::size_t> idx = saturated_subfamily(family, &K);
    if (idx.empty()) throw DomainError("EmptySaturatedFamily");
    std::vector<SlopeMeasure> sub;
    for (std::size_t i : idx) sub.push_back(family[i]);
    return f_delocalized(sub, alpha_minus_beta);
}

PhaseEngine::FamilyValue PhaseEngine::f_localized_saturated(
    const std::vector<SlopeMeasure>& family, const InterfaceTable& table, double alpha,
    double beta) const {
    std::vector<std::size_t> idx = saturated_subfamily(family, nullptr);
    if (idx.empty()) throw DomainError("EmptySaturatedFamily");
    std::vector<SlopeMeasure> sub;
    for (std::size_t i : idx) sub.push_back(family[i]);
    return f_full(sub, table, alpha, beta);
}

PhaseEngine::AlphaStar PhaseEngine::alpha_star(const std::vector<SlopeMeasure>& family) const {
    AlphaStar out;
    auto gap = [&](double a) {
        return f_delocalized(family, a).value - f_saturated(family, a).value;
    };

    const double tol_zero = 1e-9;
    if (gap(0.0) <= tol_zero) {
        out.at_lower_edge = true;
        out.value = 0.0;
        return out;
    }
    double lo = 0.0, hi = cfg_.alpha_scan_max;
    if (gap(hi) > tol_zero) {
        out.no_crossing = true;
        out.bracket_lo = lo;
        out.bracket_hi = hi;
        out.value = hi;
        return out;
    }
    while (hi - lo > cfg_.alpha_tol) {
        double mid = 0.5 * (lo + hi);
        (gap(mid) > tol_zero ? lo : hi) = mid;
    }
    out.value = 0.5 * (lo + hi);
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    return out;
}

PhaseEngine::BetaC PhaseEngine::beta_c(double alpha,
                                       const std::vector<SlopeMeasure>& family) const {
    BetaC out;
    const double fD = f_delocalized(family, alpha).value;
    if (!(fD > 0.0)) throw DomainError("beta_c: f_D not positive");
    const double vbar = ent_->chi_inverse(fD, 0.0);
    if (vbar >= cfg_.iface.mu_max) out.table_saturated = true;

    // localization excess at (alpha+beta, beta), estimated against the
    // entropy at the same lattice size so the finite-size bias cancels
    const int L = cfg_.iface.ladder.back();
    long long k = std::llround((vbar - 1.0) * L / 2.0);
    const double mu = 1.0 + 2.0 * static_cast<double>(std::max<long long>(k, 1)) / L;
    const double kapL = ent_->kappa_finite(L, mu, 0.0);
    auto excess = [&](double beta) {
        std::uint64_t seed = hash3(cfg_.iface.seed, 4242,
                                   static_cast<std::uint64_t>(std::llround(beta * 1e6) +
                                                              (1LL << 30)));
        PhiFiniteStat e = phi_finite(L, mu, cfg_.iface.samples, seed, alpha + beta, beta);
        return std::make_pair(e.mean - kapL, e.stderr_);
    };

    double lo = 0.0, hi = alpha + 6.0;
    auto top = excess(hi);
    if (!(top.first > 2.0 * top.second)) {
        out.undecided = true;
        out.lo = lo;
        out.hi = hi;
        out.value = hi;
        return out;
    }
    // bisect on statistical significance; the reported interval runs from
    // the largest beta with a non-positive excess (surely not localized at
    // this resolution) to the smallest significantly-positive beta, so its
    // width shrinks as the sample budget grows
    double lo_nonpos = 0.0;
    for (int it = 0; it < 40 && hi - lo > 1e-4 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        auto e = excess(mid);
        if (e.first > 2.0 * e.second)
            hi = mid;
        else {
            lo = mid;
            if (e.first <= 0.0) lo_nonpos = std::max(lo_nonpos, mid);
        }
    }
    out.lo = lo_nonpos;
    out.hi = hi;
    out.value = 0.5 * (lo + hi);
    return out;
}

PhasePoint PhaseEngine::classify(double alpha, double beta, double p,
                                 const std::vector<SlopeMeasure>& family,
                                 const InterfaceTable& table) const {
    PhasePoint pt;
    pt.alpha = alpha;
    pt.beta = beta;
    pt.p = p;
    pt.family_size = static_cast<int>(family.size());

    FamilyValue full = f_full(family, table, alpha, beta);
    FamilyValue del = f_delocalized(family, alpha - beta);
    FamilyValue sat = f_saturated(family, alpha - beta);
    FamilyValue locsat = f_localized_saturated(family, table, alpha, beta);

    pt.f = full.value;
    pt.fD = del.value;
    pt.fD2 = sat.value;
    pt.fL2 = locsat.value;
    pt.table_saturated = full.saturated;
    pt.argmax_label = family[full.argmax].label;

    // the localization comparison carries the interface table's statistical
    // error; the saturation comparison is deterministic
    double stat = 0.0;
    for (double e : table.err) stat = std::max(stat, e);
    const double eps_loc = cfg_.decision_margin + stat;
    const double eps_sat = cfg_.decision_margin;
    pt.margin = eps_loc;

    const double d_loc = pt.f - pt.fD;
    if (d_loc > eps_loc) {
        pt.phase = (pt.f - pt.fL2 > eps_loc) ? Phase::L1 : Phase::L2;
    } else if (d_loc > 0.5 * eps_loc) {
        pt.phase = Phase::Boundary;
    } else {
        pt.phase = (pt.fD - pt.fD2 > eps_sat) ? Phase::D1 : Phase::D2;
    }
    return pt;
}

PhaseEngine::Hypothesis2Report PhaseEngine::hypothesis2_diagnostic(
    const std::vector<SlopeMeasure>& family) const {
    Hypothesis2Report rep;
    FamilyValue sat = f_saturated(family);
    rep.fD2 = sat.value;
    std::vector<std::size_t> idx = saturated_subfamily(family, nullptr);
    const SlopeMeasure& argmax = family[idx[sat.argmax]];
    rep.argmax_label = argmax.label;

    auto g = [&](double l) {
        double v = ent_->chi_inverse(rep.fD2, l);
        return v * (ent_->kappa(v, l) - rep.fD2);
    };

    for (double l = 0.0; l <= 6.0 + 1e-12; l += 0.25) {
        rep.l_grid.push_back(l);
        rep.g_values.push_back(g(l));
    }
    rep.g0_positive = rep.g_values.front() > 0.0;
    rep.decreasing = true;
    for (std::size_t i = 1; i < rep.g_values.size(); ++i)
        if (rep.g_values[i] >= rep.g_values[i - 1]) rep.decreasing = false;
    for (std::size_t i = 1; i < rep.g_values.size(); ++i)
        if (rep.g_values[i - 1] > 0.0 && rep.g_values[i] <= 0.0) {
            rep.sign_change_l = rep.l_grid[i];
            break;
        }

    // the folded integral of g against the maximizing measure
    double integral = 0.0;
    for (const SlopeAtom& a : argmax.atomsA) integral += a.w * g(a.l);
    if (argmax.wI > 0.0) integral += argmax.wI * g(0.0);
    // normalize by the folded mass (the B-part is empty for these members)
    double mass = argmax.wI;
    for (const SlopeAtom& a : argmax.atomsA) mass += a.w;
    rep.integral_at_maximizer = mass > 0.0 ? integral / mass : 0.0;

    // Hypothesis-2.5 ratio over the B-charging members
    double best_ratio = 0.0;
    for (const SlopeMeasure& m : family) {
        if (!(m.massB() > 0.0)) continue;
        double num = 0.0, den = 0.0;
        for (const SlopeAtom& a : m.atomsA) num += a.w * g(a.l);
        if (m.wI > 0.0) num += m.wI * g(0.0);
        for (const SlopeAtom& a : m.atomsB) den += a.w * (1.0 + a.l);
        if (den > 0.0) best_ratio = std::max(best_ratio, num / den);
    }
    rep.ratio_over_Tp = best_ratio;
    return rep;
}

} // namespace copol
