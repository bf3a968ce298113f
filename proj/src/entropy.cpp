#include "copol/entropy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "copol/oracle.hpp"

namespace copol {

namespace {

// w solving w/(1-w)^2 = G, in the stable split form
struct TiltPoint {
    double w = 0.0;
    double one_minus_w = 1.0;
    double ratio = 0.0;  // w/(1-w)
    double log_w = -std::numeric_limits<double>::infinity();
};

TiltPoint tilt_of(double G) {
    TiltPoint t;
    if (G <= 0.0) return t;
    const double s = std::sqrt(4.0 * G + 1.0);
    t.w = 2.0 * G / (2.0 * G + 1.0 + s);
    t.one_minus_w = 2.0 / (1.0 + s);
    t.ratio = t.w / t.one_minus_w;
    t.log_w = std::log(t.w);
    return t;
}

// d[w/(1-w)]/dG = (1-w)/(1+w)
double tilt_slope(const TiltPoint& t) { return t.one_minus_w / (1.0 + t.w); }

struct DualSolution {
    double value = 0.0;   // u*kappa~(u,l), the per-horizontal-step rate
    double deriv = 0.0;   // d/du [u kappa~] = -(log w + log z)/2
};

// scalar fixed point Phi(F) = F with Phi(F) = 1 + r(pF) + r(qF)
DualSolution solve_dual(double p, double q, double tol) {
    DualSolution out;
    if (p < q) std::swap(p, q);  // symmetric; keep p >= q
    if (p <= 0.0) {              // u = 1, l = 0: the single all-East path
        out.value = 0.0;
        out.deriv = std::numeric_limits<double>::infinity();
        return out;
    }
    if (q <= 0.0) {
        // boundary u = 1+|l|: w = p/(1+p), z -> 0
        out.value = (1.0 + p) * std::log1p(p) - p * std::log(p);
        out.deriv = std::numeric_limits<double>::infinity();
        return out;
    }

    auto residual = [&](double F) {
        return 1.0 + tilt_of(p * F).ratio + tilt_of(q * F).ratio - F;
    };

    double lo = 1.0, hi = std::max(4.0, 2.0 * (p + q + 1.0));
    while (residual(hi) > 0.0) hi *= 2.0;

    double F = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        TiltPoint tp = tilt_of(p * F), tq = tilt_of(q * F);
        double R = 1.0 + tp.ratio + tq.ratio - F;
        if (std::abs(R) <= tol * std::max(1.0, F)) break;
        if (R > 0.0)
            lo = F;
        else
            hi = F;
        double dR = p * tilt_slope(tp) + q * tilt_slope(tq) - 1.0;
        double Fn = (dR < 0.0) ? F - R / dR : 0.5 * (lo + hi);
        if (!(Fn > lo && Fn < hi)) Fn = 0.5 * (lo + hi);  // bisection fallback
        F = Fn;
    }

    TiltPoint tp = tilt_of(p * F), tq = tilt_of(q * F);
    out.value = std::log(F) - p * tp.log_w - q * tq.log_w;
    out.deriv = -0.5 * (tp.log_w + tq.log_w);
    return out;
}

DualSolution solve_dual_at(double u, double l, double tol) {
    l = std::abs(l);
    if (u < 1.0 + l - 1e-12) throw DomainError("kappa: u < 1+|l|");
    double p = 0.5 * (u - 1.0 + l);
    double q = 0.5 * (u - 1.0 - l);
    if (q < 0.0) q = 0.0;
    if (p < 0.0) p = 0.0;
    return solve_dual(p, q, tol);
}

}  // namespace

double g_closed_form(double a, double b) {
    const double s2 = (a - b) * (a - b) + b * b - 1.0;
    if (!(a > 1.0 + b) || s2 <= 0.0) throw DomainError("g_closed_form: a <= 1+b");
    const double S = std::sqrt(s2);
    const double delta = b * (a + 1.0 - b) / (a + 1.0 + S);
    const double eps = b * (a - 1.0 - b) / (a - 1.0 + S);
    const double num = (a + 1.0 - b) * (a - 1.0 - b);
    const double den = (a + 1.0 - b - 2.0 * delta) * (a - 1.0 - b - 2.0 * eps);
    return 0.5 * std::log(num / den);
}

double EntropyEvaluator::kappa_finite(int L, double u, double l) const {
    oracle::BigInt c = oracle::count_paths_stretch_form(L, u, l);
    if (c == 0) throw DomainError("kappa_finite: empty path set");
    return oracle::log_big(c) / (u * L);
}

double EntropyEvaluator::kappa_uncached(double u, double l) const {
    DualSolution s = solve_dual_at(u, l, cfg_.duality_tol);
    return u > 0.0 ? s.value / u : 0.0;
}

double EntropyEvaluator::kappa(double u, double l) const {
    l = std::abs(l);
    if (!cfg_.use_cache) return kappa_uncached(u, l);
    const std::pair<double, double> key{u, l};
    {
        std::shared_lock lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    double v = kappa_uncached(u, l);
    {
        std::unique_lock lock(mu_);
        cache_.emplace(key, v);
    }
    return v;
}

double EntropyEvaluator::kappa_derivative(double v, double l) const {
    l = std::abs(l);
    if (!(v > 1.0 + l)) throw DomainError("kappa_derivative: v <= 1+|l|");
    if (l > 0.0) return g_closed_form(v / l, 1.0 / l);
    // l = 0: 5-point central difference of u -> u*kappa(u,0)
    double h = 1e-4 * std::max(1.0, v);
    if (v - 2.0 * h <= 1.0) h = (v - 1.0) / 4.0;
    auto f = [&](double x) { return x * kappa(x, 0.0); };
    return (-f(v + 2.0 * h) + 8.0 * f(v + h) - 8.0 * f(v - h) + f(v - 2.0 * h)) / (12.0 * h);
}

double EntropyEvaluator::chi_inverse(double c, double l) const {
    l = std::abs(l);
    if (!(c > 0.0)) throw DomainError("chi_inverse: c must be positive");
    const double base = 1.0 + l;
    // lower bracket: derivative blows up (logarithmically) at the boundary
    double gap = std::max(1e-12, base * 1e-12);
    double lo = base + gap;
    while (kappa_derivative(lo, l) <= c) {
        gap *= 1e-3;
        if (base + gap == base) return lo;  // cannot resolve closer in doubles
        lo = base + gap;
    }
    double hi = std::max(base + 1.0, 2.0 * base);
    while (kappa_derivative(hi, l) > c) {
        hi = base + (hi - base) * 2.0;
        if (hi > 1e12) break;  // derivative -> 0, bracket will close numerically
    }
    double v = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        v = 0.5 * (lo + hi);
        double d = kappa_derivative(v, l);
        if (std::abs(d - c) <= cfg_.bisect_tol * std::max(1.0, c)) return v;
        if (d > c)
            lo = v;
        else
            hi = v;
        if (hi - lo <= 1e-14 * std::max(1.0, v)) break;
    }
    return v;
}

} // namespace copol
