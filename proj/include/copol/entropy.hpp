#ifndef COPOL_ENTROPY_HPP
#define COPOL_ENTROPY_HPP

#include <map>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "copol/lattice.hpp"

namespace copol {

// Path entropy kappa~(u,l): entropy per step of directed paths that cross a
// column at slope l with u steps per horizontal step.
//
// Finite-L values come from exact stretch-decomposition counts. The L->infty
// limit is evaluated by convex duality on the per-column generating function
// F(x,y) = 1 + xy/(1-xy) + (x/y)/(1-x/y): in the variables w=xy, z=x/y the
// two tilting equations reduce to a single scalar fixed point in the value of
// F, solved by damped Newton with a bisection safeguard.
class EntropyEvaluator {
public:
    struct Config {
        double duality_tol = 1e-10;    // residual tolerance on the F fixed point
        double bisect_tol = 1e-9;      // residual tolerance for chi_inverse
        std::vector<int> ladder = {8, 16, 32, 64};
        bool use_cache = true;
    };

    EntropyEvaluator() = default;
    explicit EntropyEvaluator(Config cfg) : cfg_(cfg) {}

    // kappa~_L(u,l) from the exact count (requires (u,l) in H_L)
    double kappa_finite(int L, double u, double l) const;

    // the L->infty limit; total on {u >= 1+|l|}
    double kappa(double u, double l) const;

    // d/du [u kappa~(u,l)] at v; closed form for l != 0, high-order central
    // finite differences for l = 0; requires v > 1+|l|
    double kappa_derivative(double v, double l) const;

    // unique v with kappa_derivative(v,l) = c, c > 0
    double chi_inverse(double c, double l) const;

    const Config& config() const { return cfg_; }
    const std::vector<int>& ladder() const { return cfg_.ladder; }

private:
    double kappa_uncached(double u, double l) const;

    Config cfg_;
    mutable std::shared_mutex mu_;
    mutable std::map<std::pair<double, double>, double> cache_;
};

// closed-form derivative of a kappa(a,b)-type entropy (Appendix-style G), in
// the rationalized form that stays finite at b=1
double g_closed_form(double a, double b);

} // namespace copol

#endif
