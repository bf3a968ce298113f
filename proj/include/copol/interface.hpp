#ifndef COPOL_INTERFACE_HPP
#define COPOL_INTERFACE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "copol/concave_hull.hpp"
#include "copol/entropy.hpp"
#include "copol/lattice.hpp"

namespace copol {

// Single linear AB-interface: solvent B strictly below the line y=0, solvent
// A above (the interface itself belongs to A). Steps strictly below the
// interface are charged beta on B-monomers and -alpha on A-monomers.

// exact log Z over W^I_L(mu) for a fixed word; requires mu in 1 + 2N/L
double interface_log_partition(int L, double mu, const std::vector<Label>& omega,
                               double alpha, double beta);

struct PhiFiniteStat {
    double mean = 0.0;
    double stderr_ = 0.0;
    int samples = 0;
    int L = 0;
    double mu = 1.0;
};

// Monte Carlo mean of (1/muL) log Z over fresh omega
PhiFiniteStat phi_finite(int L, double mu, int samples, std::uint64_t seed, double alpha,
                         double beta);

struct PhiEstimate {
    double value = 0.0;   // floored estimate of phi_I(mu)
    double err = 0.0;     // statistical + ladder-spread error bar
    double raw = 0.0;     // largest-L Monte Carlo mean, unfloored
    bool floored = false;
    double mu_snapped = 1.0;
};

struct InterfaceConfig {
    double mu_max = 8.0;
    double mu_step = 0.1;
    std::vector<int> ladder = {8, 16, 32};
    int samples = 200;
    std::uint64_t seed = 20240601;
    int threads = 0;  // 0 = hardware concurrency
};

// ladder-extrapolated estimate of phi_I(mu); phi(1) = 0 exactly
PhiEstimate phi_extrapolated(double mu, const InterfaceConfig& cfg, double alpha, double beta,
                             const EntropyEvaluator& ent);

struct SpeedQuery {
    double v = 1.0;
    bool saturated = false;
};

// Quenched interface table on a mu-grid with the least concave majorant of
// mu -> mu*phi(mu). Estimates are floored at kappa~(mu,0), a hard lower
// bound for the limit they estimate; raw means are kept alongside.
class InterfaceTable {
public:
    InterfaceTable() = default;

    static InterfaceTable build(const InterfaceConfig& cfg, double alpha, double beta,
                                const EntropyEvaluator& ent);

    // pure-entropy twin: same grid and hull pipeline applied to exact
    // kappa~(mu,0); used by the delocalized evaluators so that the interface
    // route dominates the entropy route identically at every query
    static InterfaceTable entropy_reference(const InterfaceConfig& cfg,
                                            const EntropyEvaluator& ent);

    double alpha = 0.0, beta = 0.0;
    InterfaceConfig cfg;
    std::vector<double> grid;       // mu values
    std::vector<double> estimate;   // floored phi estimates
    std::vector<double> raw_mean;   // unfloored largest-L means
    std::vector<double> err;        // error bars
    std::vector<int> ladder_L;      // largest ladder L per point
    std::vector<bool> floor_hit;
    bool entropy_only = false;

    const ConcaveHull& hull() const { return hull_; }

    // mu * phi-envelope value at mu (constant beyond mu_max, flag via queries)
    double mu_phi(double mu) const { return hull_.eval(mu); }
    double phi(double mu) const { return mu <= 1.0 ? 0.0 : hull_.eval(mu) / mu; }

    // subdifferential query: the speed z whose subgradient interval of
    // mu->mu*phi(mu) contains c
    SpeedQuery v_I_of_c(double c) const;

    // exact sup over mu of [mu*phi(mu) - c*mu] together with its maximizer
    ConcaveHull::SupResult sup_shifted(double c) const { return hull_.argmax_shifted(c); }

    std::string to_json() const;
    static InterfaceTable from_json(const std::string& text);

    void refit();  // rebuild the hull from grid/estimate

private:
    ConcaveHull hull_;
};

} // namespace copol

#endif
