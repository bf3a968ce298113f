#ifndef COPOL_COLUMN_HPP
#define COPOL_COLUMN_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "copol/column_type.hpp"
#include "copol/entropy.hpp"
#include "copol/interface.hpp"

namespace copol {

// maximizer of the single-column variational formula
struct PsiPoint {
    double hA = 0.0, hB = 0.0, hI = 0.0;
    double aA = 0.0, aB = 0.0, aI = 0.0;
};

struct PsiResult {
    double value = 0.0;  // psi(Theta,u)
    PsiPoint arg;
    bool interface_saturated = false;  // aI/hI ran into the table edge
    double multistart_spread = 0.0;    // max gap between converged starts
};

struct UThetaResult {
    double u = 1.0;
    bool saturated = false;  // c at or below the asymptotic slope; u capped
};

// Single-column free energy psi(Theta,u) as a concave program over the
// splits (h),(a), with the class constraints folded in. Solvent terms with
// l_k = 0 on the int and nint(k,2) classes are pinned to zero and routed
// through the interface term (the unique maximizer has that structure).
class ColumnSolver {
public:
    struct Config {
        double coord_tol = 1e-8;      // golden-section interval tolerance
        double sweep_tol = 1e-10;     // objective improvement per sweep
        int max_sweeps = 60;
        double u_max = 50.0;          // saturation cap for u_theta_of_c
        double slope_step = 1e-5;     // finite-difference step for u-slopes
    };

    ColumnSolver(const EntropyEvaluator& ent, const InterfaceTable& iface)
        : ent_(&ent), iface_(&iface) {}

    // replace the path-entropy function (used by finite-size cross-checks);
    // disables the closed-form slope shortcuts
    void override_kappa(std::function<double(double, double)> fn) { kappa_override_ = std::move(fn); }

    PsiResult psi(const ColumnType& th, double u,
                  const std::vector<PsiPoint>& extra_seeds = {}) const;

    // all multistart solutions (for uniqueness checks)
    std::vector<PsiResult> psi_multistart(const ColumnType& th, double u) const;

    // the u whose subdifferential of u -> u*psi(Theta,u) contains c
    UThetaResult u_theta_of_c(const ColumnType& th, double c) const;

    const Config& config() const { return cfg_; }
    Config& config() { return cfg_; }
    const EntropyEvaluator& entropy() const { return *ent_; }
    const InterfaceTable& interface_table() const { return *iface_; }

    double kappa(double u, double l) const {
        return kappa_override_ ? kappa_override_(u, l) : ent_->kappa(u, l);
    }

    // objective value at a feasible point (shared with the transform tests)
    double objective(const ColumnGeometry& g, double u, const PsiPoint& p) const;

private:
    PsiResult solve_from(const ColumnGeometry& g, double u, PsiPoint seed, bool activeA,
                         bool activeB) const;
    std::vector<PsiPoint> default_seeds(const ColumnGeometry& g, double u, bool activeA,
                                        bool activeB) const;

    const EntropyEvaluator* ent_;
    const InterfaceTable* iface_;
    std::function<double(double, double)> kappa_override_;
    Config cfg_;
};

// JSON (de)serialization of column menus
struct MenuAtom {
    ColumnType theta;
    double weight = 1.0;
};

std::string menu_to_json(const std::vector<MenuAtom>& menu);
std::vector<MenuAtom> menu_from_json(const std::string& text);

} // namespace copol

#endif
