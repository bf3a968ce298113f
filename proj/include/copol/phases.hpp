#ifndef COPOL_PHASES_HPP
#define COPOL_PHASES_HPP

#include <optional>
#include <string>
#include <vector>

#include "copol/varform.hpp"

namespace copol {

enum class Phase { D1, D2, L1, L2, Boundary };

inline const char* to_string(Phase ph) {
    switch (ph) {
        case Phase::D1: return "D1";
        case Phase::D2: return "D2";
        case Phase::L1: return "L1";
        case Phase::L2: return "L2";
        case Phase::Boundary: return "boundary";
    }
    return "?";
}

struct PhasePoint {
    double alpha = 0.0, beta = 0.0, p = 0.5;
    Phase phase = Phase::D1;
    double f = 0.0, fD = 0.0, fD2 = 0.0, fL2 = 0.0;
    double margin = 0.0;
    int family_size = 0;
    bool lower_bound_family = true;  // always: the family is a surrogate
    bool table_saturated = false;
    std::string argmax_label;
};

// Reduced free energies and phase classification on a finite measure family.
// All outputs are lower bounds relative to the family; the delocalized
// functionals run on the pure-entropy interface twin so that the exact
// orderings f >= f_D >= f_D2 hold at engine precision.
class PhaseEngine {
public:
    struct Config {
        InterfaceConfig iface;      // working interface table settings
        double decision_margin = 1e-3;
        double alpha_scan_max = 8.0;
        double alpha_tol = 1e-4;
        double p_c = 0.6447;        // directed bond percolation label threshold
    };

    PhaseEngine(const EntropyEvaluator& ent, Config cfg);

    const Config& config() const { return cfg_; }
    const InterfaceTable& entropy_twin() const { return twin_; }

    // sup over the family of the full slope-based functional at (alpha,beta)
    // using a quenched interface table
    struct FamilyValue {
        double value = 0.0;
        std::size_t argmax = 0;
        bool saturated = false;
    };
    FamilyValue f_full(const std::vector<SlopeMeasure>& family, const InterfaceTable& table,
                       double alpha, double beta) const;

    // delocalized functional; depends on (alpha,beta) only through the difference
    FamilyValue f_delocalized(const std::vector<SlopeMeasure>& family,
                              double alpha_minus_beta) const;

    // zero-B (or minimal-B) subfamily indices: the A-saturated surrogate
    static std::vector<std::size_t> saturated_subfamily(const std::vector<SlopeMeasure>& family,
                                                        double* K_hat = nullptr);

    // zero-B subfamily members carry no (alpha,beta) dependence at all; the
    // minimal-B surrogate (subcritical) sees the difference like f_delocalized
    FamilyValue f_saturated(const std::vector<SlopeMeasure>& family,
                            double alpha_minus_beta = 0.0) const;
    FamilyValue f_localized_saturated(const std::vector<SlopeMeasure>& family,
                                      const InterfaceTable& table, double alpha,
                                      double beta) const;

    struct AlphaStar {
        double value = 0.0;
        bool at_lower_edge = false;  // fD == fD2 already at alpha = 0
        bool no_crossing = false;    // still separated at the scan edge
        double bracket_lo = 0.0, bracket_hi = 0.0;
    };
    AlphaStar alpha_star(const std::vector<SlopeMeasure>& family) const;

    struct BetaC {
        double value = 0.0;
        double lo = 0.0, hi = 0.0;  // confidence interval
        bool undecided = false;     // sample budget too small to resolve
        bool table_saturated = false;
    };
    BetaC beta_c(double alpha, const std::vector<SlopeMeasure>& family) const;

    PhasePoint classify(double alpha, double beta, double p,
                        const std::vector<SlopeMeasure>& family,
                        const InterfaceTable& table) const;

    struct Hypothesis2Report {
        double fD2 = 0.0;
        std::string argmax_label;
        std::vector<double> l_grid;
        std::vector<double> g_values;
        bool g0_positive = false;
        bool decreasing = false;
        double sign_change_l = -1.0;  // -1: none found on the grid
        double integral_at_maximizer = 0.0;
        double ratio_over_Tp = 0.0;  // sup of the Hypothesis-2.5 ratio over the family
    };
    Hypothesis2Report hypothesis2_diagnostic(const std::vector<SlopeMeasure>& family) const;

private:
    // Dinkelbach value of one measure (0 treated as "not positive")
    double member_value(const SlopeMeasure& rho, const InterfaceTable& table, double alpha,
                        double beta, bool* saturated) const;

    const EntropyEvaluator* ent_;
    Config cfg_;
    InterfaceTable twin_;  // entropy reference hull on the same grid
};

} // namespace copol

#endif
