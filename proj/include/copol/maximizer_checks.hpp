#ifndef COPOL_MAXIMIZER_CHECKS_HPP
#define COPOL_MAXIMIZER_CHECKS_HPP

#include <cstdint>
#include <string>

#include "copol/varform.hpp"

namespace copol {

// Numerical uniqueness and attainment checks for the variational maximizers:
// near-optimal solutions must cluster around the Dinkelbach maximizer, and
// the per-column splits must carry the structural zeros of the unique
// maximizer.

struct MaximizerReport {
    std::string measure_label;
    double fixed_point = 0.0;
    int trials = 0;
    int accepted = 0;              // perturbations within 1e-6 of the optimum
    double worst_gap = 0.0;        // largest speed distance among accepted trials
    double worst_margin = 0.0;     // most positive improvement found (should be <= 0)
    bool improvement_found = false;
    std::string to_json() const;
};

MaximizerReport verify_inner_uniqueness(const SlopeEngine& eng, const SlopeMeasure& rho,
                                        int trials, std::uint64_t seed);

struct ColumnUniquenessReport {
    double value = 0.0;
    double value_spread = 0.0;     // across multistart runs
    double arg_spread = 0.0;       // across near-optimal runs
    bool structure_ok = true;      // G.2-style zero/positivity pattern
    std::string violation;
    std::string to_json() const;
};

ColumnUniquenessReport verify_column_uniqueness(const ColumnSolver& solver,
                                                const ColumnType& th, double u);

// finite families attain their optimum; the report names the winner and its
// margin over the runner-up
struct AttainmentReport {
    std::string argmax_label;
    double value = 0.0;
    double runner_up = 0.0;
    double margin = 0.0;
};

AttainmentReport family_attainment(const SlopeEngine& eng,
                                   const std::vector<SlopeMeasure>& family);

} // namespace copol

#endif
