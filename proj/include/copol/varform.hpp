#ifndef COPOL_VARFORM_HPP
#define COPOL_VARFORM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "copol/column.hpp"
#include "copol/entropy.hpp"
#include "copol/interface.hpp"

namespace copol {

// ---------------------------------------------------------------------------
// measures and profiles
// ---------------------------------------------------------------------------

struct SlopeAtom {
    double l = 0.0;  // slope >= 0
    double w = 0.0;  // weight > 0
};

// rho-bar = (atoms in A, atoms in B, interface mass); normalized to 1
struct SlopeMeasure {
    std::vector<SlopeAtom> atomsA;
    std::vector<SlopeAtom> atomsB;
    double wI = 0.0;
    std::string label;  // provenance

    double total() const;
    void normalize();
    void validate() const;  // weights positive, slopes finite/nonneg, total 1
    double massB() const;
};

// speeds aligned with the atoms of one SlopeMeasure
struct SpeedProfile {
    std::vector<double> vA;
    std::vector<double> vB;
    double vI = 1.0;
    bool saturated = false;  // some speed query ran off the interface table
};

struct ColumnMeasureAtom {
    ColumnType theta;
    double weight = 0.0;
};

struct ColumnMeasure {
    std::vector<ColumnMeasureAtom> atoms;
    std::string label;
    void normalize();
};

struct FractionTriple {
    double hA = 0.0, hB = 0.0, hI = 0.0;
};

// per-atom horizontal-fraction profile, constrained like the set E
struct FractionProfile {
    std::vector<FractionTriple> h;  // aligned with a ColumnMeasure
    void validate(const ColumnMeasure& rho) const;
};

// ---------------------------------------------------------------------------
// engine context
// ---------------------------------------------------------------------------

// Everything the slope-based functional needs. `iface` is the working
// interface envelope: the quenched table for the full free energy, or its
// pure-entropy twin for the delocalized functionals.
struct SlopeEngine {
    const EntropyEvaluator* ent = nullptr;
    const InterfaceTable* iface = nullptr;
    double alpha = 0.0;
    double beta = 0.0;

    double bshift() const { return 0.5 * (beta - alpha); }
};

// ---------------------------------------------------------------------------
// slope-based formula
// ---------------------------------------------------------------------------

double slope_ratio(const SlopeEngine& eng, const SlopeMeasure& rho, const SpeedProfile& v);

// v(c): vA = chi_l^{-1}(c), vB = chi_l^{-1}(c + (alpha-beta)/2), vI from the
// envelope subdifferential
SpeedProfile optimal_speed(const SlopeEngine& eng, double c, const SlopeMeasure& rho);

struct DinkelbachResult {
    double value = 0.0;
    SpeedProfile speeds;
    int iterations = 0;
    double residual = 0.0;
    bool saturated = false;
    std::vector<double> trace;  // c_k iterates
};

// h(rho-bar): Dinkelbach fixed point c = slope_ratio(rho, v(c))
DinkelbachResult free_energy_for_measure(const SlopeEngine& eng, const SlopeMeasure& rho,
                                         double tol = 1e-9, int max_iter = 200);

// ---------------------------------------------------------------------------
// column-based formula
// ---------------------------------------------------------------------------

double column_ratio(const ColumnSolver& solver, const ColumnMeasure& rho,
                    const std::vector<double>& u,
                    const std::vector<PsiPoint>* seeds = nullptr);

struct ColumnDinkelbachResult {
    double value = 0.0;
    std::vector<double> u;
    int iterations = 0;
    double residual = 0.0;
    bool saturated = false;
};

ColumnDinkelbachResult column_free_energy_for_measure(const ColumnSolver& solver,
                                                      const ColumnMeasure& rho,
                                                      double tol = 1e-9, int max_iter = 200);

// ---------------------------------------------------------------------------
// measure transforms (push down to columns / lift up to slopes)
// ---------------------------------------------------------------------------

struct LiftData {
    SlopeMeasure measure;
    SpeedProfile speeds;
    bool has_speeds = false;
};

// G_{rho,h} with optional per-atom speeds r = (rA,rB,rI); equal-slope atoms
// merge with weight-averaged (conditional expectation) speeds
LiftData lift_to_slope(const ColumnMeasure& rho, const FractionProfile& h,
                       const std::vector<PsiPoint>* maximizers = nullptr);

struct PushData {
    ColumnMeasure measure;
    std::vector<double> u;
    std::vector<PsiPoint> seeds;  // the split realizing u_Theta, for psi seeding
};

// u_Theta = hA vA(dA) + hB vB(dB) + hI vI on a menu generating rho_bar
PushData push_to_column(const SlopeMeasure& rho_bar, const SpeedProfile& v,
                        const ColumnMeasure& menu, const FractionProfile& h);

// ---------------------------------------------------------------------------
// strategy families
// ---------------------------------------------------------------------------

struct FamilyConfig {
    double p = 0.5;
    int M = 2;
    std::uint64_t meso_seed = 99;
    int strategies = 12;
    int columns = 10000;  // coarse-grained walk length
    double b_height = 0.5;
};

// the explicit horizontal-strategy witness p^2 dA0 + (1-p)^2 dB0 + 2p(1-p) dI
SlopeMeasure rho_hor(double p);

// disorder-sampled coarse-grained strategy family; always contains rho_hor,
// plus straight-ahead, A-seeking, interface-hugging and A-saturated members
std::vector<SlopeMeasure> measure_family_from_disorder(const FamilyConfig& cfg);

std::string measures_to_json(const std::vector<SlopeMeasure>& family);
std::vector<SlopeMeasure> measures_from_json(const std::string& text);

} // namespace copol

#endif
