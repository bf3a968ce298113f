#ifndef COPOL_LATTICE_HPP
#define COPOL_LATTICE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "copol/rng.hpp"

namespace copol {

// ---------------------------------------------------------------------------
// errors (shared across modules)
// ---------------------------------------------------------------------------

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DisorderTooShort : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyPathSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MalformedWindow : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TableMissing : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConstraintViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MenuMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonPositive : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// steps and paths
// ---------------------------------------------------------------------------

enum class Step : std::uint8_t { East = 0, North = 1, South = 2 };

struct Point {
    long long x = 0;
    long long y = 0;
    friend bool operator==(const Point&, const Point&) = default;
};

inline Point advance(Point p, Step s) {
    switch (s) {
        case Step::East: return {p.x + 1, p.y};
        case Step::North: return {p.x, p.y + 1};
        case Step::South: return {p.x, p.y - 1};
    }
    return p;
}

// Directed self-avoiding path: steps in {E,N,S}, no immediate North<->South
// reversal (which is the only way this step set can self-intersect).
struct DirectedPath {
    Point start;
    std::vector<Step> steps;

    bool valid() const {
        for (std::size_t i = 1; i < steps.size(); ++i) {
            const bool rev = (steps[i - 1] == Step::North && steps[i] == Step::South) ||
                             (steps[i - 1] == Step::South && steps[i] == Step::North);
            if (rev) return false;
        }
        return true;
    }

    Point end() const {
        Point p = start;
        for (Step s : steps) p = advance(p, s);
        return p;
    }
};

// ---------------------------------------------------------------------------
// model parameters
// ---------------------------------------------------------------------------

struct ModelParams {
    double alpha = 1.0;  // AA reward (>= 0)
    double beta = 0.5;   // BB reward, |beta| <= alpha (CONE)
    double p = 0.5;      // density of A-blocks
    int M = 2;           // mesoscopic vertical cap per column
    int m = 4;           // per-column step cap, m >= M+2

    void validate() const {
        if (!(alpha >= 0.0) || !(alpha >= (beta < 0 ? -beta : beta)))
            throw DomainError("ModelParams: (alpha,beta) outside CONE");
        if (!(p > 0.0) || !(p < 1.0))
            throw DomainError("ModelParams: p must lie in (0,1)");
        if (M < 1) throw DomainError("ModelParams: M >= 1 required");
        if (m < M + 2) throw DomainError("ModelParams: m >= M+2 required");
    }
};

// ---------------------------------------------------------------------------
// block-label conventions
// ---------------------------------------------------------------------------
//
// Blocks are Lambda(j,k) = (jL,(j+1)L] x (kL,(k+1)L]. A bond belongs to the
// block containing its midpoint; a horizontal bond lying exactly on a block
// boundary row is labelled B only if the blocks above and below are both B
// (the interface belongs to the A-block). Vertical bonds at x=0 count as
// column 0.

enum class Label : std::uint8_t { A = 0, B = 1 };

inline long long floordiv(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

// row index k with y in (kL,(k+1)L]
inline long long block_row(long long y, int L) {
    return floordiv(y - 1, L);
}

inline long long block_col_of_x(long long x, int L) {
    if (x <= 0) return 0;  // start boundary: assign to column 0
    return block_row(x, L);
}

struct Bond {
    Point a, b;  // b = a + step
    bool horizontal() const { return a.y == b.y; }
};

// Label of the bond under a row-labelling function chi(row) -> Label.
template <class ChiFn>
Label bond_label_rows(const Bond& bond, int L, ChiFn&& chi) {
    if (bond.horizontal()) {
        if (bond.a.y % L == 0) {
            // exactly on a boundary row y = kL: rows k-1 (below) and k (above)
            long long k = bond.a.y / L;
            Label below = chi(k - 1), above = chi(k);
            return (below == Label::B && above == Label::B) ? Label::B : Label::A;
        }
        return chi(block_row(bond.a.y, L));
    }
    long long ylo = bond.a.y < bond.b.y ? bond.a.y : bond.b.y;
    // vertical bond (ylo, ylo+1): interior never touches a boundary row
    return chi(block_row(ylo + 1, L));
}

// ---------------------------------------------------------------------------
// disorder
// ---------------------------------------------------------------------------

// Microscopic word omega and mesoscopic field Omega, both regenerable
// bit-for-bit from their seeds.
struct DisorderPair {
    std::uint64_t omega_seed = 1;
    std::uint64_t meso_seed = 2;
    double p = 0.5;
    std::size_t n = 0;  // length of the realized omega word

    std::vector<Label> omega;  // realized word, omega[i] = label of monomer i+1

    static DisorderPair make(std::uint64_t omega_seed, std::uint64_t meso_seed,
                             std::size_t n, double p) {
        DisorderPair d;
        d.omega_seed = omega_seed;
        d.meso_seed = meso_seed;
        d.p = p;
        d.n = n;
        d.omega.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            d.omega[i] = (hash2(omega_seed, i) & 1ULL) ? Label::B : Label::A;
        return d;
    }

    // mesoscopic label of block (j,k); pure in (meso_seed, j, k, p)
    Label meso(long long j, long long k) const {
        std::uint64_t bits = hash3(meso_seed, static_cast<std::uint64_t>(j) * 2 + 11,
                                   static_cast<std::uint64_t>(k * 2 + 1000000007LL));
        return u01(bits) < p ? Label::A : Label::B;
    }

    Label omega_at(std::size_t i) const {  // 1-based monomer index
        if (i == 0 || i > omega.size()) throw DisorderTooShort("omega index out of range");
        return omega[i - 1];
    }
};

} // namespace copol

#endif
