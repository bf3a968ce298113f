#ifndef COPOL_COLUMN_TYPE_HPP
#define COPOL_COLUMN_TYPE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "copol/lattice.hpp"

namespace copol {

// Column type Theta = (chi, dpi, b0, b1, x). The disorder window chi labels
// block rows -m+1..m-1 of the column; dpi is the mesoscopic vertical
// increment; b0/b1 are entry/exit heights in (0,1]; x=1 keeps trajectories
// that avoid AB-interfaces (when none must be crossed), x=2 keeps those that
// reach one.
struct ColumnType {
    std::vector<Label> chi;  // size 2*m-1, chi[idx_of(row)] with row in [-m+1, m-1]
    int m = 4;
    int dpi = 0;
    double b0 = 1.0;
    double b1 = 1.0;
    int x = 1;

    int min_row() const { return -(m - 1); }
    int max_row() const { return m - 1; }

    Label chi_at(long long row) const {
        if (row < min_row() || row > max_row())
            throw MalformedWindow("chi row index outside window");
        return chi[static_cast<std::size_t>(row - min_row())];
    }

    void validate() const {
        if (m < 3) throw MalformedWindow("window needs m >= 3");
        if (chi.size() != static_cast<std::size_t>(2 * m - 1))
            throw MalformedWindow("chi window must cover rows -m+1..m-1");
        if (!(b0 > 0.0 && b0 <= 1.0 && b1 > 0.0 && b1 <= 1.0))
            throw MalformedWindow("entry/exit heights must lie in (0,1]");
        if (x != 1 && x != 2) throw MalformedWindow("x tag must be 1 or 2");
        if (std::abs(dpi) > m - 2) throw MalformedWindow("|dpi| too large for window");
    }
};

enum class ColumnClass { Int, NintA1, NintA2, NintB1, NintB2 };

inline const char* to_string(ColumnClass c) {
    switch (c) {
        case ColumnClass::Int: return "int";
        case ColumnClass::NintA1: return "nint(A,1)";
        case ColumnClass::NintA2: return "nint(A,2)";
        case ColumnClass::NintB1: return "nint(B,1)";
        case ColumnClass::NintB2: return "nint(B,2)";
    }
    return "?";
}

struct ColumnGeometry {
    int k = 0;                    // signed interface count k_Theta
    std::vector<int> interfaces;  // all interface heights n in the window, sorted
    double t = 1.0;               // minimal steps per column width
    double lA = 0.0;              // minimal vertical distance crossed in A
    double lB = 0.0;              // minimal vertical distance crossed in B
    ColumnClass cls = ColumnClass::Int;
};

namespace detail {

// interface at height n separates rows n-1 and n
inline std::vector<int> interface_heights(const ColumnType& th) {
    std::vector<int> out;
    for (int n = th.min_row() + 1; n <= th.max_row(); ++n)
        if (th.chi_at(n - 1) != th.chi_at(n)) out.push_back(n);
    return out;
}

// signed number of interfaces between the entry row and row dpi
inline int k_of(const std::vector<int>& ifc, int dpi) {
    if (dpi > 0) {
        int c = 0;
        for (int n : ifc)
            if (n >= 1 && n <= dpi) ++c;
        return c;
    }
    if (dpi < 0) {
        int c = 0;
        for (int n : ifc)
            if (n >= dpi + 1 && n <= 0) ++c;
        return -c;
    }
    return 0;
}

}  // namespace detail

// Geometry of a column type: interface structure, minimal crossing time and
// the minimal vertical distances in each solvent.
inline ColumnGeometry geometry(const ColumnType& th) {
    th.validate();
    ColumnGeometry g;
    g.interfaces = detail::interface_heights(th);
    g.k = detail::k_of(g.interfaces, th.dpi);

    const double disp = (th.dpi > 0)   ? th.dpi + th.b1 - th.b0
                        : (th.dpi < 0) ? -th.dpi + th.b0 - th.b1
                                       : std::abs(th.b1 - th.b0);

    if (g.k != 0) {
        if (th.x != 1) throw MalformedWindow("interior columns carry x=1");
        g.cls = ColumnClass::Int;
        g.t = 1.0 + disp;

        // crossed interfaces in the direction of travel
        std::vector<int> crossed;
        for (int n : g.interfaces) {
            if (th.dpi > 0 && n >= 1 && n <= th.dpi) crossed.push_back(n);
            if (th.dpi < 0 && n >= th.dpi + 1 && n <= 0) crossed.push_back(n);
        }
        if (th.dpi < 0) std::reverse(crossed.begin(), crossed.end());

        const int kk = static_cast<int>(crossed.size());
        // per-gap vertical distances and a representative row for the label
        for (int j = 1; j <= kk + 1; ++j) {
            double len = 0.0;
            long long rep = 0;
            if (th.dpi > 0) {
                if (j == 1) {
                    len = crossed[0] - th.b0;
                    rep = 0;
                } else if (j <= kk) {
                    len = crossed[j - 1] - crossed[j - 2];
                    rep = crossed[j - 2];
                } else {
                    len = th.dpi + th.b1 - crossed[kk - 1];
                    rep = crossed[kk - 1];
                }
            } else {
                if (j == 1) {
                    len = th.b0 - crossed[0];
                    rep = 0;
                } else if (j <= kk) {
                    len = crossed[j - 2] - crossed[j - 1];
                    rep = crossed[j - 1];
                } else {
                    len = crossed[kk - 1] - (th.dpi + th.b1);
                    rep = th.dpi;
                }
            }
            if (len < -1e-12) throw MalformedWindow("negative gap length");
            if (th.chi_at(rep) == Label::A)
                g.lA += len;
            else
                g.lB += len;
        }
        return g;
    }

    // nint: all blocks between entry and exit share the label chi(0)
    const Label solv = th.chi_at(0);
    if (th.x == 1) {
        g.cls = (solv == Label::A) ? ColumnClass::NintA1 : ColumnClass::NintB1;
        g.t = 1.0 + disp;
    } else {
        g.cls = (solv == Label::A) ? ColumnClass::NintA2 : ColumnClass::NintB2;
        // nearest interface above (n1) and below (n0), if any
        double up = std::numeric_limits<double>::infinity();
        double down = std::numeric_limits<double>::infinity();
        for (int n : g.interfaces) {
            if (n >= 1) {
                up = 2.0 * n - th.b0 - th.b1 - th.dpi;
                break;
            }
        }
        for (auto it = g.interfaces.rbegin(); it != g.interfaces.rend(); ++it) {
            if (*it <= 0) {
                down = 2.0 * std::abs(*it) + th.b0 + th.b1 + th.dpi;
                break;
            }
        }
        if (!std::isfinite(up) && !std::isfinite(down))
            throw MalformedWindow("x=2 requires a reachable interface in the window");
        g.t = 1.0 + std::min(up, down);
    }
    // classes 1 and 2 use the same displacement formula (mirrors the source
    // text; see README on the class-2 distance convention)
    if (solv == Label::A)
        g.lA = disp;
    else
        g.lB = disp;
    return g;
}

// convenience builders -------------------------------------------------------

inline ColumnType uniform_column(Label l, int m, int dpi, double b0, double b1, int x = 1) {
    ColumnType th;
    th.m = m;
    th.chi.assign(static_cast<std::size_t>(2 * m - 1), l);
    th.dpi = dpi;
    th.b0 = b0;
    th.b1 = b1;
    th.x = x;
    return th;
}

// chi from a row->label function
template <class Fn>
ColumnType column_from(Fn&& label_of_row, int m, int dpi, double b0, double b1, int x = 1) {
    ColumnType th;
    th.m = m;
    th.dpi = dpi;
    th.b0 = b0;
    th.b1 = b1;
    th.x = x;
    th.chi.resize(static_cast<std::size_t>(2 * m - 1));
    for (int r = -(m - 1); r <= m - 1; ++r)
        th.chi[static_cast<std::size_t>(r + m - 1)] = label_of_row(r);
    return th;
}

} // namespace copol

#endif
