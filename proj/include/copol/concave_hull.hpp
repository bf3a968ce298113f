#ifndef COPOL_CONCAVE_HULL_HPP
#define COPOL_CONCAVE_HULL_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "copol/lattice.hpp"

namespace copol {

// Least concave majorant of a finite point set (x strictly increasing):
// piecewise-linear, queried by value, by slope (subdifferential), and by the
// exact inner maximizer of y(x) - c*x. Beyond the last vertex the hull is
// extended with slope 0 and queries report saturation.
class ConcaveHull {
public:
    struct SupResult {
        double x = 1.0;
        double value = 0.0;   // hull value at x
        bool saturated = false;
    };

    ConcaveHull() = default;

    static ConcaveHull fit(const std::vector<double>& xs, const std::vector<double>& ys) {
        if (xs.size() != ys.size() || xs.size() < 2)
            throw DomainError("ConcaveHull: need at least two points");
        ConcaveHull h;
        // Andrew-style upper hull
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i > 0 && !(xs[i] > xs[i - 1]))
                throw DomainError("ConcaveHull: abscissae must increase");
            h.push(xs[i], ys[i]);
        }
        return h;
    }

    std::size_t size() const { return x_.size(); }
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

    // hull value; constant beyond the last vertex
    double eval(double x) const {
        if (x <= x_.front()) return y_.front();
        if (x >= x_.back()) return y_.back();
        std::size_t j = seg_of(x);
        double t = (x - x_[j]) / (x_[j + 1] - x_[j]);
        return y_[j] + t * (y_[j + 1] - y_[j]);
    }

    // slope of the segment right of vertex j (0 beyond the end)
    double slope_right(std::size_t j) const {
        if (j + 1 >= x_.size()) return 0.0;
        return (y_[j + 1] - y_[j]) / (x_[j + 1] - x_[j]);
    }

    // the vertex whose subdifferential contains c; if c is at least the
    // first slope the left endpoint is returned; if c is below every slope
    // the result saturates at the right endpoint (ties pick the left node)
    SupResult argmax_shifted(double c) const {
        SupResult r;
        std::size_t j = 0;
        while (j + 1 < x_.size() && slope_right(j) > c) ++j;
        r.x = x_[j];
        r.value = y_[j];
        r.saturated = (j + 1 == x_.size());
        return r;
    }

    // exact sup over the hull of y(x) - c*x
    double sup_shifted(double c) const {
        SupResult r = argmax_shifted(c);
        return r.value - c * r.x;
    }

    // concavity self-check (chord test on consecutive triples): max violation
    double concavity_violation() const {
        double worst = 0.0;
        for (std::size_t j = 1; j + 1 < x_.size(); ++j) {
            double d = slope_right(j) - slope_right(j - 1);
            if (d > worst) worst = d;
        }
        return worst;
    }

private:
    void push(double x, double y) {
        x_.push_back(x);
        y_.push_back(y);
        while (x_.size() >= 3) {
            std::size_t n = x_.size();
            double s01 = (y_[n - 2] - y_[n - 3]) / (x_[n - 2] - x_[n - 3]);
            double s12 = (y_[n - 1] - y_[n - 2]) / (x_[n - 1] - x_[n - 2]);
            if (s12 <= s01 + 1e-15 * std::max(1.0, std::abs(s01))) break;
            // middle vertex below the chord: drop it
            x_.erase(x_.end() - 2);
            y_.erase(y_.end() - 2);
        }
    }

    std::size_t seg_of(double x) const {
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (x_[mid] <= x ? lo : hi) = mid;
        }
        return lo;
    }

    std::vector<double> x_, y_;
};

} // namespace copol

#endif
