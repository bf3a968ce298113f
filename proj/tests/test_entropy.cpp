#include <cmath>
#include <thread>

#include "doctest.h"
#include "copol/entropy.hpp"
#include "copol/oracle.hpp"
#include "oracle_ref.hpp"

using namespace copol;

namespace {
EntropyEvaluator& evaluator() {
    static EntropyEvaluator ent;
    return ent;
}

// three-rung extrapolation with the (a log L + b)/L finite-size model
double richardson(const EntropyEvaluator& ent, double u, double l, int L1) {
    double k1 = ent.kappa_finite(L1, u, l);
    double k2 = ent.kappa_finite(2 * L1, u, l);
    double k3 = ent.kappa_finite(4 * L1, u, l);
    double A[3][4] = {{1, -std::log(L1) / L1, -1.0 / L1, k1},
                      {1, -std::log(2.0 * L1) / (2.0 * L1), -0.5 / L1, k2},
                      {1, -std::log(4.0 * L1) / (4.0 * L1), -0.25 / L1, k3}};
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c; r < 3; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        for (int k = 0; k < 4; ++k) std::swap(A[c][k], A[piv][k]);
        for (int r = 0; r < 3; ++r)
            if (r != c) {
                double f = A[r][c] / A[c][c];
                for (int k = 0; k < 4; ++k) A[r][k] -= f * A[c][k];
            }
    }
    return A[0][3] / A[0][0];
}
}  // namespace

TEST_CASE("kappa trivial values and symmetry") {
    auto& ent = evaluator();
    CHECK(ent.kappa(1.0, 0.0) == 0.0);
    CHECK(ent.kappa(2.5, 1.0) == ent.kappa(2.5, -1.0));
    CHECK(ent.kappa(2.0, 0.0) == doctest::Approx(std::log(1.0 + std::sqrt(2.0))).epsilon(1e-12));
    // boundary value by continuous extension
    CHECK(ent.kappa(2.0, 1.0) ==
          doctest::Approx((2.0 * std::log(2.0) - 0.0) / 2.0).epsilon(1e-10));
}

TEST_CASE("kappa_finite equals exact counts") {
    auto& ent = evaluator();
    CHECK(ent.kappa_finite(7, 1, 0) == 0.0);
    double raw = std::log(static_cast<double>(ref::count_paths(2, 4, 0))) / 4.0;
    CHECK(ent.kappa_finite(2, 2, 0) == doctest::Approx(raw).epsilon(1e-12));
}

TEST_CASE("finite-L ladder is monotone and bounded by the limit") {
    auto& ent = evaluator();
    for (auto [u, l] : std::vector<std::pair<double, double>>{{2, 0}, {2, 1}, {3, 1}, {4, 2}}) {
        double prev = -1.0;
        for (int L : ent.ladder()) {
            double kL = ent.kappa_finite(L, u, l);
            CHECK(kL >= prev - 1e-12);
            CHECK(kL <= ent.kappa(u, l) + 1e-9);
            CHECK(kL <= std::log(3.0));
            prev = kL;
        }
    }
}

TEST_CASE("limit matches finite-L extrapolation") {
    auto& ent = evaluator();
    double ext = richardson(ent, 3.0, 1.0, 16);
    CHECK(std::abs(ext - ent.kappa(3.0, 1.0)) < 1e-3);
}

TEST_CASE("derivative closed form") {
    auto& ent = evaluator();
    SUBCASE("matches finite differences of the dual value") {
        for (double l : {0.5, 1.0, 2.0})
            for (double v : {1.0 + l + 0.25, 1.0 + l + 1.0, 1.0 + l + 3.0}) {
                double g = ent.kappa_derivative(v, l);
                double h = 1e-5 * std::max(1.0, v);
                auto f = [&](double x) { return x * ent.kappa(x, l); };
                double fd = (-f(v + 2 * h) + 8 * f(v + h) - 8 * f(v - h) + f(v - 2 * h)) /
                            (12 * h);
                CHECK(std::abs(g - fd) / std::abs(fd) < 1e-6);
            }
    }
    SUBCASE("vanishes at infinity") { CHECK(ent.kappa_derivative(1e6, 1.0) < 1e-4); }
    SUBCASE("l->infinity proxy at v=2+l") { CHECK(g_closed_form(1.0 + 2e-3, 1e-3) < 0.05); }
    SUBCASE("domain error at the boundary") {
        CHECK_THROWS_AS(ent.kappa_derivative(2.0, 1.0), DomainError);
    }
}

TEST_CASE("chi_inverse") {
    auto& ent = evaluator();
    SUBCASE("round trip") {
        for (double l : {0.0, 0.5, 1.0, 2.0})
            for (double dv : {0.3, 0.8, 2.0}) {
                double v0 = 1.0 + l + dv;
                double c = ent.kappa_derivative(v0, l);
                double v = ent.chi_inverse(c, l);
                CHECK(std::abs(v - v0) < 1e-8);
            }
    }
    SUBCASE("large c pushes to the lower boundary") {
        CHECK(ent.chi_inverse(1e3, 1.0) - 2.0 < 1e-2);
    }
    SUBCASE("small c runs off to infinity") { CHECK(ent.chi_inverse(1e-4, 0.0) > 1e2); }
    SUBCASE("c must be positive") { CHECK_THROWS_AS(ent.chi_inverse(0.0, 1.0), DomainError); }
}

TEST_CASE("strict concavity of u -> u kappa") {
    auto& ent = evaluator();
    for (double l : {0.0, 0.5, 1.0, 2.0})
        for (double u1 : {1.0 + l + 0.25, 1.0 + l + 1.0}) {
            double u2 = u1 + 1.5;
            double mid = 0.5 * (u1 + u2);
            double lhs = mid * ent.kappa(mid, l);
            double chord = 0.5 * (u1 * ent.kappa(u1, l) + u2 * ent.kappa(u2, l));
            CHECK(lhs - chord > 1e-8);
        }
}

TEST_CASE("kappa decreases in |l| and vanishes for large arguments") {
    auto& ent = evaluator();
    for (double u : {3.0, 5.0}) {
        double prev = ent.kappa(u, 0.0);
        for (double l : {0.5, 1.0, 1.5}) {
            double k = ent.kappa(u, l);
            CHECK(k < prev);
            prev = k;
        }
    }
    CHECK(ent.kappa(200.0, 0.0) < 0.05);
    CHECK(ent.kappa(27.0, 25.0) < 0.2);  // l large, u-l small
}

TEST_CASE("cache is safe under concurrent use") {
    EntropyEvaluator ent;
    std::vector<double> vals(8, 0.0);
    std::vector<std::thread> pool;
    for (int t = 0; t < 8; ++t)
        pool.emplace_back([&, t]() {
            double acc = 0.0;
            for (int i = 0; i < 50; ++i) acc += ent.kappa(1.5 + 0.1 * (i % 7), 0.25 * (t % 3));
            vals[static_cast<std::size_t>(t)] = acc;
        });
    for (auto& th : pool) th.join();
    for (int t = 3; t < 6; ++t) CHECK(vals[t] == vals[t - 3]);
}
