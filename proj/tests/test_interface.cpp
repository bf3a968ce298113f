#include <cmath>

#include "doctest.h"
#include "copol/interface.hpp"
#include "copol/oracle.hpp"
#include "oracle_ref.hpp"

using namespace copol;

namespace {
EntropyEvaluator& evaluator() {
    static EntropyEvaluator ent;
    return ent;
}

std::vector<Label> seeded_word(std::uint64_t seed, long long n) {
    std::vector<Label> w(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i)
        w[static_cast<std::size_t>(i)] = (hash2(seed, i) & 1ULL) ? Label::B : Label::A;
    return w;
}
}  // namespace

TEST_CASE("partition function against raw enumeration") {
    std::vector<Label> omega = seeded_word(2024, 16);
    for (double mu : {1.5, 2.0})
        for (auto [a, b] : std::vector<std::pair<double, double>>{{2, 1}, {3, -2}, {1, 1}}) {
            double dp = interface_log_partition(4, mu, omega, a, b);
            double raw = ref::interface_logZ(4, mu, omega, a, b);
            CHECK(dp == doctest::Approx(raw).epsilon(1e-10));
        }
}

TEST_CASE("partition trivial values") {
    std::vector<Label> omega = seeded_word(7, 16);
    SUBCASE("mu=1: the single flat path pays nothing") {
        CHECK(interface_log_partition(4, 1.0, omega, 2.0, -1.0) == doctest::Approx(0.0));
        CHECK(interface_log_partition(4, 1.0, omega, 2.0, 1.0) == doctest::Approx(0.0));
    }
    SUBCASE("zero couplings count paths") {
        auto& ent = evaluator();
        double z = interface_log_partition(6, 2.0, seeded_word(8, 12), 0.0, 0.0);
        CHECK(z == doctest::Approx(ent.kappa_finite(6, 2.0, 0.0) * 12.0).epsilon(1e-12));
    }
    SUBCASE("parity violations rejected") {
        CHECK_THROWS_AS(interface_log_partition(4, 1.25, omega, 1.0, 0.5), DomainError);
    }
}

TEST_CASE("log Z is monotone in beta") {
    std::vector<Label> omega = seeded_word(99, 24);
    double prev = -1e300;
    for (double b : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
        double z = interface_log_partition(6, 2.0, omega, 2.0, b);
        CHECK(z >= prev - 1e-12);
        prev = z;
    }
}

TEST_CASE("phi_finite statistics") {
    auto& ent = evaluator();
    SUBCASE("zero couplings have zero variance") {
        auto st = phi_finite(8, 2.0, 8, 5, 0.0, 0.0);
        CHECK(st.stderr_ <= 1e-14);
        CHECK(st.mean == doctest::Approx(ent.kappa_finite(8, 2.0, 0.0)).epsilon(1e-12));
    }
    SUBCASE("beta<=0 collapses to the finite-L entropy") {
        for (auto [a, b] : std::vector<std::pair<double, double>>{{2, 0}, {2, -1}}) {
            auto st = phi_finite(32, 2.0, 64, 11, a, b);
            CHECK(std::abs(st.mean - ent.kappa_finite(32, 2.0, 0.0)) <
                  2.0 * st.stderr_ + 0.05);
        }
    }
    SUBCASE("localization onset at strong couplings") {
        auto st = phi_finite(6, 2.0, 200, 13, 3.0, 2.5);
        CHECK(st.mean - ent.kappa_finite(6, 2.0, 0.0) > 2.0 * st.stderr_);
    }
}

TEST_CASE("stderr scales with the sample budget") {
    auto a = phi_finite(8, 2.0, 50, 31, 3.0, 2.5);
    auto b = phi_finite(8, 2.0, 200, 31, 3.0, 2.5);
    // quadrupling the samples should halve the standard error within ~30%
    CHECK(b.stderr_ <= 0.5 * a.stderr_ * 1.3);
    CHECK(b.stderr_ >= 0.5 * a.stderr_ / 1.3);
}

TEST_CASE("phi extrapolation") {
    auto& ent = evaluator();
    InterfaceConfig cfg;
    cfg.samples = 32;
    cfg.ladder = {8, 16};
    SUBCASE("phi(1) = 0 exactly") {
        PhiEstimate e = phi_extrapolated(1.0, cfg, 2.0, 1.0, ent);
        CHECK(e.value == 0.0);
        CHECK(e.err == 0.0);
    }
    SUBCASE("beta<=0 estimate collapses to kappa after flooring") {
        PhiEstimate e = phi_extrapolated(2.0, cfg, 2.0, -1.0, ent);
        CHECK(e.floored);
        CHECK(e.value == doctest::Approx(ent.kappa(e.mu_snapped, 0.0)));
    }
    SUBCASE("estimates decay along mu (large-mu limit direction)") {
        PhiEstimate lo = phi_extrapolated(3.0, cfg, 2.0, 0.0, ent);
        PhiEstimate hi = phi_extrapolated(8.0, cfg, 2.0, 0.0, ent);
        CHECK(hi.value < lo.value);
    }
}

TEST_CASE("interface table and envelope") {
    auto& ent = evaluator();
    InterfaceConfig cfg;
    cfg.samples = 24;
    cfg.mu_step = 0.5;
    cfg.ladder = {8, 16};
    InterfaceTable t = InterfaceTable::build(cfg, 2.0, 1.0, ent);

    SUBCASE("envelope is exactly concave and dominates the floored data") {
        CHECK(t.hull().concavity_violation() == 0.0);
        for (std::size_t i = 0; i < t.grid.size(); ++i) {
            CHECK(t.mu_phi(t.grid[i]) >= t.grid[i] * t.estimate[i] - 1e-12);
            double kap = t.grid[i] <= 1.0 ? 0.0 : ent.kappa(t.grid[i], 0.0);
            CHECK(t.estimate[i] >= kap - 1e-12);
        }
        CHECK(t.phi(1.0) == 0.0);
    }
    SUBCASE("subdifferential queries") {
        CHECK(t.v_I_of_c(1e3).v == 1.0);
        SpeedQuery tiny = t.v_I_of_c(1e-4);
        CHECK(tiny.v == t.grid.back());
        CHECK(tiny.saturated);
        // a chord slope lands on the left node
        const auto& hull = t.hull();
        if (hull.size() >= 3) {
            double c = hull.slope_right(1);
            CHECK(t.v_I_of_c(c).v == hull.xs()[1]);
        }
    }
    SUBCASE("mu phi is non-decreasing on the envelope") {
        for (std::size_t j = 0; j + 1 < t.hull().size(); ++j)
            CHECK(t.hull().slope_right(j) >= -1e-12);
    }
    SUBCASE("json round trip is byte-stable") {
        std::string a = t.to_json();
        InterfaceTable back = InterfaceTable::from_json(a);
        CHECK(back.to_json() == a);
        CHECK(back.v_I_of_c(0.3).v == t.v_I_of_c(0.3).v);
    }
    SUBCASE("entropy twin is dominated by the quenched table") {
        InterfaceTable twin = InterfaceTable::entropy_reference(cfg, ent);
        for (double mu : {1.0, 1.5, 2.5, 4.0, 6.0})
            CHECK(t.mu_phi(mu) >= twin.mu_phi(mu) - 1e-12);
    }
}
