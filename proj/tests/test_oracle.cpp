#include <cmath>

#include "doctest.h"
#include "copol/oracle.hpp"
#include "oracle_ref.hpp"

using namespace copol;

TEST_CASE("single trivial paths") {
    CHECK(oracle::enumerate_column_paths(1, 1, 0) == 1);
    CHECK(oracle::count_paths_stretch_form(5, 1, 0) == 1);  // r=0 term
    CHECK(oracle::enumerate_column_paths(2, 2, 1) == ref::count_paths(2, 4, 2));
}

TEST_CASE("counters agree with raw enumeration on small words") {
    for (int L = 1; L <= 3; ++L)
        for (long long S = L; S <= 12; ++S)
            for (long long D = -(S - L); D <= S - L; ++D) {
                if (((S - L - std::llabs(D)) % 2) != 0) continue;
                double u = double(S) / L, l = double(D) / L;
                long long raw = ref::count_paths(L, S, D);
                CHECK(oracle::enumerate_column_paths(L, u, l) == raw);
                CHECK(oracle::count_paths_stretch_form(L, u, l) == raw);
            }
}

TEST_CASE("counters agree with each other up to the budget") {
    for (int L = 1; L <= 4; ++L)
        for (long long S = L; S <= 18; ++S)
            for (long long D = -(S - L); D <= S - L; ++D) {
                if (((S - L - std::llabs(D)) % 2) != 0) continue;
                double u = double(S) / L, l = double(D) / L;
                CHECK(oracle::enumerate_column_paths(L, u, l) ==
                      oracle::count_paths_stretch_form(L, u, l));
            }
}

TEST_CASE("mirror symmetry of path counts") {
    for (long long D = 1; D <= 5; ++D) {
        long long S = 2 + D + 2;  // V = D+2 keeps the parity constraint
        double u = double(S) / 2.0;
        CHECK(oracle::enumerate_column_paths(2, u, D / 2.0) ==
              oracle::enumerate_column_paths(2, u, -D / 2.0));
    }
}

TEST_CASE("domain and budget errors") {
    CHECK_THROWS_AS(oracle::enumerate_column_paths(2, 1.5, 0), DomainError);  // parity
    CHECK_THROWS_AS(oracle::enumerate_column_paths(2, 1, 1), DomainError);    // u < 1+|l|
    oracle::Budget tiny{6};
    CHECK_THROWS_AS(oracle::enumerate_column_paths(2, 4, 0, tiny), BudgetExceeded);
}

TEST_CASE("hamiltonian on explicit paths") {
    ModelParams prm;
    prm.alpha = 2.0;
    prm.beta = 1.0;
    prm.p = 0.5;
    prm.M = 2;
    prm.m = 4;
    const int L = 2;

    DirectedPath path;
    path.start = {0, 1};
    path.steps = {Step::East, Step::North, Step::North, Step::East, Step::South, Step::East};
    REQUIRE(path.valid());

    SUBCASE("all-A field charges nothing") {
        DisorderPair dis = DisorderPair::make(7, 8, 10, 1.0);  // p=1: every block A
        CHECK(oracle::hamiltonian(path, dis, prm, L) == 0.0);
    }
    SUBCASE("all-B field with all-B word charges n*beta") {
        DisorderPair dis = DisorderPair::make(7, 8, 10, 0.0);  // p=0: every block B
        for (auto& w : dis.omega) w = Label::B;
        CHECK(oracle::hamiltonian(path, dis, prm, L) ==
              doctest::Approx(6.0 * prm.beta).epsilon(1e-15));
    }
    SUBCASE("mixed instance matches direct term-by-term summation") {
        DisorderPair dis = DisorderPair::make(41, 42, 10, 0.5);
        double H = 0.0;
        Point p = path.start;
        for (std::size_t i = 0; i < path.steps.size(); ++i) {
            Point q = advance(p, path.steps[i]);
            Bond bond{p, q};
            long long col = bond.horizontal() ? floordiv(std::min(p.x, q.x), L)
                                              : block_col_of_x(p.x, L);
            Label lbl =
                bond_label_rows(bond, L, [&](long long row) { return dis.meso(col, row); });
            if (lbl == Label::B)
                H += dis.omega_at(i + 1) == Label::B ? prm.beta : -prm.alpha;
            p = q;
        }
        CHECK(oracle::hamiltonian(path, dis, prm, L) == doctest::Approx(H).epsilon(1e-15));
    }
}

TEST_CASE("finite free energy") {
    ModelParams prm;
    prm.alpha = 2.0;
    prm.beta = 1.0;
    prm.p = 0.5;
    prm.M = 2;
    prm.m = 4;

    SUBCASE("zero couplings reduce to the path count") {
        ModelParams zero = prm;
        zero.alpha = 0.0;
        zero.beta = 0.0;
        DisorderPair dis = DisorderPair::make(1, 2, 10, 0.5);
        double f = oracle::finite_free_energy(10, 2, dis, zero);
        double ref = oracle::log_big(oracle::finite_path_count(10, 2, zero.M)) / 10.0;
        CHECK(f == doctest::Approx(ref).epsilon(1e-12));
    }
    SUBCASE("all-A field reduces to the path count for any word") {
        DisorderPair dis = DisorderPair::make(5, 6, 10, 1.0);
        double f = oracle::finite_free_energy(10, 2, dis, prm);
        double ref = oracle::log_big(oracle::finite_path_count(10, 2, prm.M)) / 10.0;
        CHECK(f == doctest::Approx(ref).epsilon(1e-12));
    }
    SUBCASE("seeded instance matches exhaustive enumeration") {
        DisorderPair dis = DisorderPair::make(11, 12, 10, 0.5);
        double f = oracle::finite_free_energy(10, 2, dis, prm);
        double ref = ref::emulsion_logZ(10, 2, prm.M, dis, prm.alpha, prm.beta) / 10.0;
        CHECK(f == doctest::Approx(ref).epsilon(1e-10));
    }
    SUBCASE("uniform bound") {
        DisorderPair dis = DisorderPair::make(13, 14, 12, 0.3);
        double f = oracle::finite_free_energy(12, 2, dis, prm);
        CHECK(std::abs(f) <= std::log(3.0) + prm.alpha + 1e-12);
    }
}

TEST_CASE("disorder regeneration is bit-for-bit") {
    DisorderPair a = DisorderPair::make(123, 456, 64, 0.37);
    DisorderPair b = DisorderPair::make(123, 456, 64, 0.37);
    CHECK(a.omega == b.omega);
    for (long long j = -3; j <= 3; ++j)
        for (long long k = -5; k <= 5; ++k) CHECK(a.meso(j, k) == b.meso(j, k));
}

TEST_CASE("column free energy at tiny sizes") {
    ModelParams prm;
    prm.alpha = 2.0;
    prm.beta = 1.0;
    prm.p = 0.5;
    prm.M = 2;
    prm.m = 4;

    SUBCASE("all-A column: zero Hamiltonian, zero variance") {
        ColumnType th = uniform_column(Label::A, 4, 1, 0.5, 0.5, 1);
        auto st = oracle::column_free_energy_finite(th, 3.0, 2, 8, 99, prm);
        double ref =
            oracle::log_big(oracle::count_column_paths(th, 3.0, 2)) / (3.0 * 2);
        CHECK(st.mean == doctest::Approx(ref).epsilon(1e-12));
        CHECK(st.stderr_ <= 1e-14);
    }
    SUBCASE("all-B column at beta=-alpha: exact entropy shift, zero variance") {
        ModelParams sym = prm;
        sym.beta = -sym.alpha;
        ColumnType th = uniform_column(Label::B, 4, 0, 0.5, 0.5, 1);
        auto st = oracle::column_free_energy_finite(th, 2.0, 2, 8, 99, sym);
        double ref = oracle::log_big(oracle::count_column_paths(th, 2.0, 2)) / 4.0 - sym.alpha;
        CHECK(st.mean == doctest::Approx(ref).epsilon(1e-12));
        CHECK(st.stderr_ <= 1e-14);
    }
    SUBCASE("interior column matches raw enumeration for a fixed word") {
        ColumnType th = column_from([](int r) { return r >= 1 ? Label::A : Label::B; }, 4, 1,
                                    0.5, 0.5, 1);
        std::vector<Label> omega;
        for (int i = 0; i < 16; ++i) omega.push_back(i % 3 == 1 ? Label::B : Label::A);
        double dp = oracle::column_log_partition(th, 3.0, 2, omega, prm);
        double raw = ref::column_logZ(th, 3.0, 2, omega, prm.alpha, prm.beta);
        CHECK(dp == doctest::Approx(raw).epsilon(1e-10));
    }
    SUBCASE("reach-restricted classes match raw enumeration") {
        for (int x : {1, 2}) {
            ColumnType th = column_from([](int r) { return r >= 2 ? Label::B : Label::A; }, 4,
                                        0, 0.5, 0.5, x);
            ColumnGeometry g = geometry(th);
            double u = g.t + (x == 1 ? 2.0 : 0.0) / 2.0 + (x == 2 ? 2.0 / 2.0 : 0.0);
            u = g.t + 1.0;  // valid for both classes at L=2 (parity 2/L)
            std::vector<Label> omega(32, Label::B);
            long long n_ref = 0;
            double raw = ref::column_logZ(th, u, 2, omega, prm.alpha, prm.beta, &n_ref);
            double dp = oracle::column_log_partition(th, u, 2, omega, prm);
            CHECK(oracle::count_column_paths(th, u, 2) == oracle::BigInt(n_ref));
            CHECK(dp == doctest::Approx(raw).epsilon(1e-10));
        }
    }
    SUBCASE("empty path set is flagged") {
        // entry pinned on an interface: no x=1 trajectory avoids it
        ColumnType th = column_from([](int r) { return r >= 1 ? Label::A : Label::B; }, 4, 0,
                                    1.0, 1.0, 1);
        CHECK_THROWS_AS(oracle::column_free_energy_finite(th, 1.0, 2, 4, 1, prm),
                        EmptyPathSet);
    }
}
