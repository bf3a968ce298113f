#include "copol/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace copol::oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double logaddexp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double hi = a > b ? a : b;
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

long long round_to_int(double x, const char* what) {
    double r = std::llround(x);
    if (std::abs(x - r) > 1e-9)
        throw DomainError(std::string(what) + " is not an integer multiple of 1/L");
    return static_cast<long long>(r);
}

// last-step encoding: 0 E, 1 N, 2 S, 3 none
constexpr int kNone = 3;

inline bool reversal(int last, int next) {
    return (last == 1 && next == 2) || (last == 2 && next == 1);
}

}  // namespace

HLPoint make_hl(int L, double u, double l) {
    if (L < 1) throw DomainError("L >= 1 required");
    HLPoint h;
    h.L = L;
    h.D = round_to_int(l * L, "l*L");
    h.S = round_to_int(u * L, "u*L");
    long long V = h.S - L;
    if (V < 0 || V < std::llabs(h.D) || ((V - std::llabs(h.D)) % 2) != 0)
        throw DomainError("(u,l) violates u in 1+|l|+2N/L");
    return h;
}

double log_big(const BigInt& n) {
    if (n <= 0) return kNegInf;
    const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n));
    if (bits < 52) return std::log(n.convert_to<double>());
    BigInt top = n >> (bits - 52);
    return std::log(top.convert_to<double>()) + static_cast<double>(bits - 52) * std::log(2.0);
}

BigInt binom(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (long long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

BigInt enumerate_column_paths(int L, double u, double l, const Budget& budget) {
    HLPoint h = make_hl(L, u, l);
    if (h.S > budget.max_steps) throw BudgetExceeded("uL above enumeration budget");

    const long long S = h.S;
    const long long yspan = 2 * S + 1;
    auto idx = [&](long long x, long long y, int last) {
        return ((x * yspan) + (y + S)) * 4 + last;
    };
    std::vector<BigInt> cur(static_cast<std::size_t>((L + 1) * yspan * 4), BigInt(0));
    std::vector<BigInt> nxt(cur.size(), BigInt(0));
    cur[static_cast<std::size_t>(idx(0, 0, kNone))] = 1;

    for (long long step = 0; step < S; ++step) {
        std::fill(nxt.begin(), nxt.end(), BigInt(0));
        for (long long x = 0; x <= L; ++x)
            for (long long y = -S; y <= S; ++y)
                for (int last = 0; last < 4; ++last) {
                    const BigInt& c = cur[static_cast<std::size_t>(idx(x, y, last))];
                    if (c == 0) continue;
                    if (x + 1 <= L) nxt[static_cast<std::size_t>(idx(x + 1, y, 0))] += c;
                    if (!reversal(last, 1) && y + 1 <= S)
                        nxt[static_cast<std::size_t>(idx(x, y + 1, 1))] += c;
                    if (!reversal(last, 2) && y - 1 >= -S)
                        nxt[static_cast<std::size_t>(idx(x, y - 1, 2))] += c;
                }
        cur.swap(nxt);
    }

    BigInt total = 0;
    for (int last = 0; last < 4; ++last)
        total += cur[static_cast<std::size_t>(idx(L, h.D, last))];
    return total;
}

BigInt count_paths_stretch_form(int L, double u, double l) {
    HLPoint h = make_hl(L, u, l);
    const long long V = h.vertical();
    const long long P = (V + h.D) / 2;  // up steps
    const long long N = (V - h.D) / 2;  // down steps

    auto compositions = [](long long n, long long k) -> BigInt {
        if (n == 0 && k == 0) return 1;
        if (n <= 0 || k <= 0) return 0;
        return binom(n - 1, k - 1);
    };

    BigInt total = 0;
    for (long long r = 0; r <= L + 1 && r <= V; ++r) {
        if (r == 0) {
            if (V == 0) total += 1;  // the all-East path
            continue;
        }
        BigInt signed_comps = 0;
        for (long long rp = 0; rp <= r; ++rp)
            signed_comps += binom(r, rp) * compositions(P, rp) * compositions(N, r - rp);
        total += binom(L + 1, r) * signed_comps;
    }
    return total;
}

double hamiltonian(const DirectedPath& path, const DisorderPair& dis,
                   const ModelParams& params, int L) {
    if (path.steps.size() > dis.omega.size())
        throw DisorderTooShort("omega shorter than the path");
    double H = 0.0;
    Point p = path.start;
    for (std::size_t i = 0; i < path.steps.size(); ++i) {
        Point q = advance(p, path.steps[i]);
        Bond bond{p, q};
        long long col = bond.horizontal() ? floordiv(std::min(p.x, q.x), L)
                                          : block_col_of_x(p.x, L);
        Label lbl = bond_label_rows(bond, L, [&](long long row) { return dis.meso(col, row); });
        if (lbl == Label::B) {
            Label w = dis.omega_at(i + 1);
            H += (w == Label::B) ? params.beta : -params.alpha;
        }
        p = q;
    }
    return H;
}

namespace {

// Forward DP over W_{n,M} with per-step bond weights. Values are logs of
// partition sums restricted to each state. State: (x, y, last, vprev) where
// vprev is the block row in which the previous column was exited.
struct EmulsionDp {
    long long n;
    int L;
    int M;

    template <class StepWeight>
    double run(StepWeight&& weight_of) const {
        const long long S = n;
        const long long ymin = 1 - S, ymax = 1 + S;
        const long long yspan = ymax - ymin + 1;
        const long long rmin = block_row(ymin, L), rmax = block_row(ymax, L);
        const long long rspan = rmax - rmin + 1;
        auto idx = [&](long long x, long long y, int last, long long vprev) {
            return (((x * yspan) + (y - ymin)) * 4 + last) * rspan + (vprev - rmin);
        };
        std::vector<double> cur(static_cast<std::size_t>((S + 1) * yspan * 4 * rspan), kNegInf);
        std::vector<double> nxt(cur.size(), kNegInf);
        cur[static_cast<std::size_t>(idx(0, 1, kNone, 0))] = 0.0;

        for (long long step = 1; step <= S; ++step) {
            std::fill(nxt.begin(), nxt.end(), kNegInf);
            for (long long x = 0; x < step; ++x)  // at most step-1... bounded by steps made
                for (long long y = 1 - (step - 1); y <= 1 + (step - 1); ++y)
                    for (int last = 0; last < 4; ++last)
                        for (long long vp = rmin; vp <= rmax; ++vp) {
                            const double c = cur[static_cast<std::size_t>(idx(x, y, last, vp))];
                            if (c == kNegInf) continue;
                            // East
                            {
                                Point a{x, y}, b{x + 1, y};
                                long long vnew = vp;
                                bool ok = true;
                                if (x > 0 && x % L == 0) {
                                    long long v = block_row(y, L);
                                    if (std::llabs(v - vp) > M)
                                        ok = false;
                                    else
                                        vnew = v;
                                }
                                if (ok) {
                                    double w = weight_of(step, Bond{a, b});
                                    auto& slot =
                                        nxt[static_cast<std::size_t>(idx(x + 1, y, 0, vnew))];
                                    slot = logaddexp(slot, c + w);
                                }
                            }
                            // North / South
                            for (int dir = 1; dir <= 2; ++dir) {
                                if (reversal(last, dir)) continue;
                                long long y2 = dir == 1 ? y + 1 : y - 1;
                                Point a{x, y}, b{x, y2};
                                double w = weight_of(step, Bond{a, b});
                                auto& slot = nxt[static_cast<std::size_t>(idx(x, y2, dir, vp))];
                                slot = logaddexp(slot, c + w);
                            }
                        }
            cur.swap(nxt);
        }

        double total = kNegInf;
        for (double v : cur) total = logaddexp(total, v);
        return total;
    }
};

}  // namespace

BigInt finite_path_count(long long n, int L_n, int M, const Budget& budget) {
    if (n > budget.max_steps) throw BudgetExceeded("n above enumeration budget");
    // exact rational-free count via the same DP with BigInt values
    const long long S = n;
    const long long ymin = 1 - S, ymax = 1 + S;
    const long long yspan = ymax - ymin + 1;
    const long long rmin = block_row(ymin, L_n), rmax = block_row(ymax, L_n);
    const long long rspan = rmax - rmin + 1;
    auto idx = [&](long long x, long long y, int last, long long vprev) {
        return (((x * yspan) + (y - ymin)) * 4 + last) * rspan + (vprev - rmin);
    };
    std::vector<BigInt> cur(static_cast<std::size_t>((S + 1) * yspan * 4 * rspan), BigInt(0));
    std::vector<BigInt> nxt(cur.size(), BigInt(0));
    cur[static_cast<std::size_t>(idx(0, 1, kNone, 0))] = 1;
    for (long long step = 1; step <= S; ++step) {
        std::fill(nxt.begin(), nxt.end(), BigInt(0));
        for (long long x = 0; x < step; ++x)
            for (long long y = 1 - (step - 1); y <= 1 + (step - 1); ++y)
                for (int last = 0; last < 4; ++last)
                    for (long long vp = rmin; vp <= rmax; ++vp) {
                        const BigInt& c = cur[static_cast<std::size_t>(idx(x, y, last, vp))];
                        if (c == 0) continue;
                        long long vnew = vp;
                        bool ok = true;
                        if (x > 0 && x % L_n == 0) {
                            long long v = block_row(y, L_n);
                            if (std::llabs(v - vp) > M)
                                ok = false;
                            else
                                vnew = v;
                        }
                        if (ok) nxt[static_cast<std::size_t>(idx(x + 1, y, 0, vnew))] += c;
                        if (!reversal(last, 1))
                            nxt[static_cast<std::size_t>(idx(x, y + 1, 1, vp))] += c;
                        if (!reversal(last, 2))
                            nxt[static_cast<std::size_t>(idx(x, y - 1, 2, vp))] += c;
                    }
        cur.swap(nxt);
    }
    BigInt total = 0;
    for (const BigInt& v : cur) total += v;
    return total;
}

double finite_free_energy(long long n, int L_n, const DisorderPair& dis,
                          const ModelParams& params, const Budget& budget) {
    if (n > budget.max_steps) throw BudgetExceeded("n above enumeration budget");
    if (dis.omega.size() < static_cast<std::size_t>(n))
        throw DisorderTooShort("omega shorter than n");
    EmulsionDp dp{n, L_n, params.M};
    double logZ = dp.run([&](long long step, const Bond& bond) -> double {
        long long col = bond.horizontal() ? floordiv(std::min(bond.a.x, bond.b.x), L_n)
                                          : block_col_of_x(bond.a.x, L_n);
        Label lbl =
            bond_label_rows(bond, L_n, [&](long long row) { return dis.meso(col, row); });
        if (lbl != Label::B) return 0.0;
        return dis.omega[static_cast<std::size_t>(step - 1)] == Label::B ? params.beta
                                                                         : -params.alpha;
    });
    return logZ / static_cast<double>(n);
}

namespace {

// DP over W_{Theta,u,L}: start (0,b0*L), end (L,(dpi+b1)*L), S=uL steps, with
// an interface-visited flag for the nint classes.
struct ColumnDp {
    const ColumnType* th;
    int L;
    long long S;
    long long y0, y1;
    std::vector<long long> iface_heights;  // absolute lattice heights n*L
    bool need_flag;
    int want_flag;  // for nint: x=1 -> paths with flag 0, x=2 -> flag 1

    bool on_interface(long long y) const {
        for (long long h : iface_heights)
            if (y == h) return true;
        return false;
    }

    template <class StepWeight, class Value, class Add, class One, class IsZero>
    Value run(StepWeight&& weight_of, Add&& add, One&& one, IsZero&& is_zero,
              Value zero) const {
        const long long ymin = y0 - S, ymax = y0 + S;
        const long long yspan = ymax - ymin + 1;
        auto idx = [&](long long x, long long y, int last, int flag) {
            return (((x * yspan) + (y - ymin)) * 4 + last) * 2 + flag;
        };
        std::vector<Value> cur(static_cast<std::size_t>((L + 1) * yspan * 4 * 2), zero);
        std::vector<Value> nxt(cur.size(), zero);
        cur[static_cast<std::size_t>(idx(0, y0, kNone, on_interface(y0) ? 1 : 0))] = one();
        for (long long step = 1; step <= S; ++step) {
            std::fill(nxt.begin(), nxt.end(), zero);
            for (long long x = 0; x <= std::min<long long>(L, step - 1); ++x)
                for (long long y = y0 - (step - 1); y <= y0 + (step - 1); ++y)
                    for (int last = 0; last < 4; ++last)
                        for (int flag = 0; flag < 2; ++flag) {
                            const Value& c = cur[static_cast<std::size_t>(idx(x, y, last, flag))];
                            if (is_zero(c)) continue;
                            // only states that can still reach (L,y1) stay live
                            auto relax = [&](long long x2, long long y2, int dir) {
                                if ((L - x2) + std::llabs(y2 - y1) > S - step) return;
                                int f2 = flag || (on_interface(y2) ? 1 : 0);
                                auto& slot =
                                    nxt[static_cast<std::size_t>(idx(x2, y2, dir, f2))];
                                add(slot, c, weight_of(step, Bond{{x, y}, {x2, y2}}));
                            };
                            if (x + 1 <= L) relax(x + 1, y, 0);
                            if (!reversal(last, 1)) relax(x, y + 1, 1);
                            if (!reversal(last, 2)) relax(x, y - 1, 2);
                        }
            cur.swap(nxt);
        }
        Value total = zero;
        for (int last = 0; last < 4; ++last)
            for (int flag = 0; flag < 2; ++flag) {
                if (need_flag && flag != want_flag) continue;
                const Value& v = cur[static_cast<std::size_t>(idx(L, y1, last, flag))];
                if (!is_zero(v)) add(total, v, {});
            }
        return total;
    }
};

ColumnDp make_column_dp(const ColumnType& th, double u, int L, const Budget& budget) {
    th.validate();
    ColumnGeometry g = geometry(th);
    long long y0 = round_to_int(th.b0 * L, "b0*L");
    long long y1 = round_to_int((th.dpi + th.b1) * L, "(dpi+b1)*L");
    long long S = round_to_int(u * L, "u*L");
    if (S > budget.max_steps) throw BudgetExceeded("uL above enumeration budget");
    double slack = (u - g.t) * L;
    long long slack_i = std::llround(slack);
    if (slack_i < 0 || std::abs(slack - slack_i) > 1e-6 || (slack_i % 2) != 0)
        throw DomainError("u not in t_Theta + 2N/L");
    ColumnDp dp;
    dp.th = &th;
    dp.L = L;
    dp.S = S;
    dp.y0 = y0;
    dp.y1 = y1;
    for (int n : g.interfaces) dp.iface_heights.push_back(static_cast<long long>(n) * L);
    dp.need_flag = (g.cls != ColumnClass::Int);
    dp.want_flag = (th.x == 2) ? 1 : 0;
    return dp;
}

}  // namespace

BigInt count_column_paths(const ColumnType& th, double u, int L, const Budget& budget) {
    ColumnDp dp = make_column_dp(th, u, L, budget);
    return dp.run(
        [](long long, const Bond&) { return nullptr; },
        [](BigInt& slot, const BigInt& c, std::nullptr_t) { slot += c; },
        []() { return BigInt(1); }, [](const BigInt& v) { return v == 0; }, BigInt(0));
}

double column_log_partition(const ColumnType& th, double u, int L,
                            const std::vector<Label>& omega, const ModelParams& params,
                            const Budget& budget) {
    ColumnDp dp = make_column_dp(th, u, L, budget);
    if (omega.size() < static_cast<std::size_t>(dp.S))
        throw DisorderTooShort("omega shorter than uL");
    double logZ = dp.run(
        [&](long long step, const Bond& bond) -> double {
            Label lbl = bond_label_rows(bond, L, [&](long long row) { return th.chi_at(row); });
            if (lbl != Label::B) return 0.0;
            return omega[static_cast<std::size_t>(step - 1)] == Label::B ? params.beta
                                                                         : -params.alpha;
        },
        [](double& slot, double c, double w) { slot = logaddexp(slot, c + w); },
        []() { return 0.0; }, [](double v) { return v == kNegInf; }, kNegInf);
    return logZ;
}

MCStat column_free_energy_finite(const ColumnType& th, double u, int L, int omega_samples,
                                 std::uint64_t seed, const ModelParams& params,
                                 const Budget& budget) {
    if (omega_samples < 1) throw DomainError("need at least one sample");
    BigInt n_paths = count_column_paths(th, u, L, budget);
    if (n_paths == 0) throw EmptyPathSet("W_{Theta,u,L} is empty");
    const long long S = round_to_int(u * L, "u*L");
    std::vector<double> vals(static_cast<std::size_t>(omega_samples));
    for (int s = 0; s < omega_samples; ++s) {
        std::vector<Label> omega(static_cast<std::size_t>(S));
        for (long long i = 0; i < S; ++i)
            omega[static_cast<std::size_t>(i)] =
                (hash3(seed, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(i)) & 1ULL)
                    ? Label::B
                    : Label::A;
        vals[static_cast<std::size_t>(s)] =
            column_log_partition(th, u, L, omega, params, budget) / static_cast<double>(S);
    }
    MCStat st;
    st.samples = omega_samples;
    double sum = std::accumulate(vals.begin(), vals.end(), 0.0);
    st.mean = sum / omega_samples;
    if (omega_samples > 1) {
        double ss = 0.0;
        for (double v : vals) ss += (v - st.mean) * (v - st.mean);
        st.stderr_ = std::sqrt(ss / (omega_samples - 1) / omega_samples);
    }
    return st;
}

} // namespace copol::oracle
