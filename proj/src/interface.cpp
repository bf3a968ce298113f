#include "copol/interface.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "json.hpp"
#include "copol/rng.hpp"

namespace copol {

namespace {

long long snap_steps(int L, double mu, const char* what) {
    double s = mu * L;
    long long r = std::llround(s);
    if (std::abs(s - r) > 1e-9) throw DomainError(std::string(what) + ": mu*L not integral");
    return r;
}

}  // namespace

double interface_log_partition(int L, double mu, const std::vector<Label>& omega,
                               double alpha, double beta) {
    const long long S = snap_steps(L, mu, "interface_log_partition");
    if (S < L || ((S - L) % 2) != 0) throw DomainError("mu must lie in 1 + 2N/L");
    if (omega.size() < static_cast<std::size_t>(S))
        throw DisorderTooShort("omega shorter than mu*L");

    // forward DP over (x, y, last) with linear-space values and a running
    // exponent offset; weights multiply per step
    const double wB = std::exp(beta), wA = std::exp(-alpha);
    const long long yr = (S - L) / 2 + 1;  // paths must return to 0
    const long long yspan = 2 * yr + 1;
    const std::size_t sz = static_cast<std::size_t>((L + 1) * yspan * 4);
    std::vector<double> cur(sz, 0.0), nxt(sz, 0.0);
    auto idx = [&](long long x, long long y, int last) {
        return static_cast<std::size_t>(((x * yspan) + (y + yr)) * 4 + last);
    };
    cur[idx(0, 0, 3)] = 1.0;
    double offset = 0.0;

    for (long long step = 1; step <= S; ++step) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        const Label wl = omega[static_cast<std::size_t>(step - 1)];
        const double below = (wl == Label::B) ? wB : wA;
        const long long reach = std::min<long long>(step - 1, S - (step - 1));
        for (long long x = 0; x <= std::min<long long>(L, step - 1); ++x)
            for (long long y = std::max(-yr, -reach); y <= std::min(yr, reach); ++y)
                for (int last = 0; last < 4; ++last) {
                    const double c = cur[idx(x, y, last)];
                    if (c == 0.0) continue;
                    // East at height y: charged iff y < 0
                    if (x + 1 <= L) nxt[idx(x + 1, y, 0)] += (y < 0 ? below : 1.0) * c;
                    // North bond (y,y+1): charged iff y+1 <= 0
                    if (last != 2 && y + 1 <= yr)
                        nxt[idx(x, y + 1, 1)] += (y + 1 <= 0 ? below : 1.0) * c;
                    // South bond (y-1,y): charged iff y <= 0
                    if (last != 1 && y - 1 >= -yr)
                        nxt[idx(x, y - 1, 2)] += (y <= 0 ? below : 1.0) * c;
                }
        cur.swap(nxt);
        double mx = *std::max_element(cur.begin(), cur.end());
        if (mx > 0.0 && (mx > 1e250 || mx < 1e-250)) {
            const double inv = 1.0 / mx;
            for (double& v : cur) v *= inv;
            offset += std::log(mx);
        }
    }

    double total = 0.0;
    for (int last = 0; last < 4; ++last) total += cur[idx(L, 0, last)];
    if (total <= 0.0) throw EmptyPathSet("no interface path (parity?)");
    return std::log(total) + offset;
}

PhiFiniteStat phi_finite(int L, double mu, int samples, std::uint64_t seed, double alpha,
                         double beta) {
    if (samples < 2) throw DomainError("phi_finite: samples >= 2");
    const long long S = snap_steps(L, mu, "phi_finite");
    std::vector<double> vals(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        std::vector<Label> omega(static_cast<std::size_t>(S));
        for (long long i = 0; i < S; ++i)
            omega[static_cast<std::size_t>(i)] =
                (hash3(seed, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(i)) &
                 1ULL)
                    ? Label::B
                    : Label::A;
        vals[static_cast<std::size_t>(s)] =
            interface_log_partition(L, mu, omega, alpha, beta) / static_cast<double>(S);
    }
    PhiFiniteStat st;
    st.L = L;
    st.mu = mu;
    st.samples = samples;
    st.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / samples;
    double ss = 0.0;
    for (double v : vals) ss += (v - st.mean) * (v - st.mean);
    st.stderr_ = std::sqrt(ss / (samples - 1) / samples);
    return st;
}

namespace {

double snap_mu(double mu, int L) {
    long long k = std::llround((mu - 1.0) * L / 2.0);
    if (k < 0) k = 0;
    return 1.0 + 2.0 * static_cast<double>(k) / L;
}

}  // namespace

PhiEstimate phi_extrapolated(double mu, const InterfaceConfig& cfg, double alpha, double beta,
                             const EntropyEvaluator& ent) {
    PhiEstimate out;
    if (mu <= 1.0) {
        out.mu_snapped = 1.0;
        return out;  // phi(1) = 0 exactly
    }
    std::vector<double> means;
    double stat_err = 0.0;
    double mu_used = mu;
    for (std::size_t i = 0; i < cfg.ladder.size(); ++i) {
        int L = cfg.ladder[i];
        double mus = snap_mu(mu, L);
        if (mus <= 1.0) mus = 1.0 + 2.0 / L;
        PhiFiniteStat st = phi_finite(L, mus, cfg.samples, hash2(cfg.seed, 7700 + i), alpha, beta);
        means.push_back(st.mean);
        stat_err = st.stderr_;
        mu_used = mus;
    }
    out.mu_snapped = mu_used;
    out.raw = means.back();
    double spread = means.size() >= 2 ? std::abs(means.back() - means[means.size() - 2]) : 0.0;
    out.err = stat_err + spread;
    double floor = ent.kappa(mu_used, 0.0);
    out.floored = out.raw < floor;
    out.value = out.floored ? floor : out.raw;
    return out;
}

InterfaceTable InterfaceTable::build(const InterfaceConfig& cfg, double alpha, double beta,
                                     const EntropyEvaluator& ent) {
    InterfaceTable t;
    t.alpha = alpha;
    t.beta = beta;
    t.cfg = cfg;
    const int n = static_cast<int>(std::llround((cfg.mu_max - 1.0) / cfg.mu_step)) + 1;
    t.grid.assign(static_cast<std::size_t>(n), 0.0);
    t.estimate.assign(t.grid.size(), 0.0);
    t.raw_mean.assign(t.grid.size(), 0.0);
    t.err.assign(t.grid.size(), 0.0);
    t.ladder_L.assign(t.grid.size(), 0);
    t.floor_hit.assign(t.grid.size(), false);

    unsigned hw = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                  : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n) return;
            double mu = (i + 1 == n) ? cfg.mu_max : 1.0 + i * cfg.mu_step;
            InterfaceConfig local = cfg;
            local.seed = hash2(cfg.seed, static_cast<std::uint64_t>(i));
            PhiEstimate e = phi_extrapolated(mu, local, alpha, beta, ent);
            t.grid[static_cast<std::size_t>(i)] = mu;
            t.estimate[static_cast<std::size_t>(i)] = (i == 0) ? 0.0 : e.value;
            t.raw_mean[static_cast<std::size_t>(i)] = (i == 0) ? 0.0 : e.raw;
            t.err[static_cast<std::size_t>(i)] = (i == 0) ? 0.0 : e.err;
            t.ladder_L[static_cast<std::size_t>(i)] = cfg.ladder.back();
            t.floor_hit[static_cast<std::size_t>(i)] = e.floored;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < hw; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    t.refit();
    return t;
}

InterfaceTable InterfaceTable::entropy_reference(const InterfaceConfig& cfg,
                                                 const EntropyEvaluator& ent) {
    InterfaceTable t;
    t.alpha = 0.0;
    t.beta = 0.0;
    t.cfg = cfg;
    t.entropy_only = true;
    const int n = static_cast<int>(std::llround((cfg.mu_max - 1.0) / cfg.mu_step)) + 1;
    for (int i = 0; i < n; ++i) {
        double mu = (i + 1 == n) ? cfg.mu_max : 1.0 + i * cfg.mu_step;
        t.grid.push_back(mu);
        t.estimate.push_back(i == 0 ? 0.0 : ent.kappa(mu, 0.0));
        t.raw_mean.push_back(t.estimate.back());
        t.err.push_back(0.0);
        t.ladder_L.push_back(0);
        t.floor_hit.push_back(false);
    }
    t.refit();
    return t;
}

void InterfaceTable::refit() {
    std::vector<double> ys(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) ys[i] = grid[i] * estimate[i];
    hull_ = ConcaveHull::fit(grid, ys);
}

SpeedQuery InterfaceTable::v_I_of_c(double c) const {
    if (grid.empty()) throw TableMissing("interface table not built");
    if (!(c > 0.0)) throw DomainError("v_I_of_c: c must be positive");
    auto r = hull_.argmax_shifted(c);
    return SpeedQuery{r.x, r.saturated};
}

std::string InterfaceTable::to_json() const {
    nlohmann::json j;
    j["format"] = "copol-interface-table";
    j["version"] = 1;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["entropy_only"] = entropy_only;
    j["config"] = {{"mu_max", cfg.mu_max},
                   {"mu_step", cfg.mu_step},
                   {"ladder", cfg.ladder},
                   {"samples", cfg.samples},
                   {"seed", cfg.seed}};
    j["grid"] = grid;
    j["estimate"] = estimate;
    j["raw_mean"] = raw_mean;
    j["err"] = err;
    j["ladder_L"] = ladder_L;
    std::vector<int> fh(floor_hit.begin(), floor_hit.end());
    j["floor_hit"] = fh;
    return j.dump(2);
}

InterfaceTable InterfaceTable::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format") != "copol-interface-table")
        throw DomainError("not an interface table document");
    InterfaceTable t;
    t.alpha = j.at("alpha");
    t.beta = j.at("beta");
    t.entropy_only = j.value("entropy_only", false);
    t.cfg.mu_max = j.at("config").at("mu_max");
    t.cfg.mu_step = j.at("config").at("mu_step");
    t.cfg.ladder = j.at("config").at("ladder").get<std::vector<int>>();
    t.cfg.samples = j.at("config").at("samples");
    t.cfg.seed = j.at("config").at("seed");
    t.grid = j.at("grid").get<std::vector<double>>();
    t.estimate = j.at("estimate").get<std::vector<double>>();
    t.raw_mean = j.at("raw_mean").get<std::vector<double>>();
    t.err = j.at("err").get<std::vector<double>>();
    t.ladder_L = j.at("ladder_L").get<std::vector<int>>();
    auto fh = j.at("floor_hit").get<std::vector<int>>();
    t.floor_hit.assign(fh.begin(), fh.end());
    t.refit();
    return t;
}

} // namespace copol
