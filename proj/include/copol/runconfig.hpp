#ifndef COPOL_RUNCONFIG_HPP
#define COPOL_RUNCONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace copol {

// Flat, typed key=value run configuration. Unknown keys are rejected;
// precedence is CLI override > file > defaults. The full effective
// configuration is echoed into every manifest.
struct RunConfig {
    // model
    double alpha = 2.0;
    double beta = 1.0;
    double p = 0.5;
    int M = 2;
    int m = 4;

    // engine
    std::uint64_t seed = 20240601;
    int threads = 0;  // 0 = hardware
    long long budget = 24;
    std::string out_dir = "out";

    // entropy tables
    std::vector<int> entropy_ladder = {8, 16, 32, 64};
    double entropy_u_max = 6.0;
    double entropy_u_step = 0.25;
    std::vector<double> entropy_l_values = {0.0, 0.5, 1.0, 2.0};

    // interface table
    double iface_mu_max = 8.0;
    double iface_mu_step = 0.1;
    std::vector<int> iface_ladder = {8, 16, 32};
    int iface_samples = 200;

    // family
    int family_strategies = 12;
    int family_columns = 10000;

    // phase scan
    double scan_alpha_min = 0.0, scan_alpha_max = 5.0;
    double scan_beta_min = -2.5, scan_beta_max = 2.5;
    int scan_alpha_steps = 21, scan_beta_steps = 21;
    double scan_margin = 1e-3;
    int scan_iface_samples = 48;
    double scan_iface_mu_step = 0.25;
    std::vector<int> scan_iface_ladder = {8, 16};
    std::vector<double> critical_alphas = {1.0, 2.0, 3.0};

    // tolerances
    double dinkelbach_tol = 1e-9;

    static RunConfig from_file(const std::string& path);
    static RunConfig from_text(const std::string& text);
    void apply_override(const std::string& key, const std::string& value);

    // every key with its current value, for manifests
    std::map<std::string, std::string> echo() const;
};

} // namespace copol

#endif
