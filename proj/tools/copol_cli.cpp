// copol: variational free-energy engine for a copolymer in an emulsion field.
// Subcommands build tables, evaluate the variational formulas and scan the
// phase diagram; every run writes a manifest sufficient to reproduce it.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "copol/commands.hpp"
#include "copol/lattice.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    long long seed = -1;
    std::string out_dir;
    int threads = -1;
    long long budget = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "configuration file (key = value lines)");
    cmd->add_option("--seed", opts.seed, "master seed override");
    cmd->add_option("--out", opts.out_dir, "output directory override");
    cmd->add_option("--threads", opts.threads, "worker thread count override");
    cmd->add_option("--budget", opts.budget, "enumeration budget override (uL cap)");
}

copol::RunConfig resolve(const CommonOpts& opts) {
    copol::RunConfig cfg;
    if (!opts.config_path.empty()) cfg = copol::RunConfig::from_file(opts.config_path);
    // environment default for threads; explicit flags win
    if (const char* env = std::getenv("COPOL_THREADS")) {
        if (cfg.threads == 0) cfg.threads = std::atoi(env);
    }
    if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (opts.threads >= 0) cfg.threads = opts.threads;
    if (opts.budget >= 0) cfg.budget = opts.budget;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"copol: copolymer-in-emulsion variational free-energy engine"};
    app.require_subcommand(1);

    CommonOpts o_entropy, o_iface, o_free, o_phase, o_oracle;
    CLI::App* c_entropy =
        app.add_subcommand("entropy", "path-entropy tables and counter cross-checks");
    add_common(c_entropy, o_entropy);
    CLI::App* c_iface =
        app.add_subcommand("interface", "quenched single-interface table and envelope");
    add_common(c_iface, o_iface);
    CLI::App* c_free =
        app.add_subcommand("free-energy", "family free energies via the slope formula");
    add_common(c_free, o_free);
    CLI::App* c_phase =
        app.add_subcommand("phase-diagram", "phase scan and critical curves");
    add_common(c_phase, o_phase);
    CLI::App* c_oracle =
        app.add_subcommand("oracle-check", "cross-module oracle comparisons");
    add_common(c_oracle, o_oracle);

    CLI11_PARSE(app, argc, argv);

    try {
        copol::CommandResult res;
        if (c_entropy->parsed()) res = copol::cmd_entropy(resolve(o_entropy));
        if (c_iface->parsed()) res = copol::cmd_interface(resolve(o_iface));
        if (c_free->parsed()) res = copol::cmd_free_energy(resolve(o_free));
        if (c_phase->parsed()) res = copol::cmd_phase_diagram(resolve(o_phase));
        if (c_oracle->parsed()) res = copol::cmd_oracle_check(resolve(o_oracle));
        if (!res.summary.empty()) std::cout << res.summary << "\n";
        for (const std::string& e : res.errors) std::cerr << "ERROR: " << e << "\n";
        return res.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "ERROR: " << e.what() << "\n";
        return 2;
    }
}
