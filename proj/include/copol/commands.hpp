#ifndef COPOL_COMMANDS_HPP
#define COPOL_COMMANDS_HPP

#include <string>
#include <vector>

#include "copol/runconfig.hpp"

namespace copol {

// Library-level command implementations (the CLI and the tests call these).
// Every command writes its artifacts plus a manifest.json with the effective
// configuration, seeds, tolerances and file checksums; exit code 0 means no
// ERROR-class diagnostic was emitted.

struct CommandResult {
    int exit_code = 0;
    std::vector<std::string> files;
    std::vector<std::string> errors;
    std::string summary;
};

CommandResult cmd_entropy(const RunConfig& cfg);
CommandResult cmd_interface(const RunConfig& cfg);
CommandResult cmd_free_energy(const RunConfig& cfg);
CommandResult cmd_phase_diagram(const RunConfig& cfg);
CommandResult cmd_oracle_check(const RunConfig& cfg);

// recompute the checksums recorded in <dir>/manifest.json
bool verify_manifest(const std::string& dir, std::string* detail = nullptr);

} // namespace copol

#endif
