#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "mixfront/config.hpp"

namespace mixfront {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_runtime = 2, exit_verification = 3 };

/// Flag overrides applied on top of the loaded config.
struct Overrides {
    std::optional<std::string> out;
    std::optional<double> horizon;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
};

void apply_overrides(RunConfig& config, const Overrides& overrides);

/// Each command writes into config.output.dir and returns an exit code.
/// Exceptions propagate; `run_command` maps them to codes.
int cmd_simulate(const RunConfig& config, std::ostream& log);
int cmd_eigen(const RunConfig& config, std::ostream& log);
int cmd_predict(const RunConfig& config, bool confirm, std::ostream& log);
int cmd_sweep(const RunConfig& config, std::size_t jobs, std::ostream& log);
int cmd_verify(const RunConfig& config, std::size_t jobs, std::ostream& log);

/// Loads the config, applies overrides and dispatches by name. ConfigError
/// maps to 1, any other failure to 2; messages go to `err`.
int run_command(const std::string& name, const std::string& config_path,
                const Overrides& overrides, bool confirm, std::ostream& log, std::ostream& err);

}  // namespace mixfront
