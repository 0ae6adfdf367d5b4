#pragma once

#include "nlfem/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nlfem {

enum ExitCode : int { ExitOk = 0, ExitConfig = 2, ExitNumerical = 3 };

const std::vector<std::string>& command_names();

/// Executes one command. Writes CSV/text artifacts named `<out_prefix>_*`, one summary line
/// per sweep point to `log`, and diagnostics to `err`. Returns an ExitCode.
int run(const std::string& command, const Config& cfg, const std::string& out_prefix, std::ostream& log,
        std::ostream& err);

}  // namespace nlfem
