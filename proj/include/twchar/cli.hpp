#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace twchar {

// Exit codes of the command line front end.
enum ExitCode : int { kExitOk = 0, kExitMismatch = 1, kExitUsage = 2 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Largest n_max the enumerating commands accept at p.
int desk_budget(std::uint32_t p);

}  // namespace twchar
