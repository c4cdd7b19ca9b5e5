#pragma once

#include <string>
#include <vector>

namespace pcc::cli {

/// Parses `args` (without the program name), runs the subcommand and returns the exit code.
int run_cli(const std::vector<std::string>& args);

/// Keeps large tensor allocations on the heap instead of fresh mappings (glibc only).
void tune_allocator();

}  // namespace pcc::cli
