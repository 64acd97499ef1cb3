#pragma once

#include <string>

namespace dwsync {

// Runs the command-line tool. Returns the process exit code:
// 0 success, 1 configuration/usage error, 2 numerical failure or failed checks.
int run_cli(int argc, const char* const* argv);

// FNV-1a 64-bit digest as a fixed-width hex string. Used for config digests
// in run manifests; exposed for tests.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace dwsync
