#pragma once

#include <string>
#include <vector>

namespace dwsync {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Property suite behind the verify command: one entry per module invariant,
// fixed internal seeds, no configuration. A thrown exception fails the check
// that raised it and the suite keeps going.
std::vector<CheckResult> run_selfchecks(int threads);

}  // namespace dwsync
