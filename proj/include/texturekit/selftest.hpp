#pragma once

#include <string>
#include <vector>

namespace texturekit {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Invariant sweep over every module on small seeded inputs. Takes well
/// under a second.
std::vector<CheckResult> run_selftest();

} // namespace texturekit
