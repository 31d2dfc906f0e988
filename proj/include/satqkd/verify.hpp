#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace satqkd {

struct VerifyOptions {
    std::uint64_t seed = 1;
    /// Self-test hook: corrupts the rotation-gate construction used by the
    /// unitarity and composition checks, which must then fail.
    bool inject_rotation_fault = false;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs every module's invariant checks at desk scale. Deterministic for a
/// given options.seed.
std::vector<CheckResult> run_verify_suite(const VerifyOptions& options);

} // namespace satqkd
