#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fingap/gapset.hpp"

namespace fingap {

struct CheckResult {
    std::string check;
    bool pass = false;
    double maxResidual = 0.0;
    double budget = 0.0;
};

// Runs the per-module invariant checks on one gap set.  Checks that need a
// calibrated covering map are skipped when the gap count exceeds maxEll.
std::vector<CheckResult> runVerifySuite(const GapSet& set, std::uint64_t seed = 0,
                                        int maxWordLen = 16, int maxEll = 2);

}  // namespace fingap
