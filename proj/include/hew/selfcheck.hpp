#ifndef HEW_SELFCHECK_HPP
#define HEW_SELFCHECK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hew/config.hpp"

namespace hew {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // worst observed value or failure reason
};

// Randomized invariant suites over the spectral, energy, reduction, and
// linear layers. Deterministic for a fixed seed.
std::vector<CheckResult> run_selfcheck(const RunConfig& cfg);

}  // namespace hew

#endif
