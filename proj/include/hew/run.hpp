#ifndef HEW_RUN_HPP
#define HEW_RUN_HPP

#include <string>

#include "hew/config.hpp"

namespace hew {

inline constexpr const char* kToolVersion = "hewave 1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitIo = 4;

// Executes one subcommand (dispersion, double-points, branch, sheet, check,
// profile) and writes its artifacts under cfg.out_dir. Returns an exit code;
// solver failures leave partial outputs plus a failure manifest behind.
int run(const std::string& command, const RunConfig& cfg);

}  // namespace hew

#endif
