// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace wishtrack {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

// Default output directory when --out is absent.
inline constexpr const char* kOutputEnv = "WISHTRACK_OUT";

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_dispatch(int argc, const char* const* argv);

}  // namespace wishtrack
