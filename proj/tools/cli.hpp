// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Exit codes:
//   0 success
//   2 configuration or usage error
//   3 I/O error (unreadable or malformed input, unwritable output)
//   4 pipeline error (too few points, etc.)
//   5 confusion metrics requested but no labels available

#ifndef DYNAHULL_TOOLS_CLI_HPP_
#define DYNAHULL_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace dynahull::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitPipeline = 4;
inline constexpr int kExitNoLabels = 5;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dynahull::cli

#endif  // DYNAHULL_TOOLS_CLI_HPP_
