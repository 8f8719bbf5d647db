// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef DYNAHULL_LOG_HPP_
#define DYNAHULL_LOG_HPP_

#include <functional>
#include <string_view>

namespace dynahull {

using WarningHandler = std::function<void(std::string_view)>;

// Non-fatal diagnostics (skipped PCD fields, missing ground plane, ...) go
// through this hook. The default handler writes to stderr.
// Returns the handler that was installed before.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace dynahull

#endif  // DYNAHULL_LOG_HPP_
