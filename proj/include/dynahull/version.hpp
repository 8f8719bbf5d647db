// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef DYNAHULL_VERSION_HPP_
#define DYNAHULL_VERSION_HPP_

#include <string_view>

namespace dynahull {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace dynahull

#endif  // DYNAHULL_VERSION_HPP_
