// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "dynahull/log.hpp"

int main(int argc, char** argv) {
  // Several cases provoke warnings on purpose.
  dynahull::set_warning_handler([](std::string_view) {});
  doctest::Context context(argc, argv);
  return context.run();
}
