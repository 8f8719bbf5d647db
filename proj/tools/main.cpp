// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return dynahull::cli::run(argc, argv, std::cout, std::cerr);
}
