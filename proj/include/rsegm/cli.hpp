// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rsegm {

// Exit codes of the saddle tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // divergence or failed suite
inline constexpr int kExitUsage = 2;

int run_cli(int argc, char** argv);

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// unbiasedness, lipschitz, lazy, descent, sharpness, counterexample
std::vector<std::string> verify_suite_names();

// bias scales every stochastic estimate (1 = faithful oracle); only the
// unbiasedness and lipschitz suites look at it.
SuiteResult run_verify_suite(const std::string& name, double bias,
                             std::uint64_t seed);

}  // namespace rsegm
