// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsegm/cli.hpp"

int main(int argc, char** argv) { return rsegm::run_cli(argc, argv); }
