// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "prgc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return prgc::cli_main(argc, argv, std::cout, std::cerr); }
