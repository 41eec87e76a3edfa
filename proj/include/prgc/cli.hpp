// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_CLI_HPP
#define PRGC_CLI_HPP

#include <iosfwd>

namespace prgc {

/// Command-line surface. Subcommands: validate, traces, semantics, refine,
/// simulate, quintuple, bound, sieve. Exit status: 0 for valid/true, 1 for
/// invalid/false, 2 for errors. `--query NAME` is an alias for the
/// subcommand and PRG_CAP overrides the default enumeration cap.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace prgc

#endif
