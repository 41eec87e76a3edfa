// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_DSL_HPP
#define PRGC_DSL_HPP

#include "prgc/event_structure.hpp"

#include <map>
#include <string>
#include <vector>

namespace prgc {

/// Abstract syntax of the little concurrent probabilistic language.
/// Operator precedence, tightest first: ";" then "+" / "[p]" then "||".
struct SourcePos {
    int line = 1;
    int col = 1;
};

struct Term {
    enum class Kind { Atom, Skip, Abort, Seq, Choice, PChoice, Par, If, Star };
    Kind kind = Kind::Skip;
    SourcePos pos;
    std::string name;          // Atom: atom name; If: guard name
    Rat prob;                  // PChoice: probability of the second operand
    int depth = 0;             // Star: unfolding depth
    std::vector<Term> children;

    bool operator==(const Term& o) const;
};

/// Named halfspace postcondition over declared state sets: P(SET) >= r or == r.
struct PostSpec {
    struct Item {
        std::string set_name;
        bool equality = false;
        Rat rhs;
    };
    std::vector<Item> items;
};

struct Declarations {
    StateSpacePtr space;
    std::map<std::string, ConvexProgram> atoms;
    std::map<std::string, std::vector<bool>> guards;
    std::map<std::string, std::vector<bool>> sets;
    std::map<std::string, PostSpec> posts;
    std::map<std::string, Term> programs;
};

struct ParsedFile {
    Declarations decls;
};

/// Parses a whole declaration file:
///   states s0 s1;
///   atom a { s0 -> { s1: 1 }; s1 -> { s1: 1 }; }
///   guard b { s0 }
///   set O { s1 }
///   post Q { P(O) >= 3/4; }
///   program main = a ; (skip + a);
ParsedFile parse_file(const std::string& text);

/// Parses a single term (used by tests and the round-trip property).
Term parse_term(const std::string& text);

std::string pretty(const Term& t);

/// Structural translation into an event structure; probabilistic choice is
/// only allowed over atomic operands (it denotes one atomic event), if/else
/// elaborates to the guarded sum with an exhaustive test pair.
IpBes elaborate(const Term& t, const Declarations& d);

/// The (state-independent) halfspace program denoted by a post declaration.
ConvexProgram post_to_program(const PostSpec& spec, const Declarations& d);

} // namespace prgc

#endif
