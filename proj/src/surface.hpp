// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT
#pragma once

// Surface syntax produced by the parser before index expansion.

#include <memory>
#include <string>
#include <vector>

#include "lysa/dsl.hpp"

namespace lysa {

struct SetAtom {
    bool literal = false;
    std::vector<int> values;
    std::string name;
    SourceLocation loc;
};

struct SetExpr {
    std::vector<SetAtom> atoms;
};

struct IndexExpr {
    enum class Kind { literal, var, max, min };
    Kind kind = Kind::literal;
    int value = 0;
    std::string name;
    SetExpr set;
    SourceLocation loc;
};

struct SIdent {
    std::string base;
    std::vector<IndexExpr> indices;
    bool attacker = false;
    SourceLocation loc;
};

struct SPointSet {
    bool all = false;
    std::vector<SIdent> points;
    SourceLocation loc;
};

struct STerm {
    bool enc = false;
    SIdent id;
    std::vector<STerm> payload;
    std::shared_ptr<STerm> key;
    SIdent at;
    SPointSet dest;
    SourceLocation loc;
};

struct SProc;
using SProcPtr = std::shared_ptr<SProc>;

struct SProc {
    enum class Kind { nil, par, repl, restrict, out, in, dec, ipar, inew, guard };
    Kind kind = Kind::nil;
    SourceLocation loc;
    SProcPtr left;
    SProcPtr right;
    // restrict / inew
    SIdent name;
    // out / in / dec
    std::vector<STerm> terms;
    std::vector<SIdent> bind;
    STerm subject;
    STerm key;
    SIdent at;
    SPointSet orig;
    // ipar / inew
    std::string index;
    SetExpr range;
    // guard: left runs when lhs == rhs, otherwise right
    IndexExpr lhs;
    IndexExpr rhs;
};

struct SetDecl {
    std::string name;
    bool rounds = false;
    SetExpr value;
    SourceLocation loc;
};

struct Template {
    std::vector<SetDecl> sets;
    SProcPtr body;
};

} // namespace lysa
