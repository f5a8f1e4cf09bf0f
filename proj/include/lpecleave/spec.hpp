// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// The textual specification format:
//
//   sort Mode = struct on | off;
//   act count; act send : Nat # Bool;
//   proc P(n: Nat, s: Bool) = sum e: Bool . n > 0 -> count . P(n - 1, s) + ...;
//   init P(0, false);
//   comp Sys = hide({c}, allow({c, d}, comm({a|b -> c}, P(0, false) || Q(true))));
//
// `%` starts a comment that runs to the end of the line.

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lpecleave/compose.hpp"
#include "lpecleave/lpe.hpp"

namespace lpecleave {

struct SpecFile {
    std::vector<Sort> sorts;
    ActionTable actions;
    std::vector<std::shared_ptr<const Lpe>> procs;
    ProcessInstance init;
    std::vector<std::pair<std::string, CompositionExpr>> compositions;

    std::shared_ptr<const Lpe> find_proc(std::string_view name) const;
    const CompositionExpr* find_composition(std::string_view name) const;
};

/// Throws ParseError, NameResolutionError or SpecSortError with the location
/// of the offending token.
SpecFile parse_spec(std::string_view text);
/// Reads and parses a file; a missing file is reported as Error.
SpecFile load_spec(const std::filesystem::path& path);

/// Parses an expression over the parameters of `p`, resolving constructor
/// names against the sorts of `spec`.
Expr parse_expr(std::string_view text, const SpecFile& spec, const Lpe& p);

/// Prints `p` in the specification syntax, preceded by the sort and action
/// declarations it uses. `init` is appended when given.
std::string print_lpe(const Lpe& p, const std::vector<Value>* init = nullptr);

} // namespace lpecleave
