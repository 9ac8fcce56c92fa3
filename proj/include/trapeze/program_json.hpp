#pragma once

#include <set>
#include <string>

#include "json.hpp"
#include "trapeze/lattice.hpp"
#include "trapeze/thread_lang.hpp"

namespace trapeze {

/// Names a program may reference. Labels resolve against `lattice`; channel
/// and declassifier names must appear in the respective sets.
struct ProgramContext {
  const Lattice& lattice;
  std::set<std::string> channels;
  std::set<std::string> declassifiers;
};

/// Parses a statement list such as
/// `[{"op":"read","key":{"var":"i"},"bind":"x"}, {"op":"send","channel":"eve","value":{"var":"x"}}]`.
///
/// Expressions are `{"lit": scalar}`, `{"var": name}`,
/// `{"bin": op, "lhs": e, "rhs": e}` and `{"is_absent": e}`.
/// An empty top-level list parses to `[stop]`. Throws ParseError naming the
/// path of the offending node.
BlockRef parse_program(const nlohmann::json& doc, const ProgramContext& ctx, const std::string& path = "$");

ExprRef parse_expr(const nlohmann::json& doc, const std::string& path);

nlohmann::json program_to_json(const Block& block, const Lattice& lattice);
nlohmann::json expr_to_json(const Expr& e);

/// JSON scalar <-> Value. Integers, booleans and strings only.
Value value_from_json(const nlohmann::json& doc, const std::string& path);
nlohmann::json value_to_json(const Value& v);

}  // namespace trapeze
