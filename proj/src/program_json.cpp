#include "trapeze/program_json.hpp"

#include <initializer_list>

#include "trapeze/errors.hpp"

namespace trapeze {

using nlohmann::json;

namespace {

void expect_object(const json& doc, const std::string& path) {
  if (!doc.is_object()) throw ParseError(path, "expected an object");
}

void expect_fields(const json& doc, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : doc.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError(path, "unexpected field '" + key + "'");
  }
}

const json& field(const json& doc, const std::string& path, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) throw ParseError(path, std::string("missing field '") + name + "'");
  return *it;
}

std::string string_field(const json& doc, const std::string& path, const char* name) {
  const json& f = field(doc, path, name);
  if (!f.is_string() || f.get<std::string>().empty()) {
    throw ParseError(path + "." + name, "expected a non-empty string");
  }
  return f.get<std::string>();
}

BlockRef parse_block(const json& doc, const ProgramContext& ctx, const std::string& path);

Stmt parse_stmt(const json& doc, const ProgramContext& ctx, const std::string& path) {
  expect_object(doc, path);
  const std::string kind = string_field(doc, path, "op");

  if (kind == "let") {
    expect_fields(doc, path, {"op", "var", "value"});
    return stmt::Let{string_field(doc, path, "var"), parse_expr(field(doc, path, "value"), path + ".value")};
  }
  if (kind == "read") {
    expect_fields(doc, path, {"op", "key", "bind"});
    return stmt::Read{parse_expr(field(doc, path, "key"), path + ".key"), string_field(doc, path, "bind")};
  }
  if (kind == "write") {
    expect_fields(doc, path, {"op", "key", "value"});
    return stmt::Write{parse_expr(field(doc, path, "key"), path + ".key"),
                       parse_expr(field(doc, path, "value"), path + ".value")};
  }
  if (kind == "send") {
    expect_fields(doc, path, {"op", "channel", "value"});
    std::string channel = string_field(doc, path, "channel");
    if (!ctx.channels.contains(channel)) throw ParseError(path + ".channel", "unknown channel '" + channel + "'");
    return stmt::Send{std::move(channel), parse_expr(field(doc, path, "value"), path + ".value")};
  }
  if (kind == "fork") {
    expect_fields(doc, path, {"op", "body"});
    return stmt::Fork{parse_block(field(doc, path, "body"), ctx, path + ".body")};
  }
  if (kind == "raise_label") {
    expect_fields(doc, path, {"op", "label"});
    const std::string name = string_field(doc, path, "label");
    auto label = ctx.lattice.find(name);
    if (!label) throw ParseError(path + ".label", "unknown label '" + name + "'");
    return stmt::RaiseLabel{*label};
  }
  if (kind == "if") {
    expect_fields(doc, path, {"op", "cond", "then", "else"});
    BlockRef else_block = doc.contains("else") ? parse_block(doc.at("else"), ctx, path + ".else") : make_block({});
    return stmt::If{parse_expr(field(doc, path, "cond"), path + ".cond"),
                    parse_block(field(doc, path, "then"), ctx, path + ".then"), std::move(else_block)};
  }
  if (kind == "for") {
    expect_fields(doc, path, {"op", "var", "from", "to", "body"});
    return stmt::For{string_field(doc, path, "var"), parse_expr(field(doc, path, "from"), path + ".from"),
                     parse_expr(field(doc, path, "to"), path + ".to"),
                     parse_block(field(doc, path, "body"), ctx, path + ".body")};
  }
  if (kind == "stop") {
    expect_fields(doc, path, {"op"});
    return stmt::Stop{};
  }
  if (kind == "call_declassifier") {
    expect_fields(doc, path, {"op", "name"});
    std::string name = string_field(doc, path, "name");
    if (!ctx.declassifiers.contains(name)) {
      throw ParseError(path + ".name", "unknown declassifier '" + name + "'");
    }
    return stmt::CallDeclassifier{std::move(name)};
  }
  throw ParseError(path + ".op", "unknown statement kind '" + kind + "'");
}

BlockRef parse_block(const json& doc, const ProgramContext& ctx, const std::string& path) {
  if (!doc.is_array()) throw ParseError(path, "expected a statement list");
  std::vector<Stmt> stmts;
  stmts.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    stmts.push_back(parse_stmt(doc[i], ctx, path + "[" + std::to_string(i) + "]"));
  }
  return make_block(std::move(stmts));
}

json block_to_json(const Block& block, const Lattice& lattice);

json stmt_to_json(const Stmt& s, const Lattice& lattice) {
  return std::visit(
      [&](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, stmt::Let>) {
          return {{"op", "let"}, {"var", n.var}, {"value", expr_to_json(*n.value)}};
        } else if constexpr (std::is_same_v<T, stmt::Read>) {
          return {{"op", "read"}, {"key", expr_to_json(*n.key)}, {"bind", n.bind}};
        } else if constexpr (std::is_same_v<T, stmt::Write>) {
          return {{"op", "write"}, {"key", expr_to_json(*n.key)}, {"value", expr_to_json(*n.value)}};
        } else if constexpr (std::is_same_v<T, stmt::Send>) {
          return {{"op", "send"}, {"channel", n.channel}, {"value", expr_to_json(*n.value)}};
        } else if constexpr (std::is_same_v<T, stmt::Fork>) {
          return {{"op", "fork"}, {"body", block_to_json(*n.body, lattice)}};
        } else if constexpr (std::is_same_v<T, stmt::RaiseLabel>) {
          return {{"op", "raise_label"}, {"label", lattice.name(n.target)}};
        } else if constexpr (std::is_same_v<T, stmt::If>) {
          return {{"op", "if"},
                  {"cond", expr_to_json(*n.cond)},
                  {"then", block_to_json(*n.then_block, lattice)},
                  {"else", block_to_json(*n.else_block, lattice)}};
        } else if constexpr (std::is_same_v<T, stmt::For>) {
          return {{"op", "for"},
                  {"var", n.var},
                  {"from", expr_to_json(*n.from)},
                  {"to", expr_to_json(*n.to)},
                  {"body", block_to_json(*n.body, lattice)}};
        } else if constexpr (std::is_same_v<T, stmt::Stop>) {
          return {{"op", "stop"}};
        } else {
          return {{"op", "call_declassifier"}, {"name", n.name}};
        }
      },
      s);
}

json block_to_json(const Block& block, const Lattice& lattice) {
  json out = json::array();
  for (const auto& s : block.statements()) out.push_back(stmt_to_json(s, lattice));
  return out;
}

}  // namespace

Value value_from_json(const json& doc, const std::string& path) {
  if (doc.is_boolean()) return Value(doc.get<bool>());
  if (doc.is_number_integer()) return Value(doc.get<std::int64_t>());
  if (doc.is_string()) return Value(doc.get<std::string>());
  throw ParseError(path, "expected an integer, boolean or string");
}

json value_to_json(const Value& v) {
  if (v.is_int()) return v.as_int();
  if (v.is_bool()) return v.as_bool();
  return v.as_string();
}

ExprRef parse_expr(const json& doc, const std::string& path) {
  expect_object(doc, path);
  if (doc.contains("lit")) {
    expect_fields(doc, path, {"lit"});
    return lit(value_from_json(doc.at("lit"), path + ".lit"));
  }
  if (doc.contains("var")) {
    expect_fields(doc, path, {"var"});
    return var(string_field(doc, path, "var"));
  }
  if (doc.contains("is_absent")) {
    expect_fields(doc, path, {"is_absent"});
    return is_absent(parse_expr(doc.at("is_absent"), path + ".is_absent"));
  }
  if (doc.contains("bin")) {
    expect_fields(doc, path, {"bin", "lhs", "rhs"});
    const std::string name = string_field(doc, path, "bin");
    auto op = binop_from_name(name);
    if (!op) throw ParseError(path + ".bin", "unknown operator '" + name + "'");
    return bin(*op, parse_expr(field(doc, path, "lhs"), path + ".lhs"),
               parse_expr(field(doc, path, "rhs"), path + ".rhs"));
  }
  throw ParseError(path, "expected one of lit, var, bin, is_absent");
}

json expr_to_json(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          return {{"lit", value_to_json(n.value)}};
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          return {{"var", n.name}};
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return {{"bin", binop_name(n.op)}, {"lhs", expr_to_json(*n.lhs)}, {"rhs", expr_to_json(*n.rhs)}};
        } else {
          return {{"is_absent", expr_to_json(*n.operand)}};
        }
      },
      e.node);
}

BlockRef parse_program(const json& doc, const ProgramContext& ctx, const std::string& path) {
  BlockRef block = parse_block(doc, ctx, path);
  if (block->empty()) return make_block({stmt::Stop{}});
  return block;
}

json program_to_json(const Block& block, const Lattice& lattice) { return block_to_json(block, lattice); }

}  // namespace trapeze
