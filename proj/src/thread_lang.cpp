#include "trapeze/thread_lang.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

#include "trapeze/hash.hpp"
#include "trapeze/store_io.hpp"

namespace trapeze {

namespace {

constexpr std::array<std::pair<BinOp, const char*>, 11> kBinOpNames{{
    {BinOp::add, "+"},
    {BinOp::sub, "-"},
    {BinOp::mul, "*"},
    {BinOp::eq, "=="},
    {BinOp::ne, "!="},
    {BinOp::lt, "<"},
    {BinOp::le, "<="},
    {BinOp::logical_and, "and"},
    {BinOp::logical_or, "or"},
    {BinOp::concat, "concat"},
    {BinOp::bit, "bit"},
}};

void render_expr(std::ostream& os, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          os << encode_value(n.value);
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          os << '$' << n.name;
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          os << '(' << binop_name(n.op) << ' ';
          render_expr(os, *n.lhs);
          os << ' ';
          render_expr(os, *n.rhs);
          os << ')';
        } else {
          os << "(absent? ";
          render_expr(os, *n.operand);
          os << ')';
        }
      },
      e.node);
}

void render_stmt(std::ostream& os, const Stmt& s) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, stmt::Let>) {
          os << "(let " << n.var << ' ';
          render_expr(os, *n.value);
          os << ')';
        } else if constexpr (std::is_same_v<T, stmt::Read>) {
          os << "(read ";
          render_expr(os, *n.key);
          os << ' ' << n.bind << ')';
        } else if constexpr (std::is_same_v<T, stmt::Write>) {
          os << "(write ";
          render_expr(os, *n.key);
          os << ' ';
          render_expr(os, *n.value);
          os << ')';
        } else if constexpr (std::is_same_v<T, stmt::Send>) {
          os << "(send " << n.channel << ' ';
          render_expr(os, *n.value);
          os << ')';
        } else if constexpr (std::is_same_v<T, stmt::Fork>) {
          os << "(fork " << n.body->canonical() << ')';
        } else if constexpr (std::is_same_v<T, stmt::RaiseLabel>) {
          os << "(raise #" << n.target.id << ')';
        } else if constexpr (std::is_same_v<T, stmt::If>) {
          os << "(if ";
          render_expr(os, *n.cond);
          os << ' ' << n.then_block->canonical() << ' ' << n.else_block->canonical() << ')';
        } else if constexpr (std::is_same_v<T, stmt::For>) {
          os << "(for " << n.var << ' ';
          render_expr(os, *n.from);
          os << ' ';
          render_expr(os, *n.to);
          os << ' ' << n.body->canonical() << ')';
        } else if constexpr (std::is_same_v<T, stmt::Stop>) {
          os << "(stop)";
        } else {
          os << "(declassify " << n.name << ')';
        }
      },
      s);
}

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const Value& require_value(const Slot& s, const char* context) {
  if (!s) throw EvalError(std::string("absent value used in ") + context);
  return *s;
}

std::int64_t require_int(const Slot& s, const char* context) {
  const Value& v = require_value(s, context);
  if (!v.is_int()) throw EvalError(std::string("expected integer in ") + context);
  return v.as_int();
}

bool require_bool(const Slot& s, const char* context) {
  const Value& v = require_value(s, context);
  if (!v.is_bool()) throw EvalError(std::string("expected boolean in ") + context);
  return v.as_bool();
}

std::int64_t wrap(std::uint64_t x) { return static_cast<std::int64_t>(x); }

Slot eval(const Expr& e, const Env& env) {
  return std::visit(
      [&](const auto& n) -> Slot {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          auto it = env.find(n.name);
          if (it == env.end()) throw EvalError("unbound variable '" + n.name + "'");
          return it->second;
        } else if constexpr (std::is_same_v<T, Expr::IsAbsent>) {
          return Value(!eval(*n.operand, env).has_value());
        } else {
          const Slot a = eval(*n.lhs, env);
          const Slot b = eval(*n.rhs, env);
          const char* name = binop_name(n.op);
          switch (n.op) {
            case BinOp::eq: return Value(a == b);
            case BinOp::ne: return Value(a != b);
            case BinOp::add:
              return Value(wrap(static_cast<std::uint64_t>(require_int(a, name)) +
                                static_cast<std::uint64_t>(require_int(b, name))));
            case BinOp::sub:
              return Value(wrap(static_cast<std::uint64_t>(require_int(a, name)) -
                                static_cast<std::uint64_t>(require_int(b, name))));
            case BinOp::mul:
              return Value(wrap(static_cast<std::uint64_t>(require_int(a, name)) *
                                static_cast<std::uint64_t>(require_int(b, name))));
            case BinOp::lt:
            case BinOp::le: {
              const Value& x = require_value(a, name);
              const Value& y = require_value(b, name);
              if (x.storage().index() != y.storage().index()) throw EvalError("comparison of mismatched types");
              return Value(n.op == BinOp::lt ? x < y : x <= y);
            }
            case BinOp::logical_and: return Value(require_bool(a, name) && require_bool(b, name));
            case BinOp::logical_or: return Value(require_bool(a, name) || require_bool(b, name));
            case BinOp::concat:
              return Value(require_value(a, name).to_string() + require_value(b, name).to_string());
            case BinOp::bit: {
              const std::int64_t x = require_int(a, name);
              const std::int64_t i = require_int(b, name);
              if (i < 0 || i > 63) throw EvalError("bit index out of range");
              return Value(static_cast<std::int64_t>((static_cast<std::uint64_t>(x) >> i) & 1U));
            }
          }
          throw EvalError("unknown operator");
        }
      },
      e.node);
}

op::Stop stop_with(op::StopReason reason, std::string diagnostic = {}) {
  return op::Stop{reason, std::move(diagnostic)};
}

}  // namespace

const char* binop_name(BinOp op) {
  for (const auto& [k, name] : kBinOpNames) {
    if (k == op) return name;
  }
  return "?";
}

std::optional<BinOp> binop_from_name(std::string_view name) {
  for (const auto& [k, n] : kBinOpNames) {
    if (name == n) return k;
  }
  return std::nullopt;
}

ExprRef lit(Value v) { return std::make_shared<const Expr>(Expr{Expr::Literal{std::move(v)}}); }
ExprRef var(std::string name) { return std::make_shared<const Expr>(Expr{Expr::Var{std::move(name)}}); }
ExprRef bin(BinOp op, ExprRef lhs, ExprRef rhs) {
  return std::make_shared<const Expr>(Expr{Expr::Binary{op, std::move(lhs), std::move(rhs)}});
}
ExprRef is_absent(ExprRef operand) {
  return std::make_shared<const Expr>(Expr{Expr::IsAbsent{std::move(operand)}});
}

Block::Block(std::vector<Stmt> statements) : statements_(std::move(statements)) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < statements_.size(); ++i) {
    if (i) os << ' ';
    render_stmt(os, statements_[i]);
  }
  os << ']';
  canonical_ = os.str();
  hash_ = mix64(hash_string(canonical_));
}

std::size_t Block::total_statements() const {
  std::size_t n = 0;
  for (const auto& s : statements_) {
    ++n;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, stmt::Fork> || std::is_same_v<T, stmt::For>) {
            n += x.body->total_statements();
          } else if constexpr (std::is_same_v<T, stmt::If>) {
            n += x.then_block->total_statements() + x.else_block->total_statements();
          }
        },
        s);
  }
  return n;
}

BlockRef make_block(std::vector<Stmt> statements) { return std::make_shared<const Block>(std::move(statements)); }

bool same_block(const BlockRef& a, const BlockRef& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->hash() == b->hash() && a->canonical() == b->canonical();
}

std::strong_ordering compare_blocks(const BlockRef& a, const BlockRef& b) {
  if (a == b) return std::strong_ordering::equal;
  if (!a || !b) return static_cast<bool>(a) <=> static_cast<bool>(b);
  if (auto c = a->hash() <=> b->hash(); c != 0) return c;
  return a->canonical().compare(b->canonical()) <=> 0;
}

Thread Thread::start(BlockRef program, Env env) {
  std::vector<Frame> frames;
  frames.push_back(Frame{std::move(program), 0, std::nullopt});
  return Thread(std::move(frames), std::move(env));
}

std::uint64_t Thread::hash() const noexcept {
  std::uint64_t h = 0x7412ead;
  for (const auto& f : frames_) {
    hash_combine(h, f.block ? f.block->hash() : 0);
    hash_combine(h, f.pc);
    if (f.loop) {
      hash_combine(h, hash_string(f.loop->var));
      hash_combine(h, static_cast<std::uint64_t>(f.loop->current));
      hash_combine(h, static_cast<std::uint64_t>(f.loop->last));
    }
  }
  for (const auto& [name, slot] : env_) {
    hash_combine(h, hash_string(name));
    hash_combine(h, slot ? slot->hash() : 0xab5e47);
  }
  return h;
}

std::string Thread::describe() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    const auto& f = frames_[i];
    if (i) os << ' ';
    os << f.block->canonical() << '@' << f.pc;
    if (f.loop) os << "<" << f.loop->var << '=' << f.loop->current << ".." << f.loop->last << '>';
  }
  os << " |";
  for (const auto& [name, slot] : env_) {
    os << ' ' << name << '=' << (slot ? encode_value(*slot) : std::string("ABSENT"));
  }
  os << '}';
  return os.str();
}

Key key_from_value(const Value& v) { return v.to_string(); }

Operation run(const Thread& thread, std::size_t fuel) {
  Thread cur = thread;
  auto& frames = cur.frames();
  auto& env = cur.env();
  std::size_t used = 0;

  auto consume = [&]() {
    if (used >= fuel) return false;
    ++used;
    return true;
  };

  try {
    for (;;) {
      if (frames.empty()) return stop_with(op::StopReason::finished);

      Frame& top = frames.back();
      if (top.pc >= top.block->size()) {
        if (top.loop && top.loop->current < top.loop->last) {
          if (!consume()) return stop_with(op::StopReason::fuel_exhausted, "fuel exhausted");
          ++top.loop->current;
          env[top.loop->var] = Value(top.loop->current);
          top.pc = 0;
        } else {
          frames.pop_back();
        }
        continue;
      }

      const Stmt& s = top.block->statements()[top.pc];
      std::optional<Operation> io = std::visit(
          [&](const auto& n) -> std::optional<Operation> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, stmt::Let>) {
              if (!consume()) return stop_with(op::StopReason::fuel_exhausted, "fuel exhausted");
              Slot v = eval(*n.value, env);
              ++top.pc;
              env[n.var] = std::move(v);
              return std::nullopt;
            } else if constexpr (std::is_same_v<T, stmt::If>) {
              if (!consume()) return stop_with(op::StopReason::fuel_exhausted, "fuel exhausted");
              const bool c = require_bool(eval(*n.cond, env), "if condition");
              ++top.pc;
              BlockRef chosen = c ? n.then_block : n.else_block;
              frames.push_back(Frame{std::move(chosen), 0, std::nullopt});
              return std::nullopt;
            } else if constexpr (std::is_same_v<T, stmt::For>) {
              if (!consume()) return stop_with(op::StopReason::fuel_exhausted, "fuel exhausted");
              const std::int64_t from = require_int(eval(*n.from, env), "for bound");
              const std::int64_t to = require_int(eval(*n.to, env), "for bound");
              ++top.pc;
              if (from <= to) {
                env[n.var] = Value(from);
                BlockRef body = n.body;
                frames.push_back(Frame{std::move(body), 0, LoopState{n.var, from, to}});
              }
              return std::nullopt;
            } else if constexpr (std::is_same_v<T, stmt::Stop>) {
              return stop_with(op::StopReason::finished);
            } else if constexpr (std::is_same_v<T, stmt::Read>) {
              Key key = key_from_value(require_value(eval(*n.key, env), "read key"));
              std::string bind = n.bind;
              ++top.pc;
              return op::Read{std::move(key), ReadContinuation{std::move(bind), std::move(cur)}};
            } else if constexpr (std::is_same_v<T, stmt::Write>) {
              Key key = key_from_value(require_value(eval(*n.key, env), "write key"));
              Value value = require_value(eval(*n.value, env), "write value");
              ++top.pc;
              return op::Write{std::move(key), std::move(value), std::move(cur)};
            } else if constexpr (std::is_same_v<T, stmt::Send>) {
              Value value = require_value(eval(*n.value, env), "send value");
              std::string channel = n.channel;
              ++top.pc;
              return op::Send{std::move(channel), std::move(value), std::move(cur)};
            } else if constexpr (std::is_same_v<T, stmt::Fork>) {
              Thread child = Thread::start(n.body, env);
              ++top.pc;
              return op::Fork{std::move(cur), std::move(child)};
            } else if constexpr (std::is_same_v<T, stmt::RaiseLabel>) {
              const Label target = n.target;
              ++top.pc;
              return op::RaiseLabel{target, std::move(cur)};
            } else {
              std::string name = n.name;
              ++top.pc;
              return op::CallDeclassifier{std::move(name), std::move(cur)};
            }
          },
          s);
      if (io) return std::move(*io);
    }
  } catch (const EvalError& e) {
    return stop_with(op::StopReason::crashed, e.what());
  }
}

Thread apply_continuation(const ReadContinuation& f, const std::optional<LabeledValue>& result,
                          const Lattice& lattice) {
  Thread t = f.thread;
  if (result) {
    t.env()[f.bind] = result->value;
    t.env()[f.bind + "_label"] = Value(lattice.name(result->label));
  } else {
    t.env()[f.bind] = std::nullopt;
    t.env()[f.bind + "_label"] = std::nullopt;
  }
  return t;
}

}  // namespace trapeze
