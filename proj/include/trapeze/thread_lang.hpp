#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "trapeze/facet_store.hpp"
#include "trapeze/lattice.hpp"
#include "trapeze/value.hpp"

namespace trapeze {

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class BinOp { add, sub, mul, eq, ne, lt, le, logical_and, logical_or, concat, bit };

const char* binop_name(BinOp op);
std::optional<BinOp> binop_from_name(std::string_view name);

struct Expr;
using ExprRef = std::shared_ptr<const Expr>;

struct Expr {
  struct Literal {
    Value value;
  };
  struct Var {
    std::string name;
  };
  struct Binary {
    BinOp op;
    ExprRef lhs;
    ExprRef rhs;
  };
  struct IsAbsent {
    ExprRef operand;
  };

  std::variant<Literal, Var, Binary, IsAbsent> node;
};

ExprRef lit(Value v);
ExprRef var(std::string name);
ExprRef bin(BinOp op, ExprRef lhs, ExprRef rhs);
ExprRef is_absent(ExprRef operand);

// ---------------------------------------------------------------------------
// Statements and blocks
// ---------------------------------------------------------------------------

class Block;
using BlockRef = std::shared_ptr<const Block>;

namespace stmt {
struct Let {
  std::string var;
  ExprRef value;
};
struct Read {
  ExprRef key;
  std::string bind;
};
struct Write {
  ExprRef key;
  ExprRef value;
};
struct Send {
  std::string channel;
  ExprRef value;
};
struct Fork {
  BlockRef body;
};
struct RaiseLabel {
  Label target;
};
struct If {
  ExprRef cond;
  BlockRef then_block;
  BlockRef else_block;
};
/// Inclusive integer bounds, evaluated once on entry.
struct For {
  std::string var;
  ExprRef from;
  ExprRef to;
  BlockRef body;
};
struct Stop {};
struct CallDeclassifier {
  std::string name;
};
}  // namespace stmt

using Stmt = std::variant<stmt::Let, stmt::Read, stmt::Write, stmt::Send, stmt::Fork, stmt::RaiseLabel, stmt::If,
                          stmt::For, stmt::Stop, stmt::CallDeclassifier>;

/// An immutable statement list. Carries a canonical rendering so that two
/// independently built but identical programs compare equal.
class Block {
 public:
  explicit Block(std::vector<Stmt> statements);

  const std::vector<Stmt>& statements() const noexcept { return statements_; }
  std::size_t size() const noexcept { return statements_.size(); }
  bool empty() const noexcept { return statements_.empty(); }
  const std::string& canonical() const noexcept { return canonical_; }
  std::uint64_t hash() const noexcept { return hash_; }
  /// Statement count including nested blocks.
  std::size_t total_statements() const;

 private:
  std::vector<Stmt> statements_;
  std::string canonical_;
  std::uint64_t hash_;
};

BlockRef make_block(std::vector<Stmt> statements);

bool same_block(const BlockRef& a, const BlockRef& b);
std::strong_ordering compare_blocks(const BlockRef& a, const BlockRef& b);

// ---------------------------------------------------------------------------
// Threads
// ---------------------------------------------------------------------------

using Env = std::map<std::string, Slot>;

struct LoopState {
  std::string var;
  std::int64_t current = 0;
  std::int64_t last = 0;

  friend auto operator<=>(const LoopState&, const LoopState&) = default;
};

/// One activation of a block: the statement to run next, plus loop bookkeeping
/// when the block is a `for` body.
struct Frame {
  BlockRef block;
  std::size_t pc = 0;
  std::optional<LoopState> loop;

  friend bool operator==(const Frame& a, const Frame& b) {
    return a.pc == b.pc && a.loop == b.loop && same_block(a.block, b.block);
  }
  friend std::strong_ordering operator<=>(const Frame& a, const Frame& b) {
    if (auto c = compare_blocks(a.block, b.block); c != 0) return c;
    if (auto c = a.pc <=> b.pc; c != 0) return c;
    return a.loop <=> b.loop;
  }
};

/// A defunctionalized continuation: the remaining control stack plus the
/// variable environment. Plain value, structurally comparable.
class Thread {
 public:
  Thread() = default;
  Thread(std::vector<Frame> frames, Env env) : frames_(std::move(frames)), env_(std::move(env)) {}

  static Thread start(BlockRef program, Env env = {});

  const std::vector<Frame>& frames() const noexcept { return frames_; }
  const Env& env() const noexcept { return env_; }
  std::vector<Frame>& frames() noexcept { return frames_; }
  Env& env() noexcept { return env_; }

  std::uint64_t hash() const noexcept;
  std::string describe() const;

  friend bool operator==(const Thread&, const Thread&) = default;
  friend std::strong_ordering operator<=>(const Thread& a, const Thread& b) {
    if (auto c = a.frames_ <=> b.frames_; c != 0) return c;
    return a.env_ <=> b.env_;
  }

 private:
  std::vector<Frame> frames_;
  Env env_;
};

// ---------------------------------------------------------------------------
// I/O operations returned by run
// ---------------------------------------------------------------------------

/// Resumes `thread` with the read result bound to `bind` (value) and
/// `bind + "_label"` (label name); ABSENT binds both to the absent marker.
struct ReadContinuation {
  std::string bind;
  Thread thread;
};

namespace op {
struct Read {
  Key key;
  ReadContinuation cont;
};
struct Write {
  Key key;
  Value value;
  Thread cont;
};
struct Send {
  std::string channel;
  Value value;
  Thread cont;
};
struct Fork {
  Thread cont;
  Thread child;
};
struct RaiseLabel {
  Label target;
  Thread cont;
};
struct CallDeclassifier {
  std::string name;
  Thread cont;
};

enum class StopReason { finished, fuel_exhausted, crashed };

struct Stop {
  StopReason reason = StopReason::finished;
  std::string diagnostic;
};
}  // namespace op

using Operation = std::variant<op::Read, op::Write, op::Send, op::Fork, op::RaiseLabel, op::CallDeclassifier, op::Stop>;

inline constexpr std::size_t kDefaultFuel = 10'000;

/// Executes pure statements until the next I/O statement and returns it with
/// its continuation. Total: program end, fuel exhaustion and evaluation errors
/// all come back as op::Stop, the latter two with a diagnostic.
Operation run(const Thread& thread, std::size_t fuel = kDefaultFuel);

Thread apply_continuation(const ReadContinuation& f, const std::optional<LabeledValue>& result,
                          const Lattice& lattice);

/// Store key for a key expression's value: integers in decimal, strings as-is,
/// booleans as `true`/`false`.
Key key_from_value(const Value& v);

}  // namespace trapeze
