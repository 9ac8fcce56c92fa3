#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace trapeze {

/// Scalar payload stored in facets and passed through channels.
///
/// Wraps the variant so that string literals never silently convert to bool.
class Value {
 public:
  using Storage = std::variant<std::int64_t, bool, std::string>;

  Value() : data_(std::int64_t{0}) {}
  Value(std::int64_t i) : data_(i) {}
  Value(int i) : data_(std::int64_t{i}) {}
  Value(bool b) : data_(b) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(const char* s) : data_(std::string(s)) {}

  bool is_int() const noexcept { return std::holds_alternative<std::int64_t>(data_); }
  bool is_bool() const noexcept { return std::holds_alternative<bool>(data_); }
  bool is_string() const noexcept { return std::holds_alternative<std::string>(data_); }

  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  bool as_bool() const { return std::get<bool>(data_); }
  const std::string& as_string() const { return std::get<std::string>(data_); }

  const Storage& storage() const noexcept { return data_; }

  /// Human-readable rendering: `42`, `true`, `abc` (strings unquoted).
  std::string to_string() const;
  std::uint64_t hash() const noexcept;

  friend bool operator==(const Value&, const Value&) = default;
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (a.data_.index() != b.data_.index()) return a.data_.index() <=> b.data_.index();
    return std::visit(
        [&](const auto& x) -> std::strong_ordering {
          using T = std::decay_t<decltype(x)>;
          return x <=> std::get<T>(b.data_);
        },
        a.data_);
  }

 private:
  Storage data_;
};

/// A binding slot: a value, or ABSENT (the result of reading an invisible or
/// missing key).
using Slot = std::optional<Value>;

}  // namespace trapeze
