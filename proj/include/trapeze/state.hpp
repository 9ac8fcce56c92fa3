#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "trapeze/facet_store.hpp"
#include "trapeze/lattice.hpp"
#include "trapeze/thread_lang.hpp"

namespace trapeze {

/// label(ch) for every output channel.
using ChannelEnv = std::map<std::string, Label>;

/// A running function activation. `label` is the static label under the
/// faceted semantics and the floating (effective) label under the baseline
/// designs; `max_label` is only populated in the design-2 modes.
struct Process {
  Thread thread;
  Label label;
  std::optional<Label> max_label;
  /// Read clearance of a declassifier body: its reads see facets up to the
  /// declassifier's h while its label (and so its outputs) stay at l.
  std::optional<Label> clearance;

  std::uint64_t hash() const noexcept;

  friend bool operator==(const Process&, const Process&) = default;
  friend std::strong_ordering operator<=>(const Process& a, const Process& b) {
    if (auto c = a.label <=> b.label; c != 0) return c;
    if (auto c = a.thread.hash() <=> b.thread.hash(); c != 0) return c;
    if (auto c = a.thread <=> b.thread; c != 0) return c;
    if (auto c = a.max_label <=> b.max_label; c != 0) return c;
    return a.clearance <=> b.clearance;
  }
};

/// Σ = (σ, ps). The process multiset is kept sorted so that structural
/// equality is multiset equality.
class SystemState {
 public:
  SystemState() : SystemState(Store{}, {}) {}
  SystemState(Store store, std::vector<Process> processes);

  const Store& store() const noexcept { return store_; }
  const std::vector<Process>& processes() const noexcept { return processes_; }

  std::uint64_t hash() const noexcept { return hash_; }

  friend bool operator==(const SystemState&, const SystemState&) = default;
  friend std::strong_ordering operator<=>(const SystemState& a, const SystemState& b) {
    if (auto c = a.hash_ <=> b.hash_; c != 0) return c;
    if (auto c = a.store_ <=> b.store_; c != 0) return c;
    return a.processes_ <=> b.processes_;
  }

 private:
  Store store_;
  std::vector<Process> processes_;
  std::uint64_t hash_ = 0;
};

struct EvStart {
  Process process;
  friend bool operator==(const EvStart&, const EvStart&) = default;
};
struct EvSend {
  std::string channel;
  Value value;
  friend bool operator==(const EvSend&, const EvSend&) = default;
};
struct Nop {
  friend bool operator==(const Nop&, const Nop&) = default;
};

using Event = std::variant<EvStart, EvSend, Nop>;

inline bool is_nop(const Event& e) { return std::holds_alternative<Nop>(e); }

/// A trusted function ⟨h, l, D⟩ with l strictly below h.
struct Declassifier {
  std::string name;
  Label high;
  Label low;
  BlockRef body;
};

/// Throws ConfigError unless low ⊏ high.
void validate_declassifier(const Lattice& lattice, const Declassifier& d);

/// The label a declassifier body runs at when invoked from `caller`:
/// `low` if low ⊑ caller ⊑ high, otherwise `caller`.
Label invoke_declassifier(const Lattice& lattice, const Declassifier& d, Label caller);

enum class PolicyMode { trapeze, design1, design2_total, design2_partial, trapeze_unique_read };

const char* policy_name(PolicyMode mode);
std::optional<PolicyMode> policy_from_name(std::string_view name);
/// Modes that track a maximal label per process.
inline bool uses_max_label(PolicyMode m) {
  return m == PolicyMode::design2_total || m == PolicyMode::design2_partial;
}
/// Modes whose processes carry static labels and use the faceted store.
inline bool is_faceted(PolicyMode m) {
  return m == PolicyMode::trapeze || m == PolicyMode::trapeze_unique_read;
}

}  // namespace trapeze
