#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trapeze/state.hpp"

namespace trapeze {

enum class Rule { start, send, read, write, fork, raise_label, declassify, skip };

/// "s-start", "s-send", ...
const char* rule_name(Rule r);

/// Intentionally broken variants of the faceted semantics, used to show that
/// the checkers notice when an enforcement rule goes missing.
struct Mutations {
  bool no_send_check = false;            // s-send ignores label(ch)
  bool no_write_gc = false;              // write appends without dropping facets
  bool read_ignores_visibility = false;  // read returns the newest facet regardless of label
  bool naive_store = false;              // single-value cells, conflicting writes ignored

  bool any() const { return no_send_check || no_write_gc || read_ignores_visibility || naive_store; }
};

/// Parses `no-send-check`, `no-write-gc`, `read-ignores-visibility`,
/// `naive-store`; returns false on an unknown name.
bool enable_mutation(Mutations& m, std::string_view name);
std::vector<std::string> mutation_names();

struct Transition {
  Rule rule;
  Event event;
  SystemState next;
  /// The process that stepped; absent for s-start and s-skip.
  std::optional<Process> actor;
  /// Processes added in place of the actor (or the started process).
  std::vector<Process> produced;
  /// Index into the pending-input list consumed by s-start.
  std::optional<std::size_t> input;
};

struct TraceStep {
  Rule rule;
  Event event;
};

using Trace = std::vector<TraceStep>;

/// The labeled transition system Σ --e--> Σ'.
///
/// `enabled` enumerates every single-rule transition, one per distinct
/// process (identical processes in the multiset yield identical steps) plus
/// one s-start per pending input and the always-present s-skip. Stuck
/// processes simply contribute nothing.
class Semantics {
 public:
  struct Options {
    PolicyMode mode = PolicyMode::trapeze;
    Mutations mutations;
    std::size_t fuel = kDefaultFuel;
  };

  Semantics(std::shared_ptr<const Lattice> lattice, ChannelEnv channels, Options options,
            std::vector<Declassifier> declassifiers = {});
  Semantics(std::shared_ptr<const Lattice> lattice, ChannelEnv channels);

  const Lattice& lattice() const noexcept { return *lattice_; }
  const std::shared_ptr<const Lattice>& lattice_ptr() const noexcept { return lattice_; }
  const ChannelEnv& channels() const noexcept { return channels_; }
  const Options& options() const noexcept { return options_; }
  PolicyMode mode() const noexcept { return options_.mode; }
  const std::vector<Declassifier>& declassifiers() const noexcept { return declassifiers_; }

  /// Throws ConfigError for an unknown channel.
  Label channel_label(const std::string& channel) const;

  std::vector<Transition> enabled(const SystemState& state, std::span<const Process> pending) const;

  /// Applies enabled(state, pending)[choice]; std::out_of_range on a stale index.
  Transition step(const SystemState& state, std::span<const Process> pending, std::size_t choice) const;

  /// Same store write the s-write rule would perform (mode- and mutation-aware).
  Store apply_write(const Store& store, const Key& k, const Value& v, const Process& writer) const;

  /// Store install used for initial scenario facets.
  Store seed(const Store& store, const Key& k, const Value& v, Label l) const;

  /// Describes the first violated state invariant, if any: store cells must
  /// respect the write ordering (or the baseline cell shape), and in the
  /// design-2 modes every effective label must stay below its maximal label.
  std::optional<std::string> invariant_violation(const SystemState& state) const;

 private:
  void process_steps(const SystemState& state, std::size_t index, std::vector<Transition>& out) const;
  const Declassifier& declassifier(const std::string& name) const;

  std::shared_ptr<const Lattice> lattice_;
  ChannelEnv channels_;
  Options options_;
  std::vector<Declassifier> declassifiers_;
};

enum class SchedulePolicy { fifo, random };

struct ScheduleRun {
  Trace trace;
  SystemState final_state;
  std::size_t inputs_consumed = 0;
};

/// Executes non-skip transitions until none remain or `max_steps` is reached.
/// Pending inputs are consumed in order (only the head is offered). `fifo`
/// takes the first enabled transition; `random` picks uniformly with a
/// generator seeded from `seed`.
ScheduleRun run_schedule(const Semantics& sem, const SystemState& initial, std::span<const Process> inputs,
                         SchedulePolicy policy, std::size_t max_steps, std::uint64_t seed);

}  // namespace trapeze
