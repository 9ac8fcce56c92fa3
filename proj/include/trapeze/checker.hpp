#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trapeze/projection.hpp"
#include "trapeze/random_gen.hpp"

namespace trapeze {

enum class Outcome { pass, fail, inconclusive, precondition_violated };

const char* outcome_name(Outcome o);

struct Verdict {
  std::string property;
  Outcome outcome = Outcome::pass;
  std::string detail;
  /// For FAIL: the steps (from the checked state) that exhibit the violation.
  Trace counterexample;
  std::size_t states_explored = 0;
  double wall_ms = 0;

  bool passed() const { return outcome == Outcome::pass; }
};

inline constexpr std::size_t kDefaultNodeBudget = 2'000'000;

// One-step checks. All pending inputs are offered (any of them may start);
// the projected side is offered only the inputs visible at l.

/// Every step of Σ is matched by a step of Σ↾l with l-equivalent result and event.
Verdict check_projection_part1(const Semantics& sem, const Instance& inst, Label l);
/// Every step of Σ↾l is matched by a step of Σ.
Verdict check_projection_part2(const Semantics& sem, const Instance& inst, Label l);
/// Steps by processes not visible at l leave the projection unchanged and emit nothing visible.
Verdict check_invisibility(const Semantics& sem, const Instance& inst, Label l);
/// Requires l_equiv(a, b, l) and identical inputs; otherwise precondition_violated.
Verdict check_single_step_tsni(const Semantics& sem, const Instance& a, const Instance& b, Label l);

/// Every trace of length <= depth from `a` has an equal-length trace from
/// `b` with the same projection at l, reaching an l-equivalent state after
/// every prefix. Inputs are consumed in order. Exceeding `node_budget`
/// explored search nodes yields INCONCLUSIVE.
Verdict check_trace_tsni(const Semantics& sem, const Instance& a, const Instance& b, Label l, std::size_t depth,
                         std::size_t node_budget = kDefaultNodeBudget);
/// check_trace_tsni in both directions.
Verdict check_trace_tsni_sym(const Semantics& sem, const Instance& a, const Instance& b, Label l, std::size_t depth,
                             std::size_t node_budget = kDefaultNodeBudget);

/// Every state reachable within `depth` steps satisfies
/// Semantics::invariant_violation == nullopt.
Verdict check_wellformed(const Semantics& sem, const Instance& inst, std::size_t depth,
                         std::size_t node_budget = kDefaultNodeBudget);

struct LeakReport {
  Outcome outcome = Outcome::pass;  // pass means the measurement completed
  std::string detail;
  double bits = 0;
  /// Indices into the secret list, grouped by indistinguishability.
  std::vector<std::vector<std::size_t>> classes;
  /// Per class, an observable output sequence it can produce (preferring one
  /// that some other class cannot).
  std::vector<std::vector<Event>> witnesses;
  std::size_t states_explored = 0;
  double wall_ms = 0;
};

/// Groups the per-secret instances by the set of observable output sequences
/// (visible events with nops erased) over complete runs, i.e. runs that end
/// with no transition other than s-skip. Runs longer than `depth` make the
/// result INCONCLUSIVE.
LeakReport measure_leak(const Semantics& sem, const std::vector<Instance>& per_secret, Label observer,
                        std::size_t depth, std::size_t node_budget = kDefaultNodeBudget);

std::uint64_t event_hash(const Event& e);

}  // namespace trapeze
