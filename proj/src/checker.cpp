#include "trapeze/checker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "trapeze/hash.hpp"

namespace trapeze {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::pass: return "PASS";
    case Outcome::fail: return "FAIL";
    case Outcome::inconclusive: return "INCONCLUSIVE";
    case Outcome::precondition_violated: return "PRECONDITION_VIOLATED";
  }
  return "?";
}

std::uint64_t event_hash(const Event& e) {
  std::uint64_t h = e.index();
  if (const auto* s = std::get_if<EvStart>(&e)) {
    hash_combine(h, s->process.hash());
  } else if (const auto* s = std::get_if<EvSend>(&e)) {
    hash_combine(h, hash_string(s->channel));
    hash_combine(h, s->value.hash());
  }
  return mix64(h);
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::vector<Process> visible_inputs(const Lattice& lat, const std::vector<Process>& inputs, Label l) {
  std::vector<Process> out;
  for (const auto& p : inputs) {
    if (lat.leq(p.label, l)) out.push_back(p);
  }
  return out;
}

std::string describe_step(const Lattice& lat, const Transition& t) {
  std::string s = rule_name(t.rule);
  if (t.actor) s += " by a process at '" + lat.name(t.actor->label) + "'";
  if (const auto* send = std::get_if<EvSend>(&t.event)) {
    s += " emitting " + send->channel + "(" + send->value.to_string() + ")";
  } else if (const auto* start = std::get_if<EvStart>(&t.event)) {
    s += " starting a process at '" + lat.name(start->process.label) + "'";
  }
  return s;
}

/// For each step of `from`, looks for a step of `to` with equal projected
/// event and projected successor. Returns the first unmatched step.
std::optional<Transition> unmatched_step(const Semantics& sem, const std::vector<Transition>& from,
                                         const std::vector<Transition>& to, Label l, std::size_t& explored) {
  const Lattice& lat = sem.lattice();
  std::vector<std::pair<Event, SystemState>> targets;
  targets.reserve(to.size());
  for (const auto& t : to) {
    targets.emplace_back(project_event(lat, sem.channels(), t.event, l), project_state(lat, t.next, l));
  }
  explored += from.size() + to.size();
  for (const auto& t : from) {
    const Event e = project_event(lat, sem.channels(), t.event, l);
    const SystemState s = project_state(lat, t.next, l);
    const bool matched = std::any_of(targets.begin(), targets.end(),
                                     [&](const auto& target) { return target.first == e && target.second == s; });
    if (!matched) return t;
  }
  return std::nullopt;
}

Verdict one_step_match(const char* property, const Semantics& sem, const SystemState& from_state,
                       const std::vector<Process>& from_inputs, const SystemState& to_state,
                       const std::vector<Process>& to_inputs, Label l, const char* what) {
  const auto started = Clock::now();
  Verdict v;
  v.property = property;
  auto from = sem.enabled(from_state, from_inputs);
  auto to = sem.enabled(to_state, to_inputs);
  if (auto bad = unmatched_step(sem, from, to, l, v.states_explored)) {
    v.outcome = Outcome::fail;
    v.detail = describe_step(sem.lattice(), *bad) + " has no matching step in " + what;
    v.counterexample.push_back({bad->rule, bad->event});
  }
  v.wall_ms = elapsed_ms(started);
  return v;
}

}  // namespace

Verdict check_projection_part1(const Semantics& sem, const Instance& inst, Label l) {
  const Lattice& lat = sem.lattice();
  return one_step_match("projection1", sem, inst.state, inst.inputs, project_state(lat, inst.state, l),
                        visible_inputs(lat, inst.inputs, l), l, "the projected state");
}

Verdict check_projection_part2(const Semantics& sem, const Instance& inst, Label l) {
  const Lattice& lat = sem.lattice();
  return one_step_match("projection2", sem, project_state(lat, inst.state, l), visible_inputs(lat, inst.inputs, l),
                        inst.state, inst.inputs, l, "the full state");
}

Verdict check_invisibility(const Semantics& sem, const Instance& inst, Label l) {
  const auto started = Clock::now();
  const Lattice& lat = sem.lattice();
  Verdict v;
  v.property = "invisibility";
  const Store before = project_store(lat, inst.state.store(), l);
  for (const auto& t : sem.enabled(inst.state, inst.inputs)) {
    ++v.states_explored;
    std::optional<Label> actor;
    if (t.actor) {
      actor = t.actor->label;
    } else if (const auto* start = std::get_if<EvStart>(&t.event)) {
      actor = start->process.label;
    }
    if (!actor || lat.leq(*actor, l)) continue;

    std::string problem;
    if (project_store(lat, t.next.store(), l) != before) {
      problem = "changes the store as seen at '" + lat.name(l) + "'";
    } else if (!is_nop(project_event(lat, sem.channels(), t.event, l))) {
      problem = "emits an event visible at '" + lat.name(l) + "'";
    } else if (!project_processes(lat, t.produced, l).empty()) {
      problem = "creates a process visible at '" + lat.name(l) + "'";
    }
    if (!problem.empty()) {
      v.outcome = Outcome::fail;
      v.detail = describe_step(lat, t) + " " + problem;
      v.counterexample.push_back({t.rule, t.event});
      break;
    }
  }
  v.wall_ms = elapsed_ms(started);
  return v;
}

Verdict check_single_step_tsni(const Semantics& sem, const Instance& a, const Instance& b, Label l) {
  if (!l_equiv(sem.lattice(), a.state, b.state, l) || a.inputs != b.inputs) {
    Verdict v;
    v.property = "tsni-step";
    v.outcome = Outcome::precondition_violated;
    v.detail = "states are not equivalent at '" + sem.lattice().name(l) + "'";
    return v;
  }
  return one_step_match("tsni-step", sem, a.state, a.inputs, b.state, b.inputs, l, "the other state");
}

namespace {

struct NodeKey {
  SystemState state;
  std::size_t cursor;
  friend bool operator==(const NodeKey&, const NodeKey&) = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const noexcept {
    std::uint64_t h = k.state.hash();
    hash_combine(h, k.cursor);
    return h;
  }
};

struct StateHash {
  std::size_t operator()(const SystemState& s) const noexcept { return s.hash(); }
};

struct EventHash {
  std::size_t operator()(const Event& e) const noexcept { return event_hash(e); }
};

struct BudgetExceeded {};

using ProjectedTable = std::unordered_map<SystemState, std::uint32_t, StateHash>;

/// Interned exploration graph shared by the trace and leak searches.
class Graph {
 public:
  struct Edge {
    TraceStep step;
    std::uint32_t event;  // projected event id
    std::uint32_t next;
  };
  struct Node {
    NodeKey key;
    std::uint32_t projected;  // projected state id
    bool expanded = false;
    std::vector<Edge> edges;  // s-skip included, always last
  };

  Graph(const Semantics& sem, const std::vector<Process>& inputs, Label l, std::size_t budget,
        ProjectedTable& projected)
      : sem_(sem), inputs_(inputs), l_(l), budget_(budget), projected_(projected) {}

  std::uint32_t intern(SystemState state, std::size_t cursor) {
    NodeKey key{std::move(state), cursor};
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    if (nodes_.size() >= budget_) throw BudgetExceeded{};
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    const std::uint32_t proj = intern_projected(project_state(sem_.lattice(), key.state, l_));
    ids_.emplace(key, id);
    nodes_.push_back(Node{std::move(key), proj, false, {}});
    return id;
  }

  const Node& node(std::uint32_t id) { return nodes_[id]; }

  const std::vector<Edge>& edges(std::uint32_t id) {
    if (!nodes_[id].expanded) {
      const std::size_t cursor = nodes_[id].key.cursor;
      const auto head = std::span<const Process>(inputs_).subspan(cursor, cursor < inputs_.size() ? 1 : 0);
      std::vector<Edge> out;
      for (auto& t : sem_.enabled(nodes_[id].key.state, head)) {
        const std::uint32_t ev = intern_event(project_event(sem_.lattice(), sem_.channels(), t.event, l_));
        const std::uint32_t next = intern(std::move(t.next), cursor + (t.input ? 1 : 0));
        out.push_back(Edge{TraceStep{t.rule, std::move(t.event)}, ev, next});
      }
      nodes_[id].edges = std::move(out);
      nodes_[id].expanded = true;
    }
    return nodes_[id].edges;
  }

  std::uint32_t nop_event() { return intern_event(Nop{}); }
  const Event& event(std::uint32_t id) const { return events_[id]; }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::uint32_t intern_projected(SystemState s) {
    auto [it, fresh] = projected_.try_emplace(std::move(s), static_cast<std::uint32_t>(projected_.size()));
    return it->second;
  }
  std::uint32_t intern_event(Event e) {
    auto it = event_ids_.find(e);
    if (it != event_ids_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(events_.size());
    events_.push_back(e);
    event_ids_.emplace(std::move(e), id);
    return id;
  }

  const Semantics& sem_;
  const std::vector<Process>& inputs_;
  Label l_;
  std::size_t budget_;
  std::deque<Node> nodes_;
  std::unordered_map<NodeKey, std::uint32_t, NodeKeyHash> ids_;
  ProjectedTable& projected_;
  std::vector<Event> events_;
  std::unordered_map<Event, std::uint32_t, EventHash> event_ids_;
};

/// Sorted id vectors interned to dense ids.
class SetTable {
 public:
  std::uint32_t intern(std::vector<std::uint32_t> members) {
    auto [it, fresh] = ids_.try_emplace(std::move(members), static_cast<std::uint32_t>(sets_.size()));
    if (fresh) sets_.push_back(&it->first);
    return it->second;
  }
  const std::vector<std::uint32_t>& get(std::uint32_t id) const { return *sets_[id]; }

 private:
  std::map<std::vector<std::uint32_t>, std::uint32_t> ids_;
  std::vector<const std::vector<std::uint32_t>*> sets_;
};

struct MemoKey {
  std::uint32_t n1;
  std::uint32_t s2;
  std::size_t remaining;
  friend bool operator==(const MemoKey&, const MemoKey&) = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const noexcept {
    std::uint64_t h = k.n1;
    hash_combine(h, k.s2);
    hash_combine(h, k.remaining);
    return h;
  }
};

/// Trace inclusion by subset construction: walks the traces of the first
/// state while tracking every node of the second state's graph that can
/// produce the same projected prefix.
class TraceSearch {
 public:
  TraceSearch(const Semantics& sem, const Instance& a, const Instance& b, Label l, std::size_t budget)
      : g1_(sem, a.inputs, l, budget, projected_), g2_(sem, b.inputs, l, budget, projected_), budget_(budget) {
    root1_ = g1_.intern(a.state, 0);
    root2_ = sets_.intern({g2_.intern(b.state, 0)});
  }

  /// The failing path and reason, or nullopt when every trace is matched.
  std::optional<std::pair<Trace, std::string>> run(std::size_t depth) {
    if (!visit(root1_, root2_, depth)) return std::pair{path_, failure_};
    return std::nullopt;
  }

  std::size_t explored() const { return g1_.size() + g2_.size(); }

 private:
  bool has_equivalent(std::uint32_t n1, std::uint32_t s2) {
    const std::uint32_t want = g1_.node(n1).projected;
    const auto& members = sets_.get(s2);
    return std::any_of(members.begin(), members.end(),
                       [&](std::uint32_t n2) { return g2_.node(n2).projected == want; });
  }

  std::uint32_t successors(std::uint32_t s2, std::uint32_t event) {
    const std::uint64_t key = (static_cast<std::uint64_t>(s2) << 32) | event;
    if (auto it = succ_cache_.find(key); it != succ_cache_.end()) return it->second;
    const Event& e = g1_.event(event);
    std::vector<std::uint32_t> out;
    for (std::uint32_t n2 : sets_.get(s2)) {
      for (const auto& edge : g2_.edges(n2)) {
        if (g2_.event(edge.event) == e) out.push_back(edge.next);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    const std::uint32_t id = sets_.intern(std::move(out));
    succ_cache_.emplace(key, id);
    return id;
  }

  bool visit(std::uint32_t n1, std::uint32_t s2, std::size_t remaining) {
    if (!has_equivalent(n1, s2)) {
      failure_ = "no state of the other run is equivalent after this prefix";
      return false;
    }
    if (remaining == 0) return true;
    if (!done_.insert(MemoKey{n1, s2, remaining}).second) return true;
    if (done_.size() > budget_) throw BudgetExceeded{};

    const auto& edges = g1_.edges(n1);
    for (const auto& edge : edges) {
      const std::uint32_t next2 = successors(s2, edge.event);
      path_.push_back(edge.step);
      if (sets_.get(next2).empty()) {
        failure_ = "the other run cannot produce the same observable event";
        return false;
      }
      if (!visit(edge.next, next2, remaining - 1)) return false;
      path_.pop_back();
    }
    return true;
  }

  ProjectedTable projected_;
  Graph g1_;
  Graph g2_;
  std::size_t budget_;
  SetTable sets_;
  std::uint32_t root1_ = 0;
  std::uint32_t root2_ = 0;
  std::unordered_map<std::uint64_t, std::uint32_t> succ_cache_;
  std::unordered_set<MemoKey, MemoKeyHash> done_;
  Trace path_;
  std::string failure_;
};

}  // namespace

Verdict check_trace_tsni(const Semantics& sem, const Instance& a, const Instance& b, Label l, std::size_t depth,
                         std::size_t node_budget) {
  const auto started = Clock::now();
  Verdict v;
  v.property = "tsni-trace";
  if (!l_equiv(sem.lattice(), a.state, b.state, l) || a.inputs != b.inputs) {
    v.outcome = Outcome::precondition_violated;
    v.detail = "states are not equivalent at '" + sem.lattice().name(l) + "'";
    return v;
  }
  TraceSearch search(sem, a, b, l, node_budget);
  try {
    if (auto failure = search.run(depth)) {
      v.outcome = Outcome::fail;
      v.counterexample = std::move(failure->first);
      v.detail = failure->second + " (after " + std::to_string(v.counterexample.size()) + " steps)";
    }
  } catch (const BudgetExceeded&) {
    v.outcome = Outcome::inconclusive;
    v.detail = "search budget of " + std::to_string(node_budget) + " nodes exhausted";
  }
  v.states_explored = search.explored();
  v.wall_ms = elapsed_ms(started);
  return v;
}

Verdict check_trace_tsni_sym(const Semantics& sem, const Instance& a, const Instance& b, Label l, std::size_t depth,
                             std::size_t node_budget) {
  Verdict forward = check_trace_tsni(sem, a, b, l, depth, node_budget);
  if (forward.outcome != Outcome::pass) return forward;
  Verdict backward = check_trace_tsni(sem, b, a, l, depth, node_budget);
  backward.states_explored += forward.states_explored;
  backward.wall_ms += forward.wall_ms;
  if (backward.outcome == Outcome::fail) backward.detail = "reversed pair: " + backward.detail;
  return backward;
}

Verdict check_wellformed(const Semantics& sem, const Instance& inst, std::size_t depth, std::size_t node_budget) {
  const auto started = Clock::now();
  Verdict v;
  v.property = "wellformed";
  ProjectedTable projected;
  Graph g(sem, inst.inputs, sem.lattice().bottom(), node_budget, projected);
  struct Visit {
    std::uint32_t node;
    std::size_t depth;
    std::int64_t parent;
    std::optional<TraceStep> via;
  };
  std::vector<Visit> order;
  std::unordered_set<std::uint32_t> seen;
  try {
    order.push_back({g.intern(inst.state, 0), 0, -1, std::nullopt});
    seen.insert(order.front().node);
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Visit cur = order[i];
      if (auto problem = sem.invariant_violation(g.node(cur.node).key.state)) {
        v.outcome = Outcome::fail;
        v.detail = *problem;
        for (std::int64_t at = static_cast<std::int64_t>(i); order[at].via; at = order[at].parent) {
          v.counterexample.push_back(*order[at].via);
        }
        std::reverse(v.counterexample.begin(), v.counterexample.end());
        break;
      }
      if (cur.depth == depth) continue;
      for (const auto& edge : g.edges(cur.node)) {
        if (seen.insert(edge.next).second) {
          order.push_back({edge.next, cur.depth + 1, static_cast<std::int64_t>(i), edge.step});
        }
      }
    }
  } catch (const BudgetExceeded&) {
    v.outcome = Outcome::inconclusive;
    v.detail = "search budget of " + std::to_string(node_budget) + " nodes exhausted";
  }
  v.states_explored = g.size();
  v.wall_ms = elapsed_ms(started);
  return v;
}

namespace {

struct DepthExceeded {};

class LeakSearch {
 public:
  LeakSearch(const Semantics& sem, const Instance& inst, Label l, std::size_t budget, SetTable& sets,
             std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t>& conses,
             std::vector<std::pair<Event, std::uint32_t>>& cells, std::unordered_map<Event, std::uint32_t, EventHash>& events)
      : graph_(sem, inst.inputs, l, budget, projected_), sets_(sets), conses_(conses), cells_(cells), events_(events) {
    root_ = graph_.intern(inst.state, 0);
  }

  std::uint32_t run(std::size_t depth) { return outputs(root_, depth).first; }
  std::size_t explored() const { return graph_.size(); }

 private:
  /// (set of output sequences, longest run length) for a node.
  std::pair<std::uint32_t, std::size_t> outputs(std::uint32_t n, std::size_t remaining) {
    if (auto it = memo_.find(n); it != memo_.end()) {
      if (it->second.second > remaining) throw DepthExceeded{};
      return it->second;
    }
    const auto& edges = graph_.edges(n);
    const std::size_t moves = edges.size() - 1;  // the trailing s-skip is not a move
    if (moves == 0) {
      auto r = std::pair{sets_.intern({kEmptySequence}), std::size_t{0}};
      memo_.emplace(n, r);
      return r;
    }
    if (remaining == 0) throw DepthExceeded{};
    std::vector<std::uint32_t> members;
    std::size_t height = 0;
    for (std::size_t i = 0; i < moves; ++i) {
      const auto& edge = edges[i];
      auto [child, h] = outputs(edge.next, remaining - 1);
      height = std::max(height, h + 1);
      const Event& e = graph_.event(edge.event);
      for (std::uint32_t seq : sets_.get(child)) members.push_back(is_nop(e) ? seq : cons(e, seq));
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    auto r = std::pair{sets_.intern(std::move(members)), height};
    memo_.emplace(n, r);
    return r;
  }

  std::uint32_t cons(const Event& e, std::uint32_t tail) {
    auto [eit, efresh] = events_.try_emplace(e, static_cast<std::uint32_t>(events_.size()));
    auto [it, fresh] = conses_.try_emplace({eit->second, tail}, static_cast<std::uint32_t>(cells_.size() + 1));
    if (fresh) cells_.emplace_back(e, tail);
    return it->second;
  }

 public:
  static constexpr std::uint32_t kEmptySequence = 0;

 private:
  ProjectedTable projected_;
  Graph graph_;
  SetTable& sets_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t>& conses_;
  std::vector<std::pair<Event, std::uint32_t>>& cells_;  // sequence id - 1 -> (head, tail)
  std::unordered_map<Event, std::uint32_t, EventHash>& events_;
  std::unordered_map<std::uint32_t, std::pair<std::uint32_t, std::size_t>> memo_;
  std::uint32_t root_ = 0;
};

}  // namespace

LeakReport measure_leak(const Semantics& sem, const std::vector<Instance>& per_secret, Label observer,
                        std::size_t depth, std::size_t node_budget) {
  const auto started = Clock::now();
  LeakReport report;
  SetTable sets;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> conses;
  std::vector<std::pair<Event, std::uint32_t>> cells;
  std::unordered_map<Event, std::uint32_t, EventHash> events;

  std::vector<std::uint32_t> set_of(per_secret.size());
  try {
    for (std::size_t i = 0; i < per_secret.size(); ++i) {
      LeakSearch search(sem, per_secret[i], observer, node_budget, sets, conses, cells, events);
      try {
        set_of[i] = search.run(depth);
      } catch (...) {
        report.states_explored += search.explored();
        throw;
      }
      report.states_explored += search.explored();
    }
  } catch (const DepthExceeded&) {
    report.outcome = Outcome::inconclusive;
    report.detail = "some run is longer than depth " + std::to_string(depth);
  } catch (const BudgetExceeded&) {
    report.outcome = Outcome::inconclusive;
    report.detail = "search budget of " + std::to_string(node_budget) + " nodes exhausted";
  }

  if (report.outcome == Outcome::pass) {
    std::map<std::uint32_t, std::size_t> class_of;
    std::vector<std::uint32_t> class_sets;
    for (std::size_t i = 0; i < set_of.size(); ++i) {
      auto [it, fresh] = class_of.try_emplace(set_of[i], report.classes.size());
      if (fresh) {
        report.classes.emplace_back();
        class_sets.push_back(set_of[i]);
      }
      report.classes[it->second].push_back(i);
    }
    report.bits = report.classes.empty() ? 0.0 : std::log2(static_cast<double>(report.classes.size()));

    auto expand = [&](std::uint32_t seq) {
      std::vector<Event> out;
      while (seq != LeakSearch::kEmptySequence) {
        out.push_back(cells[seq - 1].first);
        seq = cells[seq - 1].second;
      }
      return out;
    };
    for (std::size_t c = 0; c < class_sets.size(); ++c) {
      const auto& mine = sets.get(class_sets[c]);
      std::uint32_t pick = mine.front();
      for (std::uint32_t seq : mine) {
        const bool distinguishing = std::any_of(class_sets.begin(), class_sets.end(), [&](std::uint32_t other) {
          const auto& theirs = sets.get(other);
          return !std::binary_search(theirs.begin(), theirs.end(), seq);
        });
        if (distinguishing) {
          pick = seq;
          break;
        }
      }
      report.witnesses.push_back(expand(pick));
    }
  }
  report.wall_ms = elapsed_ms(started);
  return report;
}

}  // namespace trapeze
