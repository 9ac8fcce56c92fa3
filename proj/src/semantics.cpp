#include "trapeze/semantics.hpp"

#include <random>
#include <stdexcept>

#include "trapeze/baseline.hpp"
#include "trapeze/errors.hpp"

namespace trapeze {

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::start: return "s-start";
    case Rule::send: return "s-send";
    case Rule::read: return "s-read";
    case Rule::write: return "s-write";
    case Rule::fork: return "s-fork";
    case Rule::raise_label: return "s-raise-label";
    case Rule::declassify: return "s-declassify";
    case Rule::skip: return "s-skip";
  }
  return "?";
}

bool enable_mutation(Mutations& m, std::string_view name) {
  if (name == "no-send-check") {
    m.no_send_check = true;
  } else if (name == "no-write-gc") {
    m.no_write_gc = true;
  } else if (name == "read-ignores-visibility") {
    m.read_ignores_visibility = true;
  } else if (name == "naive-store") {
    m.naive_store = true;
  } else {
    return false;
  }
  return true;
}

std::vector<std::string> mutation_names() {
  return {"no-send-check", "no-write-gc", "read-ignores-visibility", "naive-store"};
}

Semantics::Semantics(std::shared_ptr<const Lattice> lattice, ChannelEnv channels, Options options,
                     std::vector<Declassifier> declassifiers)
    : lattice_(std::move(lattice)),
      channels_(std::move(channels)),
      options_(options),
      declassifiers_(std::move(declassifiers)) {
  if (!lattice_) throw std::invalid_argument("Semantics requires a lattice");
  if (options_.fuel == 0) throw std::invalid_argument("fuel must be positive");
  for (const auto& d : declassifiers_) validate_declassifier(*lattice_, d);
}

Semantics::Semantics(std::shared_ptr<const Lattice> lattice, ChannelEnv channels)
    : Semantics(std::move(lattice), std::move(channels), Options{}) {}

Label Semantics::channel_label(const std::string& channel) const {
  auto it = channels_.find(channel);
  if (it == channels_.end()) throw ConfigError("unknown channel '" + channel + "'");
  return it->second;
}

const Declassifier& Semantics::declassifier(const std::string& name) const {
  for (const auto& d : declassifiers_) {
    if (d.name == name) return d;
  }
  throw ConfigError("unknown declassifier '" + name + "'");
}

Store Semantics::apply_write(const Store& store, const Key& k, const Value& v, const Process& writer) const {
  const Lattice& lat = *lattice_;
  const LabeledValueSeq& cell = store.get(k);
  LabeledValueSeq next;
  if (is_faceted(options_.mode)) {
    if (options_.mutations.naive_store) {
      next = naive_write(lat, cell, v, writer.label);
    } else if (options_.mutations.no_write_gc) {
      next = cell;
      next.push_back({v, writer.label});
    } else {
      next = write_seq(lat, cell, v, writer.label);
    }
  } else {
    auto written = baseline_write(lat, options_.mode, cell, writer, v);
    if (!written) throw std::logic_error("apply_write on a rejected baseline write");
    next = std::move(*written);
  }
  Store out = store;
  out.set(k, std::move(next));
  return out;
}

Store Semantics::seed(const Store& store, const Key& k, const Value& v, Label l) const {
  Store out = store;
  if (is_faceted(options_.mode) && options_.mutations.naive_store) {
    out.set(k, LabeledValueSeq{{v, l}});
  } else {
    out.set(k, seed_cell(*lattice_, options_.mode, store.get(k), v, l));
  }
  return out;
}

void Semantics::process_steps(const SystemState& state, std::size_t index, std::vector<Transition>& out) const {
  const Lattice& lat = *lattice_;
  const Process& proc = state.processes()[index];
  const PolicyMode mode = options_.mode;

  auto replace = [&](Store store, std::vector<Process> produced) {
    std::vector<Process> ps;
    ps.reserve(state.processes().size() + 1);
    for (std::size_t i = 0; i < state.processes().size(); ++i) {
      if (i != index) ps.push_back(state.processes()[i]);
    }
    ps.insert(ps.end(), produced.begin(), produced.end());
    return std::pair{SystemState(std::move(store), std::move(ps)), std::move(produced)};
  };
  auto emit = [&](Rule rule, Event event, Store store, std::vector<Process> produced) {
    auto [next, prod] = replace(std::move(store), std::move(produced));
    out.push_back(Transition{rule, std::move(event), std::move(next), proc, std::move(prod), std::nullopt});
  };
  auto with_thread = [&](const Process& p, Thread t) {
    Process q = p;
    q.thread = std::move(t);
    return q;
  };

  Operation operation = run(proc.thread, options_.fuel);

  std::visit(
      [&](auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, op::Send>) {
          const Label ch = channel_label(o.channel);
          bool allowed = is_faceted(mode) ? lat.leq(proc.label, ch) : baseline_send(lat, mode, proc, ch);
          if (options_.mutations.no_send_check) allowed = true;
          if (!allowed) return;
          emit(Rule::send, EvSend{o.channel, o.value}, state.store(), {with_thread(proc, std::move(o.cont))});
        } else if constexpr (std::is_same_v<T, op::Read>) {
          const LabeledValueSeq& cell = state.store().get(o.key);
          std::optional<LabeledValue> result;
          Process reader = proc;
          if (mode == PolicyMode::trapeze) {
            if (options_.mutations.read_ignores_visibility) {
              if (!cell.empty()) result = cell.back();
            } else {
              result = read(lat, state.store(), o.key, proc.clearance.value_or(proc.label));
            }
          } else {
            BaselineRead r = baseline_read(lat, mode, cell, proc);
            if (r.kind == BaselineRead::Kind::error) return;
            result = r.result;
            reader = r.process;
          }
          emit(Rule::read, Nop{}, state.store(), {with_thread(reader, apply_continuation(o.cont, result, lat))});
        } else if constexpr (std::is_same_v<T, op::Write>) {
          if (!is_faceted(mode) && !baseline_write(lat, mode, state.store().get(o.key), proc, o.value)) return;
          Store store = apply_write(state.store(), o.key, o.value, proc);
          emit(Rule::write, Nop{}, std::move(store), {with_thread(proc, std::move(o.cont))});
        } else if constexpr (std::is_same_v<T, op::Fork>) {
          emit(Rule::fork, Nop{}, state.store(),
               {with_thread(proc, std::move(o.cont)), with_thread(proc, std::move(o.child))});
        } else if constexpr (std::is_same_v<T, op::RaiseLabel>) {
          Process raised = with_thread(proc, std::move(o.cont));
          if (is_faceted(mode)) {
            if (!lat.leq(proc.label, o.target)) return;
            raised.label = o.target;
          } else {
            auto r = baseline_raise(lat, mode, raised, o.target);
            if (!r) return;
            raised = std::move(*r);
          }
          emit(Rule::raise_label, Nop{}, state.store(), {std::move(raised)});
        } else if constexpr (std::is_same_v<T, op::CallDeclassifier>) {
          const Declassifier& d = declassifier(o.name);
          Process body{Thread::start(d.body), invoke_declassifier(lat, d, proc.label), proc.max_label, std::nullopt};
          if (body.label != proc.label) body.clearance = d.high;
          emit(Rule::declassify, Nop{}, state.store(), {with_thread(proc, std::move(o.cont)), std::move(body)});
        } else {
          static_assert(std::is_same_v<T, op::Stop>);
        }
      },
      operation);
}

std::vector<Transition> Semantics::enabled(const SystemState& state, std::span<const Process> pending) const {
  std::vector<Transition> out;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    std::vector<Process> ps = state.processes();
    ps.push_back(pending[i]);
    out.push_back(Transition{Rule::start, EvStart{pending[i]}, SystemState(state.store(), std::move(ps)),
                             std::nullopt, {pending[i]}, i});
  }
  const auto& procs = state.processes();
  for (std::size_t i = 0; i < procs.size(); ++i) {
    if (i > 0 && procs[i] == procs[i - 1]) continue;
    process_steps(state, i, out);
  }
  out.push_back(Transition{Rule::skip, Nop{}, state, std::nullopt, {}, std::nullopt});
  return out;
}

Transition Semantics::step(const SystemState& state, std::span<const Process> pending, std::size_t choice) const {
  auto all = enabled(state, pending);
  if (choice >= all.size()) {
    throw std::out_of_range("transition index " + std::to_string(choice) + " out of range (" +
                            std::to_string(all.size()) + " enabled)");
  }
  return std::move(all[choice]);
}

std::optional<std::string> Semantics::invariant_violation(const SystemState& state) const {
  const Lattice& lat = *lattice_;
  for (const auto& [k, seq] : state.store().cells()) {
    const bool single = options_.mode == PolicyMode::design1 || options_.mode == PolicyMode::design2_total ||
                        (is_faceted(options_.mode) && options_.mutations.naive_store);
    if (single && seq.size() > 1) return "cell '" + k + "' holds more than one value";
    if (!gc_invariant_holds(lat, seq)) return "facets of key '" + k + "' violate the write ordering";
  }
  for (const auto& p : state.processes()) {
    if (p.label.id >= lat.size()) return "process label out of range";
    if (uses_max_label(options_.mode) && p.max_label && !lat.leq(p.label, *p.max_label)) {
      return "effective label '" + lat.name(p.label) + "' exceeds maximal label '" + lat.name(*p.max_label) + "'";
    }
  }
  return std::nullopt;
}

ScheduleRun run_schedule(const Semantics& sem, const SystemState& initial, std::span<const Process> inputs,
                         SchedulePolicy policy, std::size_t max_steps, std::uint64_t seed) {
  ScheduleRun result{{}, initial, 0};
  std::mt19937_64 rng(seed);
  for (std::size_t n = 0; n < max_steps; ++n) {
    auto head = inputs.subspan(result.inputs_consumed, result.inputs_consumed < inputs.size() ? 1 : 0);
    auto options = sem.enabled(result.final_state, head);
    options.pop_back();  // s-skip is last; schedules never stutter
    if (options.empty()) break;
    std::size_t pick = 0;
    if (policy == SchedulePolicy::random) {
      pick = std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng);
    }
    Transition& t = options[pick];
    if (t.input) ++result.inputs_consumed;
    result.trace.push_back(TraceStep{t.rule, std::move(t.event)});
    result.final_state = std::move(t.next);
  }
  return result;
}

}  // namespace trapeze
