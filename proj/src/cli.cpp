#include "trapeze/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "trapeze/errors.hpp"
#include "trapeze/program_json.hpp"
#include "trapeze/report_json.hpp"
#include "trapeze/scenario.hpp"
#include "trapeze/store_io.hpp"

namespace trapeze::cli {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `trapeze`, `design1`, ... optionally followed by `+mutation` suffixes,
/// e.g. `trapeze+naive-store`.
struct ModeSpec {
  std::string text;
  PolicyMode mode = PolicyMode::trapeze;
  Mutations mutations;
};

ModeSpec parse_mode(const std::string& text, const std::vector<std::string>& extra_mutations) {
  ModeSpec spec{text, PolicyMode::trapeze, {}};
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, '+');) parts.push_back(part);
  if (parts.empty()) throw UsageError("empty --mode");
  auto mode = policy_from_name(parts[0]);
  if (!mode) throw UsageError("unknown mode '" + parts[0] + "'");
  spec.mode = *mode;
  parts.erase(parts.begin());
  parts.insert(parts.end(), extra_mutations.begin(), extra_mutations.end());
  for (const auto& m : parts) {
    if (!enable_mutation(spec.mutations, m)) throw UsageError("unknown mutation '" + m + "'");
  }
  if (spec.mutations.any() && !is_faceted(spec.mode)) {
    throw UsageError("mutations apply to the faceted modes only");
  }
  for (const auto& m : extra_mutations) spec.text += "+" + m;
  return spec;
}

Label parse_label(const Lattice& lattice, const std::string& name) {
  auto l = lattice.find(name);
  if (!l) throw ConfigError("unknown label '" + name + "'");
  return *l;
}

Value parse_secret(const std::string& text) {
  try {
    return value_from_json(json::parse(text), "--secret");
  } catch (const json::parse_error&) {
    return Value(text);
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const json& doc, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << doc.dump(2) << "\n";
  } else {
    write_file(out_path, doc.dump(2) + "\n");
  }
}

struct Options {
  std::string scenario;
  std::vector<std::string> modes;
  std::vector<std::string> mutations;
  std::uint64_t seed = 0;
  std::size_t max_steps = 1000;
  std::string observer;
  std::size_t depth = 0;
  std::optional<std::size_t> trials;
  std::string out;
  std::string property;
  std::string secret;
  std::string policy = "random";
  std::size_t budget = kDefaultNodeBudget;
  std::string store_action;
  std::string store_path;
};

Scenario scenario_or_default(const Options& o) {
  return o.scenario.empty() ? default_scenario() : load_scenario(o.scenario);
}

ModeSpec single_mode(const Options& o, const Scenario& sc) {
  if (o.modes.size() > 1) throw UsageError("this command takes a single --mode");
  return parse_mode(o.modes.empty() ? policy_name(sc.mode) : o.modes.front(), o.mutations);
}

Label default_observer(const Options& o, const Scenario& sc) {
  if (!o.observer.empty()) return parse_label(*sc.lattice, o.observer);
  if (sc.observer) return *sc.observer;
  return sc.lattice->bottom();
}

// ---------------------------------------------------------------------------

int cmd_run(const Options& o, std::ostream& out) {
  const Scenario sc = load_scenario(o.scenario);
  const ModeSpec mode = single_mode(o, sc);
  const Semantics sem = make_semantics(sc, mode.mode, mode.mutations);
  std::optional<Value> secret;
  if (!o.secret.empty()) {
    if (!sc.secret) throw ConfigError("scenario has no secret_slot");
    secret = parse_secret(o.secret);
  } else if (sc.secret) {
    secret = sc.secret->values.front();
  }
  const Instance inst = initial_instance(sc, sem, secret);
  SchedulePolicy policy;
  if (o.policy == "random") {
    policy = SchedulePolicy::random;
  } else if (o.policy == "fifo") {
    policy = SchedulePolicy::fifo;
  } else {
    throw UsageError("unknown --policy '" + o.policy + "'");
  }
  const ScheduleRun result = run_schedule(sem, inst.state, inst.inputs, policy, o.max_steps, o.seed);
  const Label observer = default_observer(o, sc);
  const Lattice& lat = sem.lattice();

  const std::string trace_path = o.out.empty() ? "trace.jsonl" : o.out;
  const std::string observer_path = trace_path + ".observer";
  std::string full;
  std::string projected;
  json sends = json::array();
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    const TraceStep& step = result.trace[i];
    full += trace_line(lat, i, step).dump() + "\n";
    const TraceStep seen{step.rule, project_event(lat, sem.channels(), step.event, observer)};
    projected += trace_line(lat, i, seen, false).dump() + "\n";
    if (std::holds_alternative<EvSend>(seen.event)) sends.push_back(event_to_json(lat, seen.event));
  }
  write_file(trace_path, full);
  write_file(observer_path, projected);

  json summary{{"mode", mode.text},
               {"seed", o.seed},
               {"observer", lat.name(observer)},
               {"steps", result.trace.size()},
               {"inputs_consumed", result.inputs_consumed},
               {"processes_left", result.final_state.processes().size()},
               {"observed_sends", sends},
               {"trace", trace_path},
               {"observer_trace", observer_path}};
  if (secret) summary["secret"] = value_to_json(*secret);
  out << summary.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct Tally {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::size_t inconclusive = 0;
  std::size_t precondition = 0;
  std::size_t states = 0;
  double wall_ms = 0;
  std::optional<Verdict> first_bad;
  std::string first_bad_context;

  void add(const Verdict& v, const std::string& context) {
    ++cases;
    states += v.states_explored;
    wall_ms += v.wall_ms;
    if (v.outcome == Outcome::pass) return;
    if (v.outcome == Outcome::fail) ++failures;
    if (v.outcome == Outcome::inconclusive) ++inconclusive;
    if (v.outcome == Outcome::precondition_violated) ++precondition;
    const bool worse = !first_bad || (v.outcome == Outcome::fail && first_bad->outcome != Outcome::fail);
    if (worse) {
      first_bad = v;
      first_bad_context = context;
    }
  }

  Outcome outcome() const {
    if (failures) return Outcome::fail;
    if (precondition) return Outcome::precondition_violated;
    if (inconclusive) return Outcome::inconclusive;
    return Outcome::pass;
  }
};

int cmd_check(const Options& o, std::ostream& out) {
  static const std::set<std::string> kProperties{"projection1", "projection2", "invisibility", "tsni-step",
                                                 "tsni-trace", "wellformed"};
  if (!kProperties.count(o.property)) throw UsageError("unknown --property '" + o.property + "'");

  const Scenario sc = scenario_or_default(o);
  const ModeSpec mode = single_mode(o, sc);
  const Semantics sem = make_semantics(sc, mode.mode, mode.mutations);
  const Lattice& lat = sem.lattice();
  const std::size_t trials = o.trials.value_or(o.scenario.empty() ? 100 : 0);
  const std::size_t depth = o.depth == 0 ? 5 : o.depth;
  std::optional<Label> fixed_observer;
  if (!o.observer.empty()) fixed_observer = parse_label(lat, o.observer);

  std::vector<Label> all_labels;
  for (std::uint16_t i = 0; i < lat.size(); ++i) all_labels.push_back(Label{i});

  Tally tally;
  const bool pairwise = o.property == "tsni-step" || o.property == "tsni-trace";
  auto check_one = [&](const Instance& inst, Label l) {
    if (o.property == "projection1") return check_projection_part1(sem, inst, l);
    if (o.property == "projection2") return check_projection_part2(sem, inst, l);
    if (o.property == "invisibility") return check_invisibility(sem, inst, l);
    return check_wellformed(sem, inst, depth, o.budget);
  };
  auto check_pair = [&](const Instance& a, const Instance& b, Label l) {
    if (o.property == "tsni-step") return check_single_step_tsni(sem, a, b, l);
    return check_trace_tsni_sym(sem, a, b, l, depth, o.budget);
  };

  if (!o.scenario.empty()) {
    if (pairwise) {
      if (!sc.secret || sc.secret->values.size() < 2) {
        tally.add(check_pair(initial_instance(sc, sem), initial_instance(sc, sem),
                             fixed_observer.value_or(default_observer(o, sc))),
                  "scenario state against itself");
      } else {
        std::vector<Label> observers;
        if (fixed_observer) {
          observers.push_back(*fixed_observer);
        } else if (sc.observer) {
          observers.push_back(*sc.observer);
        } else {
          for (Label l : all_labels) {
            if (!lat.leq(sc.secret->label, l)) observers.push_back(l);
          }
        }
        const auto& values = sc.secret->values;
        const Instance first = initial_instance(sc, sem, values.front());
        for (std::size_t j = 1; j < values.size(); ++j) {
          const Instance other = initial_instance(sc, sem, values[j]);
          for (Label l : observers) {
            tally.add(check_pair(first, other, l), "secrets " + values.front().to_string() + " and " +
                                                       values[j].to_string() + " at '" + lat.name(l) + "'");
          }
        }
      }
    } else {
      std::optional<Value> secret;
      if (sc.secret) secret = sc.secret->values.front();
      const Instance inst = initial_instance(sc, sem, secret);
      if (o.property == "wellformed") {
        tally.add(check_one(inst, lat.bottom()), "scenario state");
      } else {
        for (Label l : fixed_observer ? std::vector<Label>{*fixed_observer} : all_labels) {
          tally.add(check_one(inst, l), "scenario state at '" + lat.name(l) + "'");
        }
      }
    }
  }

  Rng pick(o.seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t seed = o.seed + t;
    const Label l = fixed_observer.value_or(random_label(pick, lat));
    const std::string context = "random seed " + std::to_string(seed) + " at '" + lat.name(l) + "'";
    if (pairwise) {
      auto [a, b] = gen_l_equiv_pair(sem, seed, l);
      tally.add(check_pair(a, b, l), context);
    } else {
      tally.add(check_one(gen_random_state(sem, seed), l), context);
    }
  }

  json report{{"property", o.property},
              {"mode", mode.text},
              {"seed", o.seed},
              {"trials", trials},
              {"observer", fixed_observer ? lat.name(*fixed_observer) : "all"},
              {"cases", tally.cases},
              {"failures", tally.failures},
              {"inconclusive", tally.inconclusive},
              {"verdict", outcome_name(tally.outcome())},
              {"states_explored", tally.states},
              {"wall_ms", tally.wall_ms}};
  if (o.scenario.size()) report["scenario"] = o.scenario;
  if (o.property == "tsni-trace" || o.property == "wellformed") report["depth"] = depth;
  if (tally.first_bad) {
    json bad = verdict_to_json(lat, *tally.first_bad);
    bad["case"] = tally.first_bad_context;
    report["first_failure"] = bad;
  }
  emit(report, o.out, out);
  switch (tally.outcome()) {
    case Outcome::pass: return kExitOk;
    case Outcome::fail: return kExitFail;
    case Outcome::inconclusive: return kExitInconclusive;
    case Outcome::precondition_violated: return kExitData;
  }
  return kExitData;
}

// ---------------------------------------------------------------------------

int cmd_leak(const Options& o, std::ostream& out) {
  const Scenario sc = load_scenario(o.scenario);
  if (!sc.secret) throw ConfigError("scenario has no secret_slot");
  const Label observer = default_observer(o, sc);
  const std::size_t depth = o.depth == 0 ? 64 : o.depth;
  const std::vector<std::string> modes = o.modes.empty() ? std::vector<std::string>{"trapeze", "design1"} : o.modes;

  json secrets = json::array();
  for (const auto& v : sc.secret->values) secrets.push_back(value_to_json(v));
  json results = json::array();
  bool inconclusive = false;
  for (const auto& text : modes) {
    const ModeSpec mode = parse_mode(text, o.mutations);
    const Semantics sem = make_semantics(sc, mode.mode, mode.mutations);
    std::vector<Instance> instances;
    for (const auto& v : sc.secret->values) instances.push_back(initial_instance(sc, sem, v));
    const LeakReport r = measure_leak(sem, instances, observer, depth, o.budget);
    json entry{{"mode", mode.text},
               {"verdict", r.outcome == Outcome::pass ? "OK" : outcome_name(r.outcome)},
               {"states_explored", r.states_explored},
               {"wall_ms", r.wall_ms}};
    if (r.outcome == Outcome::pass) {
      entry["bits"] = r.bits;
      json classes = json::array();
      for (std::size_t c = 0; c < r.classes.size(); ++c) {
        json members = json::array();
        for (std::size_t i : r.classes[c]) members.push_back(value_to_json(sc.secret->values[i]));
        json witness = json::array();
        for (const auto& e : r.witnesses[c]) witness.push_back(event_to_json(sem.lattice(), e));
        classes.push_back(json{{"secrets", members}, {"witness", witness}});
      }
      entry["classes"] = classes;
    } else {
      inconclusive = true;
      entry["detail"] = r.detail;
    }
    results.push_back(entry);
  }
  json report{{"scenario", o.scenario},
              {"observer", sc.lattice->name(observer)},
              {"depth", depth},
              {"secrets", secrets},
              {"results", results}};
  emit(report, o.out, out);
  return inconclusive ? kExitInconclusive : kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_store(const Options& o, std::ostream& out) {
  if (o.store_action == "dump") {
    const Scenario sc = load_scenario(o.store_path);
    const ModeSpec mode = single_mode(o, sc);
    const Semantics sem = make_semantics(sc, mode.mode, mode.mutations);
    std::optional<Value> secret;
    if (!o.secret.empty()) secret = parse_secret(o.secret);
    const std::string text = dump_store(sem.lattice(), initial_instance(sc, sem, secret).state.store());
    if (o.out.empty()) {
      out << text;
    } else {
      write_file(o.out, text);
    }
    return kExitOk;
  }
  if (o.store_action == "load") {
    const Scenario sc = scenario_or_default(o);
    const Store store = load_store(*sc.lattice, read_file(o.store_path));
    const std::string text = dump_store(*sc.lattice, store);
    if (!o.out.empty()) write_file(o.out, text);
    out << json{{"keys", store.cells().size()}, {"facets", store.facet_count()}}.dump() << "\n";
    return kExitOk;
  }
  throw UsageError("store action must be 'dump' or 'load'");
}

// ---------------------------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out) {
  const Scenario sc = load_scenario(o.scenario);
  const Lattice& lat = *sc.lattice;
  json channels = json::object();
  for (const auto& [name, l] : sc.channels) channels[name] = lat.name(l);
  auto describe = [&](const std::vector<ProcessSpec>& specs) {
    json list = json::array();
    for (const auto& p : specs) {
      list.push_back(json{{"label", lat.name(p.label)}, {"statements", p.program->total_statements()}});
    }
    return list;
  };
  json labels = json::array();
  for (Label l : lat.labels()) labels.push_back(lat.name(l));
  json report{{"valid", true},
              {"labels", labels},
              {"channels", channels},
              {"mode", policy_name(sc.mode)},
              {"initial_facets", sc.initial_store.size()},
              {"processes", describe(sc.processes)},
              {"pending_inputs", describe(sc.pending_inputs)},
              {"declassifiers", sc.declassifiers.size()}};
  if (sc.secret) {
    report["secret_slot"] =
        json{{"key", sc.secret->key}, {"label", lat.name(sc.secret->label)}, {"values", sc.secret->values.size()}};
  }
  out << report.dump(2) << "\n";
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& o, bool with_scenario_positional, bool scenario_required) {
  if (with_scenario_positional) {
    auto* opt = cmd->add_option("scenario", o.scenario, "Scenario file");
    if (scenario_required) opt->required();
  }
  cmd->add_option("--mode", o.modes, "Semantics: trapeze, design1, design2-total, design2-partial, "
                                     "trapeze-unique-read; append +<mutation> to break a rule");
  cmd->add_option("--mutate", o.mutations, "no-send-check, no-write-gc, read-ignores-visibility, naive-store");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--observer", o.observer, "Observer label");
  cmd->add_option("--out", o.out, "Output path");
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information-flow simulator for serverless functions over a faceted store", "trapeze"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Execute one schedule and write the full and observer traces");
  add_common(run, o, true, true);
  run->add_option("--max-steps", o.max_steps, "Step limit");
  run->add_option("--secret", o.secret, "Value for the scenario's secret slot (JSON scalar)");
  run->add_option("--policy", o.policy, "random or fifo");

  auto* check = app.add_subcommand("check", "Check a property on the scenario and/or random states");
  add_common(check, o, true, false);
  check->add_option("--property", o.property,
                    "projection1, projection2, invisibility, tsni-step, tsni-trace, wellformed")
      ->required();
  check->add_option("--depth", o.depth, "Trace depth (default 5)");
  check->add_option("--trials", o.trials, "Random cases (default 100 without a scenario, else 0)");
  check->add_option("--budget", o.budget, "Search node budget");

  auto* leak = app.add_subcommand("leak", "Measure how many secret bits the observer can distinguish");
  add_common(leak, o, true, true);
  leak->add_option("--depth", o.depth, "Longest run explored (default 64)");
  leak->add_option("--budget", o.budget, "Search node budget");

  auto* store = app.add_subcommand("store", "dump <scenario> | load <file> [--scenario s]");
  store->add_option("action", o.store_action, "dump or load")->required();
  store->add_option("path", o.store_path, "Scenario (dump) or store file (load)")->required();
  store->add_option("--scenario", o.scenario, "Scenario providing the lattice for load");
  store->add_option("--mode", o.modes, "Semantics used to seed the store");
  store->add_option("--secret", o.secret, "Value for the secret slot");
  store->add_option("--out", o.out, "Output path");

  auto* validate = app.add_subcommand("validate", "Load a scenario and report its contents");
  validate->add_option("scenario", o.scenario, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(o, out);
    if (*check) return cmd_check(o, out);
    if (*leak) return cmd_leak(o, out);
    if (*store) return cmd_store(o, out);
    return cmd_validate(o, out);
  } catch (const UsageError& e) {
    err << "trapeze: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "trapeze: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "trapeze: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace trapeze::cli
