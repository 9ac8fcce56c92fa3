// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/order_oracle.hpp"
#include "oracle/store_oracle.hpp"
#include "trapeze/checker.hpp"
#include "trapeze/errors.hpp"
#include "trapeze/scenario.hpp"
#include "trapeze/store_io.hpp"

using namespace trapeze;

namespace {

struct Result {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0 means no time bound
  std::function<Result()> body;
};

std::shared_ptr<const Lattice> diamond() {
  static const auto lat = std::make_shared<const Lattice>(Lattice::diamond());
  return lat;
}

ChannelEnv diamond_channels() {
  const Lattice& lat = *diamond();
  return {{"pub", lat.at("bot")}, {"bob", lat.at("b")}, {"eve", lat.at("e")}, {"admin", lat.at("top")}};
}

Semantics diamond_semantics(Mutations m = {}) {
  return Semantics(diamond(), diamond_channels(), Semantics::Options{PolicyMode::trapeze, m, kDefaultFuel});
}

oracle::Matrix matrix(const Lattice& lattice) {
  std::vector<std::string> names;
  for (auto l : lattice.labels()) names.push_back(lattice.name(l));
  return oracle::order_from_edges(names, lattice.edges()).le;
}

oracle::Seq to_oracle(const LabeledValueSeq& s) {
  oracle::Seq out;
  for (const auto& f : s) out.push_back({encode_value(f.value), f.label.id});
  return out;
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// ---------------------------------------------------------------------------

Result write_formula() {
  Rng rng(1);
  std::size_t cases = 0;
  std::size_t bad = 0;
  while (cases < 10'000) {
    const Lattice lattice = random_lattice(rng, 8);
    const auto le = matrix(lattice);
    Store store;
    std::map<std::string, oracle::Seq> model;
    for (int op = 0; op < 20; ++op, ++cases) {
      const Key k = random_key(rng, 3);
      const Label l = random_label(rng, lattice);
      const Value v = random_value(rng);
      bool same = true;
      switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
        case 0: {
          const auto seq = write_seq(lattice, store.get(k), v, l);
          store = write(lattice, store, k, v, l);
          model[k] = oracle::write(le, model[k], encode_value(v), l.id);
          same = to_oracle(seq) == model[k];
          break;
        }
        case 1:
          store = del(lattice, store, k, l);
          model[k] = oracle::del(le, model[k], l.id);
          break;
        case 2: {
          const auto got = read(lattice, store, k, l);
          const auto want = oracle::read(le, model[k], l.id);
          same = got.has_value() == want.has_value() &&
                 (!got || oracle::Facet{encode_value(got->value), got->label.id} == *want);
          break;
        }
        default:
          same = keys(lattice, store, l) == oracle::keys(le, model, l.id);
      }
      same = same && to_oracle(store.get(k)) == model[k] &&
             to_oracle(project_seq(lattice, store.get(k), l)) == oracle::project(le, model[k], l.id);
      if (!same) ++bad;
    }
  }
  return {bad == 0, fmt("%zu cases, %zu discrepancies", cases, bad)};
}

Result projection_algebra() {
  const Semantics sem = diamond_semantics();
  const Lattice& lat = sem.lattice();
  std::size_t states = 0;
  std::size_t bad = 0;
  for (std::uint64_t seed = 0; seed < 2'500; ++seed) {
    const SystemState s = gen_random_state(sem, seed).state;
    ++states;
    for (Label l : lat.labels()) {
      const SystemState p = project_state(lat, s, l);
      if (!(project_state(lat, p, l) == p)) ++bad;
      for (Label k : lat.labels()) {
        if (lat.leq(k, l) && !(project_state(lat, p, k) == project_state(lat, s, k))) ++bad;
      }
    }
  }
  // Equivalence laws on blocks of small states, so that equivalent pairs are common.
  const RandomBounds small{2, 1, 2, 0, 2};
  for (std::uint64_t block = 0; block < 125; ++block) {
    const Label at = lat.labels()[block % lat.size()];
    std::vector<SystemState> xs;
    for (std::uint64_t i = 0; i < 10; ++i) {
      auto [a, b] = gen_l_equiv_pair(sem, block * 100 + i, at, small);
      xs.push_back(a.state);
      xs.push_back(b.state);
    }
    states += xs.size();
    for (Label l : lat.labels()) {
      const std::size_t n = xs.size();
      std::vector<std::vector<bool>> eq(n, std::vector<bool>(n));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) eq[i][j] = l_equiv(lat, xs[i], xs[j], l);
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (!eq[i][i]) ++bad;
        for (std::size_t j = 0; j < n; ++j) {
          if (eq[i][j] != eq[j][i]) ++bad;
          for (std::size_t k = 0; k < n; ++k) {
            if (eq[i][j] && eq[j][k] && !eq[i][k]) ++bad;
          }
        }
      }
      // The pair generator promises equivalence at its own label.
      if (l == at) {
        for (std::size_t i = 0; i < n; i += 2) {
          if (!eq[i][i + 1]) ++bad;
        }
      }
    }
  }
  return {bad == 0, fmt("%zu states, %zu law violations", states, bad)};
}

Result projection_lemmas() {
  const Semantics sem = diamond_semantics();
  std::size_t checks = 0;
  std::size_t bad = 0;
  std::size_t transitions = 0;
  for (std::uint64_t seed = 0; seed < 1'000; ++seed) {
    const Instance inst = gen_random_state(sem, seed);
    transitions += sem.enabled(inst.state, inst.inputs).size();
    for (Label l : sem.lattice().labels()) {
      for (const Verdict& v : {check_projection_part1(sem, inst, l), check_projection_part2(sem, inst, l),
                               check_invisibility(sem, inst, l)}) {
        ++checks;
        if (!v.passed()) ++bad;
      }
    }
  }
  return {bad == 0, fmt("1000 states, %zu transitions, %zu checks, %zu counterexamples", transitions, checks, bad)};
}

Result single_step_tsni() {
  const Semantics sem = diamond_semantics();
  std::size_t bad = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Label l = sem.lattice().labels()[seed % sem.lattice().size()];
    const auto [a, b] = gen_l_equiv_pair(sem, seed, l);
    if (!check_single_step_tsni(sem, a, b, l).passed()) ++bad;
  }
  return {bad == 0, fmt("500 pairs, %zu counterexamples", bad)};
}

Result trace_tsni() {
  std::size_t cases = 0;
  std::size_t fails = 0;
  std::size_t inconclusive = 0;
  auto tally = [&](const Verdict& v) {
    ++cases;
    if (v.outcome == Outcome::fail) ++fails;
    if (v.outcome == Outcome::inconclusive || v.outcome == Outcome::precondition_violated) ++inconclusive;
  };
  const Semantics sem = diamond_semantics();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Label l = sem.lattice().labels()[seed % sem.lattice().size()];
    const auto [a, b] = gen_l_equiv_pair(sem, seed, l);
    tally(check_trace_tsni_sym(sem, a, b, l, 5));
  }
  for (const char* file : {"exploit2.scenario", "exploit3_scaled.scenario"}) {
    const Scenario sc = load_scenario(std::string(TRAPEZE_SCENARIO_DIR) + "/" + file);
    const Semantics s = make_semantics(sc, PolicyMode::trapeze);
    const Instance base = initial_instance(sc, s, sc.secret->values.front());
    for (std::size_t j = 1; j < sc.secret->values.size(); ++j) {
      tally(check_trace_tsni_sym(s, base, initial_instance(sc, s, sc.secret->values[j]), *sc.observer, 5));
    }
  }
  return {fails == 0 && inconclusive == 0,
          fmt("%zu cases at depth 5, %zu FAIL, %zu INCONCLUSIVE", cases, fails, inconclusive)};
}

Result attack_reproduction() {
  struct Run {
    const char* file;
    const char* mode;
    double expected;
  };
  const std::vector<Run> runs{{"exploit3_4bit.scenario", "trapeze", 0.0},
                              {"exploit3_4bit.scenario", "design1", 4.0},
                              {"exploit2.scenario", "trapeze", 0.0},
                              {"exploit2.scenario", "trapeze+naive-store", 1.0}};
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    const Scenario sc = load_scenario(std::string(TRAPEZE_SCENARIO_DIR) + "/" + r.file);
    const std::string mode_text = r.mode;
    const auto plus = mode_text.find('+');
    Mutations m;
    if (plus != std::string::npos) enable_mutation(m, mode_text.substr(plus + 1));
    const Semantics sem = make_semantics(sc, *policy_from_name(mode_text.substr(0, plus)), m);
    std::vector<Instance> per_secret;
    for (const auto& v : sc.secret->values) per_secret.push_back(initial_instance(sc, sem, v));
    const LeakReport rep = measure_leak(sem, per_secret, *sc.observer, 64);
    const bool good = rep.outcome == Outcome::pass && rep.bits == r.expected;
    ok = ok && good;
    if (!detail.empty()) detail += ", ";
    detail += fmt("%s %s %.1f bits", r.file, r.mode, rep.bits);
    if (rep.outcome != Outcome::pass) detail += std::string(" (") + outcome_name(rep.outcome) + ")";
  }
  return {ok, detail};
}

Result mutation_sensitivity() {
  bool ok = true;
  std::string detail;
  for (const std::string& name : mutation_names()) {
    Mutations m;
    enable_mutation(m, name);
    const Semantics sem = diamond_semantics(m);
    std::optional<Verdict> found;
    for (std::uint64_t seed = 0; seed < 2'000 && !found; ++seed) {
      const Instance inst = gen_random_state(sem, seed);
      const Label l = sem.lattice().labels()[seed % sem.lattice().size()];
      const auto [a, b] = gen_l_equiv_pair(sem, seed, l);
      for (const Verdict& v : {check_projection_part1(sem, inst, l), check_projection_part2(sem, inst, l),
                               check_invisibility(sem, inst, l), check_single_step_tsni(sem, a, b, l),
                               check_wellformed(sem, inst, 3)}) {
        if (v.outcome == Outcome::fail && !v.counterexample.empty()) {
          found = v;
          break;
        }
      }
    }
    if (!detail.empty()) detail += ", ";
    if (found) {
      detail += fmt("%s fails %s (%zu-step counterexample)", name.c_str(), found->property.c_str(),
                    found->counterexample.size());
    } else {
      ok = false;
      detail += name + " undetected";
    }
  }
  return {ok, detail};
}

Result declassifier_rule() {
  Rng rng(8);
  std::size_t triples = 0;
  std::size_t bad = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Lattice lattice = random_lattice(rng, 6);
    std::vector<std::string> names;
    for (auto l : lattice.labels()) names.push_back(lattice.name(l));
    const oracle::Order order = oracle::order_from_edges(names, lattice.edges());
    const BlockRef body = make_block({});
    for (Label h : lattice.labels()) {
      for (Label lo : lattice.labels()) {
        const bool strictly_below = order.le[lo.id][h.id] && lo != h;
        Declassifier d{"d", h, lo, body};
        bool accepted = true;
        try {
          validate_declassifier(lattice, d);
        } catch (const ConfigError&) {
          accepted = false;
        }
        if (accepted != strictly_below) ++bad;
        if (!strictly_below) continue;
        for (Label caller : lattice.labels()) {
          ++triples;
          if (invoke_declassifier(lattice, d, caller).id != oracle::declassified_label(order, h.id, lo.id, caller.id)) {
            ++bad;
          }
        }
      }
    }
  }
  return {bad == 0, fmt("%zu (caller, h, l) triples on 300 lattices, %zu mismatches", triples, bad)};
}

Value persistence_value(Rng& rng) {
  static const char* const kStrings[] = {"", "plain", "tab\there", "line\nbreak", "back\\slash", "cr\r",
                                         "i:7", "b:true", "\xce\xbb-unicode", " spaced "};
  switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0:
      return Value(std::uniform_int_distribution<std::int64_t>(-1'000'000, 1'000'000)(rng));
    case 1: {
      const std::int64_t edges[] = {0, -1, std::numeric_limits<std::int64_t>::min(),
                                    std::numeric_limits<std::int64_t>::max()};
      return Value(edges[std::uniform_int_distribution<int>(0, 3)(rng)]);
    }
    case 2:
      return Value(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
    default:
      return Value(std::string(kStrings[std::uniform_int_distribution<int>(0, 9)(rng)]));
  }
}

Result persistence() {
  Rng rng(9);
  static const char* const kKeys[] = {"k", "key with space", "tab\tkey", "nl\nkey", "100", ""};
  std::size_t bad = 0;
  std::size_t multi = 0;
  std::set<int> kinds;
  for (int trial = 0; trial < 1'000; ++trial) {
    const Lattice lattice = random_lattice(rng, 6);
    Store store;
    for (int i = 0, n = std::uniform_int_distribution<int>(0, 16)(rng); i < n; ++i) {
      const Value v = persistence_value(rng);
      kinds.insert(v.is_int() ? 0 : v.is_bool() ? 1 : 2);
      store = write(lattice, store, kKeys[std::uniform_int_distribution<int>(0, 5)(rng)], v,
                    random_label(rng, lattice));
    }
    for (const auto& [k, seq] : store.cells()) multi += seq.size() > 1 ? 1 : 0;
    const std::string text = dump_store(lattice, store);
    const Store back = load_store(lattice, text);
    if (!(back == store) || dump_store(lattice, back) != text) ++bad;
  }
  const bool covered = multi > 0 && kinds.size() == 3;
  return {bad == 0 && covered,
          fmt("1000 stores, %zu multi-facet keys, %zu value types, %zu mismatches", multi, kinds.size(), bad)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "write-formula conformance", 10, write_formula},
      {2, "projection algebra", 30, projection_algebra},
      {3, "projection and invisibility lemmas", 120, projection_lemmas},
      {4, "single-step TSNI", 120, single_step_tsni},
      {5, "trace TSNI", 600, trace_tsni},
      {6, "attack reproduction", 0, attack_reproduction},
      {7, "mutation sensitivity", 0, mutation_sensitivity},
      {8, "declassifier rule", 0, declassifier_rule},
      {9, "persistence round trip", 0, persistence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.body();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.limit_s > 0) {
      timing += fmt(" of %.0f s", c.limit_s);
      if (secs >= c.limit_s) r.ok = false;
    }
    if (!r.ok) ++failed;
    std::printf("%s criterion %d (%s): %s [%s]\n", r.ok ? "PASS" : "FAIL", c.id, c.name, r.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
