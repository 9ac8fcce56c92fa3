#include "trapeze/random_gen.hpp"

#include <algorithm>

#include "trapeze/errors.hpp"

namespace trapeze {

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

const char* const kVars[] = {"x", "y"};

ExprRef random_expr(Rng& rng, int depth) {
  switch (uniform(rng, 0, depth > 0 ? 4 : 1)) {
    case 0:
      return lit(random_value(rng));
    case 1:
      return var(kVars[uniform(rng, 0, 1)]);
    case 2:
      return bin(BinOp::add, var(kVars[uniform(rng, 0, 1)]), lit(static_cast<std::int64_t>(uniform(rng, 0, 3))));
    case 3:
      return bin(BinOp::eq, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    default:
      return is_absent(var(kVars[uniform(rng, 0, 1)]));
  }
}

ExprRef random_key_expr(Rng& rng, const RandomBounds& bounds) {
  return lit(Value(random_key(rng, bounds.max_keys)));
}

std::vector<std::string> channel_names(const Semantics& sem) {
  std::vector<std::string> out;
  for (const auto& [name, label] : sem.channels()) out.push_back(name);
  return out;
}

Stmt random_stmt(Rng& rng, const Semantics& sem, const RandomBounds& bounds, int nesting) {
  const auto channels = channel_names(sem);
  const std::size_t kinds = nesting > 0 ? 9 : 6;
  switch (uniform(rng, 0, kinds - 1)) {
    case 0:
      return stmt::Let{kVars[uniform(rng, 0, 1)], random_expr(rng, 1)};
    case 1:
      return stmt::Read{random_key_expr(rng, bounds), kVars[uniform(rng, 0, 1)]};
    case 2:
      return stmt::Write{random_key_expr(rng, bounds), random_expr(rng, 1)};
    case 3:
      if (channels.empty()) return stmt::Stop{};
      return stmt::Send{channels[uniform(rng, 0, channels.size() - 1)], random_expr(rng, 0)};
    case 4:
      return stmt::RaiseLabel{random_label(rng, sem.lattice())};
    case 5:
      return stmt::Write{random_key_expr(rng, bounds), var(kVars[uniform(rng, 0, 1)])};
    case 6: {
      std::vector<Stmt> body;
      for (std::size_t i = 0, n = uniform(rng, 1, 2); i < n; ++i) body.push_back(random_stmt(rng, sem, bounds, 0));
      return stmt::Fork{make_block(std::move(body))};
    }
    case 7: {
      std::vector<Stmt> then_body{random_stmt(rng, sem, bounds, 0)};
      std::vector<Stmt> else_body;
      if (coin(rng)) else_body.push_back(random_stmt(rng, sem, bounds, 0));
      return stmt::If{random_expr(rng, 1), make_block(std::move(then_body)), make_block(std::move(else_body))};
    }
    default: {
      std::vector<Stmt> body{random_stmt(rng, sem, bounds, 0)};
      return stmt::For{"i", lit(std::int64_t{0}), lit(static_cast<std::int64_t>(uniform(rng, 0, 1))),
                       make_block(std::move(body))};
    }
  }
}

Process make_process(Rng& rng, const Semantics& sem, const RandomBounds& bounds, Label label) {
  Env env;
  env["x"] = random_value(rng);
  Process p{Thread::start(random_program(rng, sem, bounds, uniform(rng, 1, bounds.max_program_length)), env), label,
            std::nullopt, std::nullopt};
  if (uses_max_label(sem.mode())) {
    std::vector<Label> above;
    for (std::uint16_t i = 0; i < sem.lattice().size(); ++i) {
      if (sem.lattice().leq(label, Label{i})) above.push_back(Label{i});
    }
    p.max_label = above[uniform(rng, 0, above.size() - 1)];
  }
  return p;
}

Label label_where(Rng& rng, const Lattice& lattice, Label l, bool visible) {
  std::vector<Label> pool;
  for (std::uint16_t i = 0; i < lattice.size(); ++i) {
    if (lattice.leq(Label{i}, l) == visible) pool.push_back(Label{i});
  }
  return pool[uniform(rng, 0, pool.size() - 1)];
}

struct SeedWrite {
  Key key;
  Value value;
  Label label;
};

Store replay(const Semantics& sem, const std::vector<SeedWrite>& writes) {
  Store s;
  for (const auto& w : writes) s = sem.seed(s, w.key, w.value, w.label);
  return s;
}

}  // namespace

Value random_value(Rng& rng) {
  switch (uniform(rng, 0, 3)) {
    case 0:
    case 1:
      return Value(static_cast<std::int64_t>(uniform(rng, 0, 4)));
    case 2:
      return Value(coin(rng));
    default: {
      static const char* const kStrings[] = {"", "a", "b", "a\tb"};
      return Value(std::string(kStrings[uniform(rng, 0, 3)]));
    }
  }
}

Label random_label(Rng& rng, const Lattice& lattice) {
  return Label{static_cast<std::uint16_t>(uniform(rng, 0, lattice.size() - 1))};
}

Key random_key(Rng& rng, std::size_t max_keys) {
  return "k" + std::to_string(uniform(rng, 0, std::max<std::size_t>(max_keys, 1) - 1));
}

Store random_store(Rng& rng, const Semantics& sem, const RandomBounds& bounds) {
  std::vector<SeedWrite> writes;
  for (std::size_t i = 0, n = uniform(rng, 0, bounds.max_keys * bounds.max_facets); i < n; ++i) {
    writes.push_back({random_key(rng, bounds.max_keys), random_value(rng), random_label(rng, sem.lattice())});
  }
  return replay(sem, writes);
}

BlockRef random_program(Rng& rng, const Semantics& sem, const RandomBounds& bounds, std::size_t length) {
  std::vector<Stmt> body;
  for (std::size_t i = 0; i < std::max<std::size_t>(length, 1); ++i) body.push_back(random_stmt(rng, sem, bounds, 1));
  return make_block(std::move(body));
}

Process random_process(Rng& rng, const Semantics& sem, const RandomBounds& bounds) {
  return make_process(rng, sem, bounds, random_label(rng, sem.lattice()));
}

Instance gen_random_state(const Semantics& sem, std::uint64_t seed, const RandomBounds& bounds) {
  Rng rng(seed);
  Store store = random_store(rng, sem, bounds);
  std::vector<Process> ps;
  for (std::size_t i = 0, n = uniform(rng, 0, bounds.max_processes); i < n; ++i) {
    ps.push_back(random_process(rng, sem, bounds));
  }
  std::vector<Process> inputs;
  for (std::size_t i = 0, n = uniform(rng, 0, bounds.max_inputs); i < n; ++i) {
    inputs.push_back(random_process(rng, sem, bounds));
  }
  return Instance{SystemState(std::move(store), std::move(ps)), std::move(inputs)};
}

std::pair<Instance, Instance> gen_l_equiv_pair(const Semantics& sem, std::uint64_t seed, Label l,
                                               const RandomBounds& bounds) {
  Rng rng(seed);
  const Lattice& lat = sem.lattice();
  const bool has_invisible = !lat.leq(lat.top(), l);

  std::vector<SeedWrite> visible_writes;
  for (std::size_t i = 0, n = uniform(rng, 0, bounds.max_keys * 2); i < n; ++i) {
    visible_writes.push_back({random_key(rng, bounds.max_keys), random_value(rng), label_where(rng, lat, l, true)});
  }
  std::vector<Process> visible_ps;
  const std::size_t n_visible = uniform(rng, 0, bounds.max_processes / 2);
  for (std::size_t i = 0; i < n_visible; ++i) {
    visible_ps.push_back(make_process(rng, sem, bounds, label_where(rng, lat, l, true)));
  }
  std::vector<Process> inputs;
  for (std::size_t i = 0, n = uniform(rng, 0, bounds.max_inputs); i < n; ++i) {
    inputs.push_back(random_process(rng, sem, bounds));
  }

  auto side = [&] {
    std::vector<SeedWrite> writes = visible_writes;
    std::vector<Process> ps = visible_ps;
    if (has_invisible) {
      for (std::size_t i = 0, n = uniform(rng, 0, bounds.max_keys * 2); i < n; ++i) {
        const std::size_t at = uniform(rng, 0, writes.size());
        writes.insert(writes.begin() + static_cast<std::ptrdiff_t>(at),
                      SeedWrite{random_key(rng, bounds.max_keys), random_value(rng), label_where(rng, lat, l, false)});
      }
      for (std::size_t i = 0, n = uniform(rng, 0, bounds.max_processes - n_visible); i < n; ++i) {
        ps.push_back(make_process(rng, sem, bounds, label_where(rng, lat, l, false)));
      }
    }
    return Instance{SystemState(replay(sem, writes), std::move(ps)), inputs};
  };
  Instance a = side();
  Instance b = side();
  return {std::move(a), std::move(b)};
}

Lattice random_lattice(Rng& rng, std::size_t max_labels) {
  // Random DAG over the middle labels, closed off by a fresh bottom and top.
  // Pairs without a least upper bound are retried.
  const std::size_t n = uniform(rng, 2, std::max<std::size_t>(max_labels, 2));
  for (;;) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("l" + std::to_string(i));
    std::vector<Lattice::Edge> edges;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      edges.push_back({names[0], names[i]});
      edges.push_back({names[i], names[n - 1]});
      for (std::size_t j = i + 1; j + 1 < n; ++j) {
        if (coin(rng, 0.35)) edges.push_back({names[i], names[j]});
      }
    }
    if (n == 2) edges.push_back({names[0], names[1]});
    try {
      return Lattice(names, edges);
    } catch (const LatticeError&) {
    }
  }
}

}  // namespace trapeze
