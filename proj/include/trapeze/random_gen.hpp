#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "trapeze/semantics.hpp"

namespace trapeze {

struct RandomBounds {
  std::size_t max_processes = 4;
  std::size_t max_keys = 3;
  std::size_t max_program_length = 6;
  std::size_t max_inputs = 2;
  std::size_t max_facets = 4;  // initial writes per key
};

/// A system state together with the pending inputs offered to it.
struct Instance {
  SystemState state;
  std::vector<Process> inputs;
};

using Rng = std::mt19937_64;

Value random_value(Rng& rng);
Label random_label(Rng& rng, const Lattice& lattice);
/// Keys are "k0", "k1", ...
Key random_key(Rng& rng, std::size_t max_keys);

/// A random store built by replaying random writes through `sem.seed`, so it
/// always satisfies the cell-shape invariant of the active mode.
Store random_store(Rng& rng, const Semantics& sem, const RandomBounds& bounds);

/// Top-level statement count is at most `length` (and at least one).
BlockRef random_program(Rng& rng, const Semantics& sem, const RandomBounds& bounds, std::size_t length);

/// A process with a random program, label and (in the design-2 modes) a
/// maximal label at or above it. The environment pre-binds `x`.
Process random_process(Rng& rng, const Semantics& sem, const RandomBounds& bounds);

/// Deterministic in (seed, bounds, sem).
Instance gen_random_state(const Semantics& sem, std::uint64_t seed, const RandomBounds& bounds = {});

/// Two instances that agree at observer `l`: a shared list of visible
/// initial writes and visible processes, each side extended independently
/// with invisible writes (at random positions) and invisible processes.
/// Pending inputs are identical.
std::pair<Instance, Instance> gen_l_equiv_pair(const Semantics& sem, std::uint64_t seed, Label l,
                                               const RandomBounds& bounds = {});

/// A random finite lattice with at most `max_labels` labels (at least two),
/// named "l0".."ln"; l0 is bottom and the last label is top.
Lattice random_lattice(Rng& rng, std::size_t max_labels);

}  // namespace trapeze
