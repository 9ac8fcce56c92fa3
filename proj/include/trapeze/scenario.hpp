#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trapeze/random_gen.hpp"
#include "trapeze/semantics.hpp"

namespace trapeze {

struct InitialFacet {
  Key key;
  Value value;
  Label label;
};

struct ProcessSpec {
  Label label;
  /// design-2 modes only; defaults to `label` when omitted.
  std::optional<Label> max_label;
  BlockRef program;
};

/// The facet whose value varies across leak measurements.
struct SecretSlot {
  Key key;
  Label label;
  std::vector<Value> values;
};

struct Scenario {
  std::shared_ptr<const Lattice> lattice;
  ChannelEnv channels;
  std::vector<InitialFacet> initial_store;
  std::vector<ProcessSpec> processes;
  std::vector<ProcessSpec> pending_inputs;
  std::vector<Declassifier> declassifiers;
  PolicyMode mode = PolicyMode::trapeze;
  std::optional<Label> observer;
  std::optional<SecretSlot> secret;
};

/// Throws ParseError (with a document path) for schema problems and
/// ConfigError/LatticeError for unresolved references or a bad lattice.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Diamond lattice with channels pub (bot), bob (b), eve (e), admin (top)
/// and nothing else.
Scenario default_scenario();

Semantics make_semantics(const Scenario& sc, PolicyMode mode, Mutations mutations = {},
                         std::size_t fuel = kDefaultFuel);

/// Σ and pending inputs for `sem` (whose mode decides how facets are seeded
/// and whether processes carry a maximal label). When `secret` is given the
/// secret slot is written last with that value.
Instance initial_instance(const Scenario& sc, const Semantics& sem, const std::optional<Value>& secret = std::nullopt);

}  // namespace trapeze
