#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trapeze/lattice.hpp"
#include "trapeze/value.hpp"

namespace trapeze {

using Key = std::string;

struct LabeledValue {
  Value value;
  Label label;

  friend auto operator<=>(const LabeledValue&, const LabeledValue&) = default;
};

/// Facets of one key in temporal write order, oldest first.
using LabeledValueSeq = std::vector<LabeledValue>;

/// write(S, v, l): drop every facet whose label is at or above l, then append
/// (v, l). Readers that could see a dropped facet can also see the new one.
LabeledValueSeq write_seq(const Lattice& lattice, const LabeledValueSeq& seq, const Value& v, Label l);

/// S restricted to the facets visible at l, order preserved.
LabeledValueSeq project_seq(const Lattice& lattice, const LabeledValueSeq& seq, Label l);

/// True when no later facet's label is at or below an earlier facet's label,
/// i.e. the sequence could have been produced by write_seq alone.
bool gc_invariant_holds(const Lattice& lattice, const LabeledValueSeq& seq);

/// The faceted store: a total map Key -> LabeledValueSeq defaulting to the
/// empty sequence. Keys mapped to the empty sequence are never stored, so
/// `k -> []` and "k unmapped" compare equal.
class Store {
 public:
  using Map = std::map<Key, LabeledValueSeq>;

  Store() = default;

  const LabeledValueSeq& get(const Key& k) const;
  /// Replaces the sequence at k; an empty sequence unmaps k.
  void set(const Key& k, LabeledValueSeq seq);

  const Map& cells() const noexcept { return cells_; }
  bool empty() const noexcept { return cells_.empty(); }
  std::size_t facet_count() const noexcept;
  std::uint64_t hash() const noexcept;

  friend auto operator<=>(const Store&, const Store&) = default;

 private:
  Map cells_;
};

/// Most recent facet of k visible at l, or nullopt (ABSENT).
std::optional<LabeledValue> read(const Lattice& lattice, const Store& store, const Key& k, Label l);
Store write(const Lattice& lattice, const Store& store, const Key& k, const Value& v, Label l);
Store project_store(const Lattice& lattice, const Store& store, Label l);
/// Removes every facet of k whose label is at or above l.
Store del(const Lattice& lattice, const Store& store, const Key& k, Label l);
/// Keys with at least one facet visible at l.
std::set<Key> keys(const Lattice& lattice, const Store& store, Label l);

}  // namespace trapeze
