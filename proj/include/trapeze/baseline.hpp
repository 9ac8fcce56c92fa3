#pragma once

#include <optional>

#include "trapeze/facet_store.hpp"
#include "trapeze/state.hpp"

namespace trapeze {

// Comparison semantics: classical floating labels with no-sensitive-upgrade
// (design1), and the max-label designs with single-value cells (design2_total)
// or incomparable facet sets (design2_partial). Cells reuse LabeledValueSeq:
// at most one entry for design1/design2_total, a set of pairwise-incomparable
// facets for design2_partial.
//
// `trapeze_unique_read` keeps the faceted store and static labels but reads
// with the partial-order table's discipline (error on more than one visible
// facet).

struct BaselineRead {
  enum class Kind { value, empty, error };

  Kind kind = Kind::empty;
  std::optional<LabeledValue> result;  // set iff kind == value
  Process process;                     // with the updated effective label
};

BaselineRead baseline_read(const Lattice& lattice, PolicyMode mode, const LabeledValueSeq& cell,
                           const Process& proc);

/// New cell contents, or nullopt when the write is a no-sensitive-upgrade
/// violation (the process then gets stuck).
std::optional<LabeledValueSeq> baseline_write(const Lattice& lattice, PolicyMode mode, const LabeledValueSeq& cell,
                                              const Process& proc, const Value& v);

/// design1 gates on the effective label, the design-2 modes on the maximal one.
bool baseline_send(const Lattice& lattice, PolicyMode mode, const Process& proc, Label channel_label);

/// raiseLabel for the floating-label designs: joins `target` into the
/// effective label; the design-2 modes refuse to exceed the maximal label.
std::optional<Process> baseline_raise(const Lattice& lattice, PolicyMode mode, const Process& proc, Label target);

/// Installs an initial facet into a cell without any process context.
LabeledValueSeq seed_cell(const Lattice& lattice, PolicyMode mode, const LabeledValueSeq& cell, const Value& v,
                          Label l);

/// Deliberately broken non-faceted store: one value per key, and a write is
/// silently dropped when the cell holds a value with an incomparable label.
LabeledValueSeq naive_write(const Lattice& lattice, const LabeledValueSeq& cell, const Value& v, Label l);

}  // namespace trapeze
