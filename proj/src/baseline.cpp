#include "trapeze/baseline.hpp"

#include <algorithm>
#include <stdexcept>

namespace trapeze {

namespace {

Label max_of(const Process& p) { return p.max_label.value_or(p.label); }

}  // namespace

BaselineRead baseline_read(const Lattice& lattice, PolicyMode mode, const LabeledValueSeq& cell,
                           const Process& proc) {
  BaselineRead out;
  out.process = proc;

  switch (mode) {
    case PolicyMode::design1:
      if (cell.empty()) return out;
      out.kind = BaselineRead::Kind::value;
      out.result = cell.back();
      out.process.label = lattice.join(proc.label, cell.back().label);
      return out;

    case PolicyMode::design2_total:
      if (cell.empty() || !lattice.leq(cell.back().label, max_of(proc))) return out;
      out.kind = BaselineRead::Kind::value;
      out.result = cell.back();
      out.process.label = lattice.join(proc.label, cell.back().label);
      return out;

    case PolicyMode::design2_partial:
    case PolicyMode::trapeze_unique_read: {
      const Label bound = mode == PolicyMode::design2_partial ? max_of(proc) : proc.label;
      std::optional<LabeledValue> only;
      std::size_t visible = 0;
      for (const auto& facet : cell) {
        if (lattice.leq(facet.label, bound)) {
          ++visible;
          only = facet;
        }
      }
      if (visible == 0) return out;
      if (visible > 1) {
        out.kind = BaselineRead::Kind::error;
        return out;
      }
      out.kind = BaselineRead::Kind::value;
      out.result = only;
      if (mode == PolicyMode::design2_partial) out.process.label = lattice.join(proc.label, only->label);
      return out;
    }

    case PolicyMode::trapeze:
      break;
  }
  throw std::logic_error("baseline_read called for the faceted semantics");
}

std::optional<LabeledValueSeq> baseline_write(const Lattice& lattice, PolicyMode mode, const LabeledValueSeq& cell,
                                              const Process& proc, const Value& v) {
  const Label e = proc.label;
  switch (mode) {
    case PolicyMode::design1:
      if (!cell.empty() && !lattice.leq(e, cell.back().label)) return std::nullopt;
      return LabeledValueSeq{{v, e}};

    case PolicyMode::design2_total:
      if (!cell.empty() && lattice.lt(cell.back().label, e)) return std::nullopt;
      return LabeledValueSeq{{v, e}};

    case PolicyMode::design2_partial: {
      if (std::any_of(cell.begin(), cell.end(), [&](const LabeledValue& f) { return lattice.lt(f.label, e); })) {
        return std::nullopt;
      }
      LabeledValueSeq out;
      for (const auto& f : cell) {
        if (!lattice.leq(e, f.label)) out.push_back(f);
      }
      out.push_back({v, e});
      return out;
    }

    case PolicyMode::trapeze:
    case PolicyMode::trapeze_unique_read:
      return write_seq(lattice, cell, v, e);
  }
  return std::nullopt;
}

bool baseline_send(const Lattice& lattice, PolicyMode mode, const Process& proc, Label channel_label) {
  if (uses_max_label(mode)) return lattice.leq(max_of(proc), channel_label);
  return lattice.leq(proc.label, channel_label);
}

std::optional<Process> baseline_raise(const Lattice& lattice, PolicyMode mode, const Process& proc, Label target) {
  Process out = proc;
  out.label = lattice.join(proc.label, target);
  if (uses_max_label(mode) && !lattice.leq(out.label, max_of(proc))) return std::nullopt;
  return out;
}

LabeledValueSeq seed_cell(const Lattice& lattice, PolicyMode mode, const LabeledValueSeq& cell, const Value& v,
                          Label l) {
  switch (mode) {
    case PolicyMode::design1:
    case PolicyMode::design2_total:
      return LabeledValueSeq{{v, l}};
    case PolicyMode::design2_partial: {
      LabeledValueSeq out;
      for (const auto& f : cell) {
        if (!lattice.comparable(f.label, l)) out.push_back(f);
      }
      out.push_back({v, l});
      return out;
    }
    case PolicyMode::trapeze:
    case PolicyMode::trapeze_unique_read:
      break;
  }
  return write_seq(lattice, cell, v, l);
}

LabeledValueSeq naive_write(const Lattice& lattice, const LabeledValueSeq& cell, const Value& v, Label l) {
  if (!cell.empty() && !lattice.comparable(cell.back().label, l)) return cell;
  return LabeledValueSeq{{v, l}};
}

}  // namespace trapeze
