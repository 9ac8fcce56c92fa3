#include "trapeze/facet_store.hpp"

#include <algorithm>

#include "trapeze/hash.hpp"

namespace trapeze {

std::string Value::to_string() const {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else {
          return std::to_string(x);
        }
      },
      data_);
}

std::uint64_t Value::hash() const noexcept {
  std::uint64_t h = data_.index();
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) {
          hash_combine(h, hash_string(x));
        } else {
          hash_combine(h, static_cast<std::uint64_t>(x));
        }
      },
      data_);
  return h;
}

LabeledValueSeq write_seq(const Lattice& lattice, const LabeledValueSeq& seq, const Value& v, Label l) {
  LabeledValueSeq out;
  out.reserve(seq.size() + 1);
  for (const auto& facet : seq) {
    if (!lattice.leq(l, facet.label)) out.push_back(facet);
  }
  out.push_back(LabeledValue{v, l});
  return out;
}

LabeledValueSeq project_seq(const Lattice& lattice, const LabeledValueSeq& seq, Label l) {
  LabeledValueSeq out;
  for (const auto& facet : seq) {
    if (lattice.leq(facet.label, l)) out.push_back(facet);
  }
  return out;
}

bool gc_invariant_holds(const Lattice& lattice, const LabeledValueSeq& seq) {
  for (std::size_t j = 0; j < seq.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (lattice.leq(seq[j].label, seq[i].label)) return false;
    }
  }
  return true;
}

const LabeledValueSeq& Store::get(const Key& k) const {
  static const LabeledValueSeq empty;
  auto it = cells_.find(k);
  return it == cells_.end() ? empty : it->second;
}

void Store::set(const Key& k, LabeledValueSeq seq) {
  if (seq.empty()) {
    cells_.erase(k);
  } else {
    cells_.insert_or_assign(k, std::move(seq));
  }
}

std::size_t Store::facet_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [k, seq] : cells_) n += seq.size();
  return n;
}

std::uint64_t Store::hash() const noexcept {
  std::uint64_t h = 0x5107e;
  for (const auto& [k, seq] : cells_) {
    hash_combine(h, hash_string(k));
    for (const auto& facet : seq) {
      hash_combine(h, facet.value.hash());
      hash_combine(h, facet.label.id);
    }
  }
  return h;
}

std::optional<LabeledValue> read(const Lattice& lattice, const Store& store, const Key& k, Label l) {
  const auto& seq = store.get(k);
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
    if (lattice.leq(it->label, l)) return *it;
  }
  return std::nullopt;
}

Store write(const Lattice& lattice, const Store& store, const Key& k, const Value& v, Label l) {
  Store out = store;
  out.set(k, write_seq(lattice, store.get(k), v, l));
  return out;
}

Store project_store(const Lattice& lattice, const Store& store, Label l) {
  Store out;
  for (const auto& [k, seq] : store.cells()) out.set(k, project_seq(lattice, seq, l));
  return out;
}

Store del(const Lattice& lattice, const Store& store, const Key& k, Label l) {
  const auto& seq = store.get(k);
  if (seq.empty()) return store;
  LabeledValueSeq kept;
  std::copy_if(seq.begin(), seq.end(), std::back_inserter(kept),
               [&](const LabeledValue& facet) { return !lattice.leq(l, facet.label); });
  Store out = store;
  out.set(k, std::move(kept));
  return out;
}

std::set<Key> keys(const Lattice& lattice, const Store& store, Label l) {
  std::set<Key> out;
  for (const auto& [k, seq] : store.cells()) {
    if (std::any_of(seq.begin(), seq.end(), [&](const LabeledValue& f) { return lattice.leq(f.label, l); })) {
      out.insert(k);
    }
  }
  return out;
}

}  // namespace trapeze
