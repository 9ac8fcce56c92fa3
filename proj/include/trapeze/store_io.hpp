#pragma once

#include <string>
#include <string_view>

#include "trapeze/facet_store.hpp"

namespace trapeze {

// Three-column persistence: one `key<TAB>value<TAB>label` record per facet.
// Keys are emitted in sorted order, facets of a key in temporal order.
// Values are `i:<int>`, `b:<true|false>` or `s:<escaped>`; keys and string
// payloads escape `\\`, `\t`, `\n` and `\r`.

std::string encode_value(const Value& v);
/// Throws std::invalid_argument on a malformed encoding.
Value decode_value(std::string_view text);

std::string escape_field(std::string_view raw);
std::string unescape_field(std::string_view escaped);

std::string dump_store(const Lattice& lattice, const Store& store);

/// Records are appended per key in file order. Throws StoreFormatError with
/// the line number on a malformed line, an unknown label, or a key whose
/// facets violate the write-GC ordering.
Store load_store(const Lattice& lattice, std::string_view text);

}  // namespace trapeze
