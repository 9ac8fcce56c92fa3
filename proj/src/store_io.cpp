#include "trapeze/store_io.hpp"

#include <charconv>
#include <stdexcept>
#include <vector>

#include "trapeze/errors.hpp"

namespace trapeze {

std::string escape_field(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    char c = escaped[i];
    if (c != '\\') {
      out += c;
      continue;
    }
    if (++i == escaped.size()) throw std::invalid_argument("dangling backslash");
    switch (escaped[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: throw std::invalid_argument(std::string("unknown escape \\") + escaped[i]);
    }
  }
  return out;
}

std::string encode_value(const Value& v) {
  if (v.is_int()) return "i:" + std::to_string(v.as_int());
  if (v.is_bool()) return v.as_bool() ? "b:true" : "b:false";
  return "s:" + escape_field(v.as_string());
}

Value decode_value(std::string_view text) {
  if (text.size() < 2 || text[1] != ':') throw std::invalid_argument("value lacks a type tag");
  const std::string_view body = text.substr(2);
  switch (text[0]) {
    case 'i': {
      std::int64_t out = 0;
      auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), out);
      if (body.empty() || ec != std::errc{} || ptr != body.data() + body.size()) {
        throw std::invalid_argument("bad integer '" + std::string(body) + "'");
      }
      return Value(out);
    }
    case 'b':
      if (body == "true") return Value(true);
      if (body == "false") return Value(false);
      throw std::invalid_argument("bad boolean '" + std::string(body) + "'");
    case 's':
      return Value(unescape_field(body));
    default:
      throw std::invalid_argument(std::string("unknown value tag '") + text[0] + "'");
  }
}

std::string dump_store(const Lattice& lattice, const Store& store) {
  std::string out;
  for (const auto& [k, seq] : store.cells()) {
    for (const auto& facet : seq) {
      out += escape_field(k);
      out += '\t';
      out += encode_value(facet.value);
      out += '\t';
      out += lattice.name(facet.label);
      out += '\n';
    }
  }
  return out;
}

Store load_store(const Lattice& lattice, std::string_view text) {
  Store store;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3) {
      throw StoreFormatError(line_no, "expected 3 tab-separated fields, found " + std::to_string(fields.size()));
    }

    Key key;
    Value value;
    try {
      key = unescape_field(fields[0]);
      value = decode_value(fields[1]);
    } catch (const std::invalid_argument& e) {
      throw StoreFormatError(line_no, e.what());
    }
    auto label = lattice.find(fields[2]);
    if (!label) throw StoreFormatError(line_no, "unknown label '" + std::string(fields[2]) + "'");

    LabeledValueSeq seq = store.get(key);
    seq.push_back(LabeledValue{std::move(value), *label});
    if (!gc_invariant_holds(lattice, seq)) {
      throw StoreFormatError(line_no, "facet order for key '" + key + "' violates the write ordering");
    }
    store.set(key, std::move(seq));
  }
  return store;
}

}  // namespace trapeze
