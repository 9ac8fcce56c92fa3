#include "trapeze/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "trapeze/errors.hpp"
#include "trapeze/program_json.hpp"

namespace trapeze {

using nlohmann::json;

namespace {

void expect_fields(const json& doc, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!doc.is_object()) throw ParseError(path, "expected an object");
  for (const auto& [key, _] : doc.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError(path, "unexpected field '" + key + "'");
  }
}

const json& field(const json& doc, const std::string& path, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) throw ParseError(path, std::string("missing field '") + name + "'");
  return *it;
}

std::string string_at(const json& doc, const std::string& path) {
  if (!doc.is_string() || doc.get<std::string>().empty()) throw ParseError(path, "expected a non-empty string");
  return doc.get<std::string>();
}

const json& array_at(const json& doc, const std::string& path) {
  if (!doc.is_array()) throw ParseError(path, "expected an array");
  return doc;
}

Label label_at(const Lattice& lattice, const json& doc, const std::string& path) {
  const std::string name = string_at(doc, path);
  auto l = lattice.find(name);
  if (!l) throw ParseError(path, "unknown label '" + name + "'");
  return *l;
}

std::shared_ptr<const Lattice> parse_lattice(const json& doc, const std::string& path) {
  expect_fields(doc, path, {"labels", "edges"});
  std::vector<std::string> labels;
  const auto& ls = array_at(field(doc, path, "labels"), path + ".labels");
  for (std::size_t i = 0; i < ls.size(); ++i) labels.push_back(string_at(ls[i], path + ".labels[" + std::to_string(i) + "]"));
  std::vector<Lattice::Edge> edges;
  if (doc.contains("edges")) {
    const auto& es = array_at(doc["edges"], path + ".edges");
    for (std::size_t i = 0; i < es.size(); ++i) {
      const std::string at = path + ".edges[" + std::to_string(i) + "]";
      if (!es[i].is_array() || es[i].size() != 2) throw ParseError(at, "expected a [lower, higher] pair");
      edges.emplace_back(string_at(es[i][0], at + "[0]"), string_at(es[i][1], at + "[1]"));
    }
  }
  return std::make_shared<const Lattice>(std::move(labels), edges);
}

ProcessSpec parse_process(const json& doc, const Lattice& lattice, const ProgramContext& ctx,
                          const std::string& path) {
  expect_fields(doc, path, {"label", "max_label", "program"});
  ProcessSpec p;
  p.label = label_at(lattice, field(doc, path, "label"), path + ".label");
  if (doc.contains("max_label")) {
    p.max_label = label_at(lattice, doc["max_label"], path + ".max_label");
    if (!lattice.leq(p.label, *p.max_label)) {
      throw ParseError(path + ".max_label", "maximal label must be at or above the label");
    }
  }
  p.program = parse_program(field(doc, path, "program"), ctx, path + ".program");
  return p;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", std::string("invalid JSON (") + e.what() + ")");
  }
  expect_fields(doc, "$",
                {"lattice", "channels", "initial_store", "processes", "pending_inputs", "declassifiers", "mode",
                 "observer", "secret_slot", "description"});

  Scenario sc;
  sc.lattice = parse_lattice(field(doc, "$", "lattice"), "$.lattice");
  const Lattice& lat = *sc.lattice;

  if (doc.contains("channels")) {
    const json& chs = doc["channels"];
    if (!chs.is_object()) throw ParseError("$.channels", "expected an object");
    for (const auto& [name, label] : chs.items()) {
      sc.channels.emplace(name, label_at(lat, label, "$.channels." + name));
    }
  }

  if (doc.contains("mode")) {
    const std::string name = string_at(doc["mode"], "$.mode");
    auto mode = policy_from_name(name);
    if (!mode) throw ParseError("$.mode", "unknown mode '" + name + "'");
    sc.mode = *mode;
  }
  if (doc.contains("observer")) sc.observer = label_at(lat, doc["observer"], "$.observer");

  ProgramContext ctx{lat, {}, {}};
  for (const auto& [name, _] : sc.channels) ctx.channels.insert(name);

  // Declassifier names first so that programs (including other bodies) can call them.
  const json* decls = doc.contains("declassifiers") ? &array_at(doc["declassifiers"], "$.declassifiers") : nullptr;
  if (decls) {
    for (std::size_t i = 0; i < decls->size(); ++i) {
      const std::string at = "$.declassifiers[" + std::to_string(i) + "]";
      expect_fields((*decls)[i], at, {"name", "h", "l", "body"});
      if (!ctx.declassifiers.insert(string_at(field((*decls)[i], at, "name"), at + ".name")).second) {
        throw ParseError(at + ".name", "duplicate declassifier name");
      }
    }
    for (std::size_t i = 0; i < decls->size(); ++i) {
      const std::string at = "$.declassifiers[" + std::to_string(i) + "]";
      const json& d = (*decls)[i];
      Declassifier decl{d["name"].get<std::string>(), label_at(lat, field(d, at, "h"), at + ".h"),
                        label_at(lat, field(d, at, "l"), at + ".l"),
                        parse_program(field(d, at, "body"), ctx, at + ".body")};
      try {
        validate_declassifier(lat, decl);
      } catch (const ConfigError& e) {
        throw ParseError(at, e.what());
      }
      sc.declassifiers.push_back(std::move(decl));
    }
  }

  if (doc.contains("initial_store")) {
    const auto& facets = array_at(doc["initial_store"], "$.initial_store");
    for (std::size_t i = 0; i < facets.size(); ++i) {
      const std::string at = "$.initial_store[" + std::to_string(i) + "]";
      expect_fields(facets[i], at, {"key", "value", "label"});
      sc.initial_store.push_back(InitialFacet{string_at(field(facets[i], at, "key"), at + ".key"),
                                              value_from_json(field(facets[i], at, "value"), at + ".value"),
                                              label_at(lat, field(facets[i], at, "label"), at + ".label")});
    }
  }

  for (const char* section : {"processes", "pending_inputs"}) {
    if (!doc.contains(section)) continue;
    const std::string base = std::string("$.") + section;
    const auto& list = array_at(doc[section], base);
    auto& out = std::string_view(section) == "processes" ? sc.processes : sc.pending_inputs;
    for (std::size_t i = 0; i < list.size(); ++i) {
      out.push_back(parse_process(list[i], lat, ctx, base + "[" + std::to_string(i) + "]"));
    }
  }

  if (doc.contains("secret_slot")) {
    const json& s = doc["secret_slot"];
    expect_fields(s, "$.secret_slot", {"key", "label", "values", "bits"});
    SecretSlot slot{string_at(field(s, "$.secret_slot", "key"), "$.secret_slot.key"),
                    label_at(lat, field(s, "$.secret_slot", "label"), "$.secret_slot.label"),
                    {}};
    if (s.contains("values") == s.contains("bits")) {
      throw ParseError("$.secret_slot", "exactly one of 'values' and 'bits' is required");
    }
    if (s.contains("values")) {
      const auto& vs = array_at(s["values"], "$.secret_slot.values");
      for (std::size_t i = 0; i < vs.size(); ++i) {
        slot.values.push_back(value_from_json(vs[i], "$.secret_slot.values[" + std::to_string(i) + "]"));
      }
    } else {
      const json& bits = s["bits"];
      if (!bits.is_number_integer() || bits.get<std::int64_t>() < 0 || bits.get<std::int64_t>() > 16) {
        throw ParseError("$.secret_slot.bits", "expected an integer in 0..16");
      }
      for (std::int64_t v = 0; v < (std::int64_t{1} << bits.get<std::int64_t>()); ++v) slot.values.emplace_back(v);
    }
    if (slot.values.empty()) throw ParseError("$.secret_slot.values", "at least one value is required");
    sc.secret = std::move(slot);
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

Scenario default_scenario() {
  Scenario sc;
  sc.lattice = std::make_shared<const Lattice>(Lattice::diamond());
  const Lattice& lat = *sc.lattice;
  sc.channels = {{"pub", lat.at("bot")}, {"bob", lat.at("b")}, {"eve", lat.at("e")}, {"admin", lat.at("top")}};
  return sc;
}

Semantics make_semantics(const Scenario& sc, PolicyMode mode, Mutations mutations, std::size_t fuel) {
  return Semantics(sc.lattice, sc.channels, Semantics::Options{mode, mutations, fuel}, sc.declassifiers);
}

Instance initial_instance(const Scenario& sc, const Semantics& sem, const std::optional<Value>& secret) {
  Store store;
  for (const auto& f : sc.initial_store) store = sem.seed(store, f.key, f.value, f.label);
  if (secret) {
    if (!sc.secret) throw ConfigError("scenario has no secret_slot");
    store = sem.seed(store, sc.secret->key, *secret, sc.secret->label);
  }
  auto instantiate = [&](const ProcessSpec& spec) {
    Process p{Thread::start(spec.program), spec.label, std::nullopt, std::nullopt};
    if (uses_max_label(sem.mode())) p.max_label = spec.max_label.value_or(spec.label);
    return p;
  };
  std::vector<Process> ps;
  for (const auto& spec : sc.processes) ps.push_back(instantiate(spec));
  std::vector<Process> inputs;
  for (const auto& spec : sc.pending_inputs) inputs.push_back(instantiate(spec));
  return Instance{SystemState(std::move(store), std::move(ps)), std::move(inputs)};
}

}  // namespace trapeze
