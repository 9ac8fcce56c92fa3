#pragma once

#include "json.hpp"
#include "trapeze/checker.hpp"

namespace trapeze {

/// {"type":"start","label":..,"program":[..]}, {"type":"send","channel":..,"value":..}, {"type":"nop"}
nlohmann::json event_to_json(const Lattice& lattice, const Event& e);

/// One trace line: {"step":n,"rule":"s-send","event":{..}}; the projected
/// form omits the rule.
nlohmann::json trace_line(const Lattice& lattice, std::size_t n, const TraceStep& step, bool with_rule = true);

nlohmann::json trace_to_json(const Lattice& lattice, const Trace& trace);

nlohmann::json verdict_to_json(const Lattice& lattice, const Verdict& v);

}  // namespace trapeze
