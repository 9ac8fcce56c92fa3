#include "trapeze/report_json.hpp"

#include "trapeze/program_json.hpp"

namespace trapeze {

using nlohmann::json;

json event_to_json(const Lattice& lattice, const Event& e) {
  if (const auto* s = std::get_if<EvStart>(&e)) {
    json out{{"type", "start"}, {"label", lattice.name(s->process.label)}};
    const auto& frames = s->process.thread.frames();
    if (!frames.empty()) out["program"] = program_to_json(*frames.front().block, lattice);
    return out;
  }
  if (const auto* s = std::get_if<EvSend>(&e)) {
    return json{{"type", "send"}, {"channel", s->channel}, {"value", value_to_json(s->value)}};
  }
  return json{{"type", "nop"}};
}

json trace_line(const Lattice& lattice, std::size_t n, const TraceStep& step, bool with_rule) {
  json out;
  out["step"] = n;
  if (with_rule) out["rule"] = rule_name(step.rule);
  out["event"] = event_to_json(lattice, step.event);
  return out;
}

json trace_to_json(const Lattice& lattice, const Trace& trace) {
  json out = json::array();
  for (std::size_t i = 0; i < trace.size(); ++i) out.push_back(trace_line(lattice, i, trace[i]));
  return out;
}

json verdict_to_json(const Lattice& lattice, const Verdict& v) {
  json out{{"property", v.property},
           {"verdict", outcome_name(v.outcome)},
           {"states_explored", v.states_explored},
           {"wall_ms", v.wall_ms}};
  if (!v.detail.empty()) out["detail"] = v.detail;
  if (!v.counterexample.empty()) out["counterexample"] = trace_to_json(lattice, v.counterexample);
  return out;
}

}  // namespace trapeze
