#include "trapeze/projection.hpp"

#include <algorithm>

namespace trapeze {

std::vector<Process> project_processes(const Lattice& lattice, const std::vector<Process>& ps, Label l) {
  std::vector<Process> out;
  std::copy_if(ps.begin(), ps.end(), std::back_inserter(out),
               [&](const Process& p) { return lattice.leq(p.label, l); });
  std::sort(out.begin(), out.end());
  return out;
}

Event project_event(const Lattice& lattice, const ChannelEnv& channels, const Event& e, Label l) {
  if (const auto* s = std::get_if<EvStart>(&e)) {
    if (lattice.leq(s->process.label, l)) return e;
  } else if (const auto* s = std::get_if<EvSend>(&e)) {
    auto it = channels.find(s->channel);
    if (it != channels.end() && lattice.leq(it->second, l)) return e;
  }
  return Nop{};
}

Trace project_trace(const Lattice& lattice, const ChannelEnv& channels, const Trace& trace, Label l) {
  Trace out;
  out.reserve(trace.size());
  for (const auto& step : trace) out.push_back({step.rule, project_event(lattice, channels, step.event, l)});
  return out;
}

std::vector<Event> project_events(const Lattice& lattice, const ChannelEnv& channels, const Trace& trace, Label l) {
  std::vector<Event> out;
  out.reserve(trace.size());
  for (const auto& step : trace) out.push_back(project_event(lattice, channels, step.event, l));
  return out;
}

SystemState project_state(const Lattice& lattice, const SystemState& state, Label l) {
  return SystemState(project_store(lattice, state.store(), l), project_processes(lattice, state.processes(), l));
}

bool l_equiv(const Lattice& lattice, const Store& a, const Store& b, Label l) {
  return project_store(lattice, a, l) == project_store(lattice, b, l);
}

bool l_equiv(const Lattice& lattice, const std::vector<Process>& a, const std::vector<Process>& b, Label l) {
  return project_processes(lattice, a, l) == project_processes(lattice, b, l);
}

bool l_equiv(const Lattice& lattice, const SystemState& a, const SystemState& b, Label l) {
  return project_state(lattice, a, l) == project_state(lattice, b, l);
}

bool l_equiv(const Lattice& lattice, const ChannelEnv& channels, const Event& a, const Event& b, Label l) {
  return project_event(lattice, channels, a, l) == project_event(lattice, channels, b, l);
}

bool l_equiv(const Lattice& lattice, const ChannelEnv& channels, const Trace& a, const Trace& b, Label l) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!l_equiv(lattice, channels, a[i].event, b[i].event, l)) return false;
  }
  return true;
}

}  // namespace trapeze
