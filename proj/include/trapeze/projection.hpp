#pragma once

#include <vector>

#include "trapeze/semantics.hpp"

namespace trapeze {

// The ↾l family. Thread contents are never inspected; a process is kept or
// dropped as a whole by its label.

std::vector<Process> project_processes(const Lattice& lattice, const std::vector<Process>& ps, Label l);
Event project_event(const Lattice& lattice, const ChannelEnv& channels, const Event& e, Label l);
Trace project_trace(const Lattice& lattice, const ChannelEnv& channels, const Trace& trace, Label l);
/// Events only, rules dropped.
std::vector<Event> project_events(const Lattice& lattice, const ChannelEnv& channels, const Trace& trace, Label l);
SystemState project_state(const Lattice& lattice, const SystemState& state, Label l);

bool l_equiv(const Lattice& lattice, const Store& a, const Store& b, Label l);
bool l_equiv(const Lattice& lattice, const std::vector<Process>& a, const std::vector<Process>& b, Label l);
bool l_equiv(const Lattice& lattice, const SystemState& a, const SystemState& b, Label l);
bool l_equiv(const Lattice& lattice, const ChannelEnv& channels, const Event& a, const Event& b, Label l);
/// Elementwise; traces of different length are never equivalent.
bool l_equiv(const Lattice& lattice, const ChannelEnv& channels, const Trace& a, const Trace& b, Label l);

}  // namespace trapeze
