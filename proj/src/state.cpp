#include "trapeze/state.hpp"

#include <algorithm>
#include <array>

#include "trapeze/errors.hpp"
#include "trapeze/hash.hpp"

namespace trapeze {

std::uint64_t Process::hash() const noexcept {
  std::uint64_t h = thread.hash();
  hash_combine(h, label.id);
  hash_combine(h, max_label ? max_label->id + 1U : 0U);
  hash_combine(h, clearance ? clearance->id + 1U : 0U);
  return h;
}

SystemState::SystemState(Store store, std::vector<Process> processes)
    : store_(std::move(store)), processes_(std::move(processes)) {
  std::sort(processes_.begin(), processes_.end());
  hash_ = store_.hash();
  for (const auto& p : processes_) hash_combine(hash_, p.hash());
}

void validate_declassifier(const Lattice& lattice, const Declassifier& d) {
  if (!lattice.lt(d.low, d.high)) {
    throw ConfigError("declassifier '" + d.name + "': '" + lattice.name(d.low) + "' is not strictly below '" +
                      lattice.name(d.high) + "'");
  }
}

Label invoke_declassifier(const Lattice& lattice, const Declassifier& d, Label caller) {
  if (lattice.leq(d.low, caller) && lattice.leq(caller, d.high)) return d.low;
  return caller;
}

namespace {

constexpr std::array<std::pair<PolicyMode, const char*>, 5> kPolicyNames{{
    {PolicyMode::trapeze, "trapeze"},
    {PolicyMode::design1, "design1"},
    {PolicyMode::design2_total, "design2-total"},
    {PolicyMode::design2_partial, "design2-partial"},
    {PolicyMode::trapeze_unique_read, "trapeze-unique-read"},
}};

}  // namespace

const char* policy_name(PolicyMode mode) {
  for (const auto& [m, name] : kPolicyNames) {
    if (m == mode) return name;
  }
  return "?";
}

std::optional<PolicyMode> policy_from_name(std::string_view name) {
  for (const auto& [m, n] : kPolicyNames) {
    if (name == n) return m;
  }
  return std::nullopt;
}

}  // namespace trapeze
