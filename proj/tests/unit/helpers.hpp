#pragma once

#include <memory>

#include "json.hpp"
#include "trapeze/errors.hpp"
#include "trapeze/program_json.hpp"
#include "trapeze/scenario.hpp"

namespace testing {

inline std::shared_ptr<const trapeze::Lattice> diamond() {
  static const auto lat = std::make_shared<const trapeze::Lattice>(trapeze::Lattice::diamond());
  return lat;
}

inline trapeze::ChannelEnv channels() {
  const auto& lat = *diamond();
  return {{"pub", lat.at("bot")}, {"bob", lat.at("b")}, {"eve", lat.at("e")}, {"admin", lat.at("top")}};
}

inline trapeze::BlockRef program(const char* json_text, const std::set<std::string>& declassifiers = {}) {
  trapeze::ProgramContext ctx{*diamond(), {"pub", "bob", "eve", "admin", "ch"}, declassifiers};
  return trapeze::parse_program(nlohmann::json::parse(json_text), ctx);
}

inline trapeze::Process process(const char* json_text, const char* label) {
  return trapeze::Process{trapeze::Thread::start(program(json_text)), diamond()->at(label), std::nullopt, std::nullopt};
}

inline trapeze::Semantics semantics(trapeze::PolicyMode mode = trapeze::PolicyMode::trapeze,
                                    trapeze::Mutations m = {}) {
  return trapeze::Semantics(diamond(), channels(), trapeze::Semantics::Options{mode, m, trapeze::kDefaultFuel});
}

inline std::string scenario_path(const char* name) { return std::string(TRAPEZE_SCENARIO_DIR) + "/" + name; }

}  // namespace testing
