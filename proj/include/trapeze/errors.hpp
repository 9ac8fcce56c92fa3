#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trapeze {

/// Bad user-supplied configuration: unknown labels, unresolved channels,
/// malformed scenario documents.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lattice validation failure (cycle, missing bound, missing join).
class LatticeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Schema violation in a program or scenario document. `path` points at the
/// offending node in JSON-pointer-ish notation, e.g. `$.processes[0].program[2]`.
class ParseError : public ConfigError {
 public:
  ParseError(std::string path, const std::string& what)
      : ConfigError(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Malformed line in a persisted store file.
class StoreFormatError : public ConfigError {
 public:
  StoreFormatError(std::size_t line, const std::string& what)
      : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace trapeze
