#pragma once

#include <stdexcept>
#include <string>

namespace batchelor {

/// Bad user input: malformed config file, unknown key, ill-typed override.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A declared invariant failed at runtime (negative slack, broken identity).
class InvariantError : public std::runtime_error {
 public:
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

/// Run aborted because the grid cannot support the requested physics
/// (resolution rule violated or the truncation tail monitor tripped).
class ResolutionError : public std::runtime_error {
 public:
  explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace batchelor
