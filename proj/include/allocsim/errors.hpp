#pragma once

#include <stdexcept>
#include <string>

namespace allocsim {

// Raised for invalid configuration (file contents, CLI overrides, design
// parameters that do not fit the scenario). The CLI maps it to exit code 2;
// everything else that escapes maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}
