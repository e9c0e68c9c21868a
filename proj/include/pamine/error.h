#pragma once

#include <stdexcept>
#include <string>

namespace pamine {

// Data-level failure (bad input, bad config, precondition violation). Carries
// the name of the module that raised it so the CLI can report it.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

}  // namespace pamine
