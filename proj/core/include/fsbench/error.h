#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fsbench {

// Every failure raised by the library carries a stable dotted code
// ("dataset.ragged_rows", "bridge.timeout", ...) so the CLI can emit a
// machine-readable error record.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace fsbench
