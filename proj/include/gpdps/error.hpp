#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace gpdps {

enum class ErrorCode {
  kConfig = 1,        // shape/dimension mismatch, bad parameter
  kDivergence = 2,    // non-finite iterate
  kPrecondition = 3,  // violated operation precondition
  kInfeasible = 4,    // step-size constants cannot be satisfied
  kIo = 5,
  kUnsupported = 6,   // optional problem hook not implemented
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> iteration = std::nullopt)
      : std::runtime_error(what), code_(code), iteration_(iteration) {}

  ErrorCode code() const noexcept { return code_; }
  // Set for divergence errors.
  std::optional<std::size_t> iteration() const noexcept { return iteration_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> iteration_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace gpdps
