#pragma once

#include <stdexcept>
#include <string>

namespace uavmec {

enum class ErrorCode {
  kConfig,           // invalid configuration or schema violation
  kDomain,           // argument outside the mathematical domain
  kInfeasible,       // no feasible solution for the requested assignment
  kInvalidDecision,  // a slot decision violates a constraint
  kNumeric,          // non-finite values or solver non-convergence
  kRefused,          // request refused (size cap, mismatched inputs)
  kShape,            // tensor shape mismatch
  kIo,               // filesystem failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace uavmec
