#pragma once

#include <stdexcept>
#include <string>

namespace pamber {

enum class ErrorCode {
  NotPowerOfTwo,
  OrderTooSmall,
  OrderTooLarge,
  WrongWeight,
  OutOfRange,
  TooLarge,
  UndefinedForOrder,
  NotABijection,
  WrongCount,
  WrongOrder,
  AsymmetricPattern,
  NumericalFailure,
  UnresolvedVirtual,
  InconsistentLabels,
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pamber
