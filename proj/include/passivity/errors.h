#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace passivity {

enum class ErrorCode {
  kInput,
  kDefiniteness,
  kSingularResolvent,
  kSchurDegenerate,
  kSpectralSplitting,
  kConditioning,
  kDomain,
  kDegenerateFrame,
  kConvergence,
  kMinimality,
  kPencil,
  kPrecondition,
  kParse,
  kIo,
};

const char* ToString(ErrorCode code);

/// All library failures are reported through this exception. `value()` carries
/// the offending scalar when there is one (e.g. λ_min for definiteness errors,
/// the last bracket width for convergence errors).
class PassivityError : public std::runtime_error {
 public:
  PassivityError(ErrorCode code, const std::string& what,
                 std::optional<double> value = std::nullopt)
      : std::runtime_error(what), code_(code), value_(value) {}

  ErrorCode code() const { return code_; }
  std::optional<double> value() const { return value_; }

 private:
  ErrorCode code_;
  std::optional<double> value_;
};

}  // namespace passivity
