#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace qcd {

enum class ErrorCode {
  InvalidArgument,
  ConstraintViolated,
  CoincidingCoordinates,
  ZeroCoordinate,
  PoleCollision,
  SingularityApproached,
  NonConvergence,
  NoSolutionsFound,
  DegenerateCombination,
  ExtractionIllConditioned,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<double> residual = std::nullopt)
      : std::runtime_error(what), code_(code), residual_(residual) {}

  ErrorCode code() const noexcept { return code_; }
  // set for ConstraintViolated
  std::optional<double> residual() const noexcept { return residual_; }

 private:
  ErrorCode code_;
  std::optional<double> residual_;
};

}  // namespace qcd
