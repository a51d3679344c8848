#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace odeident {

enum class ErrorKind {
  NonFinite,
  RepeatedEigenvalues,
  IndexOutOfRange,
  DimensionMismatch,
  FullyIdentifiable,
  ZeroInitialCondition,
  NoRepeatedEigenvalue,
  DefectiveBlock,
  Overflow,
  GridMismatch,
  InvalidGrid,
  NonUniformGrid,
  IllConditionedBasis,
  SingularGram,
  ZeroTruth,
  TooFewTimePoints,
  ResampleLimit,
  DegenerateInput,
  InvalidArgument,
  IoError,
};

const char* kind_name(ErrorKind k);

// Every library failure is an Error. `fields` carries numeric context
// (condition numbers, gaps, indices) for structured reporting.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::map<std::string, double> fields = {});

  ErrorKind kind() const noexcept { return kind_; }
  const char* kind_name() const noexcept { return odeident::kind_name(kind_); }
  const std::map<std::string, double>& fields() const noexcept { return fields_; }

 private:
  ErrorKind kind_;
  std::map<std::string, double> fields_;
};

}  // namespace odeident
