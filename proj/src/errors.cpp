#include "odeident/errors.hpp"

namespace odeident {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::RepeatedEigenvalues: return "RepeatedEigenvalues";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::FullyIdentifiable: return "FullyIdentifiable";
    case ErrorKind::ZeroInitialCondition: return "ZeroInitialCondition";
    case ErrorKind::NoRepeatedEigenvalue: return "NoRepeatedEigenvalue";
    case ErrorKind::DefectiveBlock: return "DefectiveBlock";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::NonUniformGrid: return "NonUniformGrid";
    case ErrorKind::IllConditionedBasis: return "IllConditionedBasis";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::ZeroTruth: return "ZeroTruth";
    case ErrorKind::TooFewTimePoints: return "TooFewTimePoints";
    case ErrorKind::ResampleLimit: return "ResampleLimit";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message,
             std::map<std::string, double> fields)
    : std::runtime_error(message), kind_(kind), fields_(std::move(fields)) {}

}  // namespace odeident
