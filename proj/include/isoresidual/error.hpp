#pragma once

#include <stdexcept>
#include <string>

namespace isoresidual {

enum class ErrorKind {
  SumMismatch,
  BadOrder,
  BadInput,
  Infeasible,
  UnrealizableSign,
  ScaleLimit,
  NotAdjacent,
  NotApplicable,
  IllegalCorner,
  PartitionMismatch,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SumMismatch: return "SumMismatch";
    case ErrorKind::BadOrder: return "BadOrder";
    case ErrorKind::BadInput: return "BadInput";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::UnrealizableSign: return "UnrealizableSign";
    case ErrorKind::ScaleLimit: return "ScaleLimit";
    case ErrorKind::NotAdjacent: return "NotAdjacent";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::IllegalCorner: return "IllegalCorner";
    case ErrorKind::PartitionMismatch: return "PartitionMismatch";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace isoresidual
