#pragma once

#include <stdexcept>
#include <string>

namespace jetphase {

enum class ErrorKind {
  SingularMetric,
  ChartDomain,
  NotTimelike,
  MissingEMField,
  MissingPotential,
  MissingDerivatives,
  ObserverNotAdapted,
  DegenerateDenominator,
  InvalidArgument,
  InvalidConfig,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::ChartDomain: return "ChartDomain";
    case ErrorKind::NotTimelike: return "NotTimelike";
    case ErrorKind::MissingEMField: return "MissingEMField";
    case ErrorKind::MissingPotential: return "MissingPotential";
    case ErrorKind::MissingDerivatives: return "MissingDerivatives";
    case ErrorKind::ObserverNotAdapted: return "ObserverNotAdapted";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace jetphase
