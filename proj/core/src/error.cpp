#include "fcqkd/error.hpp"

namespace fcqkd {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::DegenerateConfiguration: return "degenerate-configuration";
    case ErrorKind::ThetaUndefined: return "theta-undefined";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::TruncationRisk: return "truncation-risk";
    case ErrorKind::InfeasibleProtocol: return "infeasible-protocol";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace fcqkd
