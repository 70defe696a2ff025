#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fcqkd {

enum class ErrorKind {
  InvalidParameter,
  DegenerateConfiguration,  // kappa0 = kappa1 = 0, no light in the sidebands
  ThetaUndefined,
  OutOfDomain,
  TruncationRisk,
  InfeasibleProtocol,
  Config,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fcqkd
