#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace newtonflux {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Error category shared by every module. The CLI maps categories to exit
/// codes, so new categories need a matching entry there.
enum class ErrorKind {
  invalid_input,
  degenerate_immersion,
  configuration,
  out_of_domain,
  integration,
  precondition_violation,
  unsupported_region,
  invalid_parameters,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Binomial coefficient as a double; zero outside 0 <= k <= n.
double binomial(int n, int k) noexcept;

}  // namespace newtonflux
