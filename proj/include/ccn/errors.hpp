#pragma once

#include <stdexcept>
#include <string>

namespace ccn {

// Error taxonomy used across the library and mapped to CLI exit codes:
//   std::invalid_argument  malformed input (exit 2)
//   std::domain_error      precondition of an operation violated (exit 4)
//   NumericalError         iteration failed to converge or produced non-finite values (exit 3)
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ccn
