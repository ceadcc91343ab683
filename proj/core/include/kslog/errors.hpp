#pragma once

#include <stdexcept>
#include <string>

namespace kslog {

// Input violates a structural precondition (bad tree, bad rate matrix,
// malformed config field).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace kslog
