#pragma once

#include <stdexcept>
#include <string>

namespace calabi {

/// Parameters outside the domain of an operation (CLI exit code 1).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// mu = 0: the soliton vector field degenerates and Q is constant.
class DegenerateSoliton : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

/// An iterative method failed to converge (CLI exit code 2).
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidParameter(what);
}

}  // namespace calabi
