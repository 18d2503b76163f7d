#pragma once

#include <stdexcept>
#include <string>

namespace simplexwalk {

/// Raised on contract violations (bad sizes, out-of-range sites, negative
/// increments) and on numerical budgets being exhausted.
class SimplexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace simplexwalk
