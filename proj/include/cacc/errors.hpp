#pragma once

#include <stdexcept>

namespace cacc {

// Raised when a computation would exceed a configured resource limit
// (memory budget, search-space cap). Input validation failures use
// std::invalid_argument instead; the CLI maps the two to exit codes 2 and 1.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cacc
