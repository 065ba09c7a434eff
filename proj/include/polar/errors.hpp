#pragma once

#include <stdexcept>

namespace polar {

// Thrown when a request would exceed a hard enumeration or memory budget
// (e.g. torus nets with N^d beyond the enumeration limit).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an iterative numeric routine cannot reach its tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace polar
