#pragma once

#include <stdexcept>
#include <string>

namespace flowknot {

/// Malformed or out-of-contract input (bad alphabet, invalid diagram, ...).
/// CLI maps this to exit code 2.
struct invalid_input : std::invalid_argument {
  explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

/// Request exceeds a documented resource bound (e.g. hom counting limits).
struct resource_error : invalid_input {
  explicit resource_error(const std::string& what) : invalid_input(what) {}
};

/// A computed quantity violated an internal invariant; indicates a bug, not
/// bad input. CLI maps this to exit code 3.
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace flowknot
