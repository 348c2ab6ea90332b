#pragma once

#include <stdexcept>
#include <string>

namespace balcut {

// Bad user input (malformed files, out-of-range parameters). CLI exit code 1.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (degenerate normalization, non-finite values).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Internal contract violated; indicates a bug, not bad input.
struct DiagnosticError : std::logic_error {
  explicit DiagnosticError(const std::string& what) : std::logic_error(what) {}
};

#define BALCUT_REQUIRE(cond, msg) \
  do { \
    if (!(cond)) throw ::balcut::InputError(msg); \
  } while (0)

#define BALCUT_ASSERT(cond, msg) \
  do { \
    if (!(cond)) throw ::balcut::DiagnosticError(std::string("internal: ") + (msg)); \
  } while (0)

}  // namespace balcut
