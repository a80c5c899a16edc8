#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace coherent_age {

/// Why a value could not be computed exactly as requested.
enum class Flag : std::uint8_t {
  none,
  underflow,      // a probability fell below kUnderflowFloor before a log/ratio
  clamped,        // evaluated at a point moved inside [eps, 1 - eps]
  indeterminate,  // numerator and denominator both vanished
};

/// A number together with the numeric flag raised while computing it.
struct Flagged {
  double value = 0.0;
  Flag flag = Flag::none;

  [[nodiscard]] bool ok() const { return flag == Flag::none; }
  [[nodiscard]] bool usable() const {
    return flag != Flag::underflow && flag != Flag::indeterminate && std::isfinite(value);
  }
};

inline constexpr double kUnderflowFloor = 1e-300;

inline const char* to_string(Flag f) {
  switch (f) {
    case Flag::none: return "none";
    case Flag::underflow: return "underflow";
    case Flag::clamped: return "clamped";
    case Flag::indeterminate: return "indeterminate";
  }
  return "?";
}

/// Raised when an adaptive numeric routine fails to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coherent_age
