/**
 * @file rational.hpp
 * @brief Exact rational scalar type and string conversions.
 */
#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace statlin {

/// Exact rational scalar used throughout the symbolic pipeline.
using Rat = mpq_class;

[[nodiscard]] inline double to_double(const Rat& q) { return q.get_d(); }

[[nodiscard]] inline bool is_zero(const Rat& q) { return sgn(q) == 0; }

/// Renders as "p/q", or "p" when the denominator is 1.
[[nodiscard]] inline std::string to_string(const Rat& q) {
  return q.get_str();
}

/**
 * @brief Parse a rational from a string.
 *
 * Accepts integers ("-3"), fractions ("2/5"), and finite decimals ("0.25",
 * exactly converted to 1/4). Throws std::invalid_argument otherwise.
 */
[[nodiscard]] Rat parse_rational(std::string_view text);

}  // namespace statlin
