#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hoopflux {

/// Exact rational scalar used for field values, gauge functions, polynomial
/// coefficients and every matrix entry. Avoid `auto` with GMP expressions.
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" (q > 0 after normalization). Throws
/// Error(Parse) on anything else.
Rational parse_rational(std::string_view text);

/// Canonical "p" or "p/q" form.
std::string to_string(const Rational& value);

bool is_integer(const Rational& value);

}  // namespace hoopflux
