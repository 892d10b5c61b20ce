#pragma once

// Exact multivariate polynomials with rational coefficients.

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hoopflux/linalg.hpp"

namespace hoopflux {

/// Exponent per variable (0-based); trailing zeros are trimmed so each
/// monomial has exactly one representation.
using Monomial = std::vector<unsigned>;

class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial constant(const Rational& value);
  static Polynomial variable(std::size_t index);
  /// sum_i coefficients[i] * x_i
  static Polynomial linear(const Vector& coefficients);

  const std::map<Monomial, Rational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  Rational constant_term() const;
  /// One past the highest variable index with a nonzero exponent.
  std::size_t variable_count() const noexcept;
  unsigned degree() const noexcept;

  void add_term(Monomial monomial, const Rational& coefficient);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(const Rational& factor) const;
  Polynomial pow(unsigned exponent) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::map<Monomial, Rational> terms_;
};

Polynomial derivative(const Polynomial& p, std::size_t variable);
/// sum_i direction[i] * dp/dx_i
Polynomial directional_derivative(const Polynomial& p, const Vector& direction);
/// Replaces x_i by images[i]. Throws DimensionMismatch when p uses a variable
/// without an image.
Polynomial substitute(const Polynomial& p, const std::vector<Polynomial>& images);
/// Throws DimensionMismatch when the point is too short.
Rational evaluate(const Polynomial& p, const Vector& point);

/// Maps a variable name to a 0-based index; throws for unknown names.
using VariableResolver = std::function<std::size_t(std::string_view)>;
using VariableNamer = std::function<std::string(std::size_t)>;

/// Grammar: sums and differences of products of rational literals (p or p/q),
/// variables, parenthesized expressions, with nonnegative integer powers `^k`.
/// Variable names are [A-Za-z_][A-Za-z0-9_.~]* or x_{...}. Throws Parse with
/// the column of the offending character.
Polynomial parse_polynomial(std::string_view text, const VariableResolver& resolve);
/// Variables x1, x2, ... (1-based).
Polynomial parse_polynomial(std::string_view text);

/// Terms by descending degree, then descending exponent vector.
std::string format(const Polynomial& p, const VariableNamer& name);
/// Variables written x1, x2, ...
std::string format(const Polynomial& p);

}  // namespace hoopflux
