#pragma once

// Dense exact linear algebra over the rationals.

#include <cstddef>
#include <optional>
#include <vector>

#include "hoopflux/rational.hpp"

namespace hoopflux {

using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>;  // row-major, rows may be empty only if cols == 0

Matrix zero_matrix(std::size_t rows, std::size_t cols);
Matrix identity_matrix(std::size_t n);
Matrix transpose(const Matrix& m, std::size_t cols);
Matrix multiply(const Matrix& a, const Matrix& b, std::size_t b_cols);

struct Rref {
  Matrix reduced;
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

/// Reduced row echelon form; `cols` is needed when `m` has no rows.
Rref rref(Matrix m, std::size_t cols);
std::size_t rank(const Matrix& m, std::size_t cols);

/// Determinant by fraction-free (Bareiss) elimination after clearing
/// denominators row by row. Throws DimensionMismatch for non-square input.
Rational determinant(const Matrix& m);

/// Basis of {x : m x = 0} in reduced form.
Matrix right_kernel(const Matrix& m, std::size_t cols);
/// Basis of {y : y^T m = 0}.
Matrix left_kernel(const Matrix& m, std::size_t cols);

/// Some solution of a x = b, or nullopt when inconsistent.
std::optional<Vector> solve(const Matrix& a, std::size_t cols, const Vector& b);

/// Greedy first-index selection of rows that raise the rank.
std::vector<std::size_t> independent_rows(const Matrix& m, std::size_t cols);

}  // namespace hoopflux
