#include "hoopflux/linalg.hpp"

#include <utility>

#include "hoopflux/error.hpp"

namespace hoopflux {

Matrix zero_matrix(std::size_t rows, std::size_t cols) { return Matrix(rows, Vector(cols, Rational(0))); }

Matrix identity_matrix(std::size_t n) {
  Matrix m = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Matrix transpose(const Matrix& m, std::size_t cols) {
  Matrix t = zero_matrix(cols, m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = m[i][j];
  }
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b, std::size_t b_cols) {
  Matrix out = zero_matrix(a.size(), b_cols);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < b_cols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

Rref rref(Matrix m, std::size_t cols) {
  Rref out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t p = row;
    while (p < m.size() && m[p][col] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[row], m[p]);
    const Rational inv = 1 / m[row][col];
    for (std::size_t j = col; j < cols; ++j) m[row][j] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][col] == 0) continue;
      const Rational factor = m[i][col];
      for (std::size_t j = col; j < cols; ++j) m[i][j] -= factor * m[row][j];
    }
    out.pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const Matrix& m, std::size_t cols) { return rref(m, cols).pivots.size(); }

Rational determinant(const Matrix& input) {
  const std::size_t n = input.size();
  for (const Vector& r : input) {
    if (r.size() != n) throw Error(ErrorCode::DimensionMismatch, "determinant of a non-square matrix");
  }
  if (n == 0) return 1;
  // Clear denominators so the elimination runs over the integers.
  std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
  Rational scale = 1;
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class l = 1;
    for (const Rational& x : input[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    scale *= Rational(l);
    for (std::size_t j = 0; j < n; ++j) a[i][j] = input[i][j].get_num() * (l / input[i][j].get_den());
  }
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  Rational det(a[n - 1][n - 1] * sign);
  return det / scale;
}

Matrix right_kernel(const Matrix& m, std::size_t cols) {
  const Rref r = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t p : r.pivots) is_pivot[p] = true;
  Matrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.reduced[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

Matrix left_kernel(const Matrix& m, std::size_t cols) { return right_kernel(transpose(m, cols), m.size()); }

std::optional<Vector> solve(const Matrix& a, std::size_t cols, const Vector& b) {
  if (b.size() != a.size()) throw Error(ErrorCode::DimensionMismatch, "right-hand side length mismatch");
  Matrix aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  const Rref r = rref(std::move(aug), cols + 1);
  Vector x(cols, Rational(0));
  for (std::size_t i = 0; i < r.pivots.size(); ++i) {
    if (r.pivots[i] == cols) return std::nullopt;
    x[r.pivots[i]] = r.reduced[i][cols];
  }
  return x;
}

std::vector<std::size_t> independent_rows(const Matrix& m, std::size_t cols) {
  std::vector<std::size_t> chosen;
  Matrix acc;
  for (std::size_t i = 0; i < m.size(); ++i) {
    acc.push_back(m[i]);
    if (rank(acc, cols) == acc.size()) {
      chosen.push_back(i);
    } else {
      acc.pop_back();
    }
  }
  return chosen;
}

}  // namespace hoopflux
