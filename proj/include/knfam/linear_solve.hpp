#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "knfam/rational.hpp"

namespace knfam {

/// Dense matrix over Q, row-major.
class RationalMatrix {
public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<Rational> apply(const std::vector<Rational>& x) const {
    if (x.size() != cols_) throw std::invalid_argument("matrix/vector size mismatch");
    std::vector<Rational> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!(*this)(i, j).is_zero() && !x[j].is_zero()) y[i] += (*this)(i, j) * x[j];
    return y;
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

struct LinearSolution {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t rank = 0;
  bool consistent = false;
  /// Free variables set to zero. Empty when inconsistent.
  std::vector<Rational> particular;
  std::vector<std::vector<Rational>> nullspace;
  /// When inconsistent: y with y^T A = 0 and y^T b != 0.
  std::vector<Rational> certificate;
  Rational certificate_value;
};

namespace detail {

// Integer echelon form produced by fraction-free (Bareiss) elimination.
// Pivot choice is the first nonzero entry in the column.
struct Echelon {
  std::vector<std::vector<mpz_class>> m;  // rows x (cols + extra)
  std::vector<std::size_t> pivot_cols;
  std::vector<mpz_class> row_scale;       // original row i was multiplied by row_scale[i]
  std::vector<std::size_t> perm;          // echelon row r came from original row perm[r]
};

inline Echelon bareiss(const RationalMatrix& A, const std::vector<Rational>* rhs, bool track) {
  const std::size_t n = A.rows(), c = A.cols();
  const std::size_t width = c + (rhs ? 1 : 0) + (track ? n : 0);
  Echelon e;
  e.m.assign(n, std::vector<mpz_class>(width));
  e.row_scale.resize(n);
  e.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < c; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), A(i, j).gmp().get_den_mpz_t());
    if (rhs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), (*rhs)[i].gmp().get_den_mpz_t());
    e.row_scale[i] = l;
    e.perm[i] = i;
    for (std::size_t j = 0; j < c; ++j) {
      const auto& q = A(i, j).gmp();
      e.m[i][j] = q.get_num() * (l / q.get_den());
    }
    if (rhs) {
      const auto& q = (*rhs)[i].gmp();
      e.m[i][c] = q.get_num() * (l / q.get_den());
    }
    if (track) e.m[i][c + (rhs ? 1 : 0) + i] = 1;
  }

  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t col = 0; col < c && r < n; ++col) {
    std::size_t p = r;
    while (p < n && e.m[p][col] == 0) ++p;
    if (p == n) continue;
    std::swap(e.m[p], e.m[r]);
    std::swap(e.perm[p], e.perm[r]);
    const mpz_class piv = e.m[r][col];
    for (std::size_t i = r + 1; i < n; ++i) {
      const mpz_class lead = e.m[i][col];
      for (std::size_t j = col + 1; j < width; ++j) {
        mpz_class v = piv * e.m[i][j] - lead * e.m[r][j];
        if (prev != 1) {
          if (!mpz_divisible_p(v.get_mpz_t(), prev.get_mpz_t()))
            throw std::logic_error("fraction-free elimination lost exactness");
          mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        }
        e.m[i][j] = std::move(v);
      }
      e.m[i][col] = 0;
    }
    prev = piv;
    e.pivot_cols.push_back(col);
    ++r;
  }
  return e;
}

// Solves the echelon system for x given fixed free-variable values.
inline std::vector<Rational> back_substitute(const Echelon& e, std::size_t cols, bool with_rhs,
                                             std::vector<Rational> x) {
  for (std::size_t k = e.pivot_cols.size(); k-- > 0;) {
    const auto& row = e.m[k];
    std::size_t pc = e.pivot_cols[k];
    Rational acc = with_rhs ? Rational(mpq_class(row[cols])) : Rational(0);
    for (std::size_t j = pc + 1; j < cols; ++j)
      if (row[j] != 0 && !x[j].is_zero()) acc -= Rational(mpq_class(row[j])) * x[j];
    x[pc] = acc / Rational(mpq_class(row[pc]));
  }
  return x;
}

}  // namespace detail

/// Rank over Q by fraction-free elimination.
inline std::size_t rank(const RationalMatrix& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  return detail::bareiss(A, nullptr, false).pivot_cols.size();
}

/// Basis of {x : A x = 0}, one vector per free column.
inline std::vector<std::vector<Rational>> nullspace(const RationalMatrix& A) {
  std::vector<std::vector<Rational>> basis;
  auto e = detail::bareiss(A, nullptr, false);
  std::vector<bool> is_pivot(A.cols(), false);
  for (auto pc : e.pivot_cols) is_pivot[pc] = true;
  for (std::size_t f = 0; f < A.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> x(A.cols());
    x[f] = Rational(1);
    basis.push_back(detail::back_substitute(e, A.cols(), false, std::move(x)));
  }
  return basis;
}

/// Exact solve of A x = b over Q. On inconsistency a certificate row
/// combination is returned instead of a solution.
inline LinearSolution solve(const RationalMatrix& A, const std::vector<Rational>& b,
                            bool want_nullspace = false) {
  if (b.size() != A.rows()) throw std::invalid_argument("right-hand side size mismatch");
  LinearSolution out;
  out.rows = A.rows();
  out.cols = A.cols();
  auto e = detail::bareiss(A, &b, true);
  out.rank = e.pivot_cols.size();
  const std::size_t c = A.cols();

  for (std::size_t r = out.rank; r < A.rows(); ++r) {
    if (e.m[r][c] == 0) continue;
    // Row r reads 0 = m[r][c]; the tracked block says which scaled rows produced it.
    out.consistent = false;
    out.certificate.assign(A.rows(), Rational(0));
    for (std::size_t i = 0; i < A.rows(); ++i) {
      const mpz_class& coef = e.m[r][c + 1 + i];
      if (coef != 0) out.certificate[i] = Rational(mpq_class(coef * e.row_scale[i]));
    }
    out.certificate_value = Rational(mpq_class(e.m[r][c]));
    return out;
  }
  out.consistent = true;
  out.particular = detail::back_substitute(e, c, true, std::vector<Rational>(c));
  if (want_nullspace) {
    std::vector<bool> is_pivot(c, false);
    for (auto pc : e.pivot_cols) is_pivot[pc] = true;
    for (std::size_t f = 0; f < c; ++f) {
      if (is_pivot[f]) continue;
      std::vector<Rational> x(c);
      x[f] = Rational(1);
      out.nullspace.push_back(detail::back_substitute(e, c, false, std::move(x)));
    }
  }
  return out;
}

}  // namespace knfam
