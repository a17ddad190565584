#pragma once

#include <optional>
#include <vector>

#include "bfq/rational.hpp"

namespace bfq {

/// Dense matrix over Q. Everything is exact; sizes stay small.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Rat(0)) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rat& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Rat& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  bool is_zero() const;
  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator*(const Rat& s) const;
  Matrix transpose() const;

  /// Columns of this restricted to `cols`, rows to `rows` (index lists).
  Matrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;

  std::size_t rank() const;
  Rat det() const;

  /// Basis of the null space (as columns).
  Matrix nullspace() const;

  /// Solve A x = b; nullopt if inconsistent. A need not be square.
  std::optional<std::vector<Rat>> solve(const std::vector<Rat>& b) const;

  /// Inverse; throws std::domain_error if singular.
  Matrix inverse() const;

  /// Column indices of a maximal independent set (pivot columns of rref), in order.
  std::vector<std::size_t> pivot_columns() const;

  /// Signature (n_plus - n_minus) of a symmetric matrix; throws if not symmetric
  /// or degenerate entries block the congruence reduction of a singular matrix
  /// (zero eigenvalue-space is allowed and ignored).
  long long signature() const;

 private:
  std::size_t rows_, cols_;
  std::vector<Rat> a_;
};

}  // namespace bfq
