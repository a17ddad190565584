#include "bfq/matrix.hpp"

#include <stdexcept>

namespace bfq {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool Matrix::is_zero() const {
  for (const auto& x : a_)
    if (x != 0) return false;
  return true;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  Matrix r(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  Matrix r(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
  Matrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rat& v = at(i, k);
      if (v == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        if (o.at(k, j) == 0) continue;
        r.at(i, j) += v * o.at(k, j);
      }
    }
  return r;
}

Matrix Matrix::operator*(const Rat& s) const {
  Matrix r(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

Matrix Matrix::submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
  Matrix r(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) r.at(i, j) = at(rows[i], cols[j]);
  return r;
}

namespace {

// Row echelon reduction in place; returns pivot (row, col) pairs.
std::vector<std::pair<std::size_t, std::size_t>> echelon(Matrix& m) {
  std::vector<std::pair<std::size_t, std::size_t>> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(row, j));
    Rat inv = Rat(1) / m.at(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m.at(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m.at(i, col) == 0) continue;
      Rat f = m.at(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(row, j);
    }
    pivots.emplace_back(row, col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t Matrix::rank() const {
  Matrix m = *this;
  return echelon(m).size();
}

std::vector<std::size_t> Matrix::pivot_columns() const {
  Matrix m = *this;
  auto pv = echelon(m);
  std::vector<std::size_t> cols;
  cols.reserve(pv.size());
  for (auto& p : pv) cols.push_back(p.second);
  return cols;
}

Rat Matrix::det() const {
  if (rows_ != cols_) throw std::invalid_argument("det of non-square matrix");
  Matrix m = *this;
  Rat d = 1;
  for (std::size_t col = 0; col < m.cols(); ++col) {
    std::size_t sel = col;
    while (sel < m.rows() && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows()) return Rat(0);
    if (sel != col) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(col, j));
      d = -d;
    }
    d *= m.at(col, col);
    Rat inv = Rat(1) / m.at(col, col);
    for (std::size_t i = col + 1; i < m.rows(); ++i) {
      if (m.at(i, col) == 0) continue;
      Rat f = m.at(i, col) * inv;
      for (std::size_t j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(col, j);
    }
  }
  return d;
}

Matrix Matrix::nullspace() const {
  Matrix m = *this;
  auto pivots = echelon(m);
  std::vector<bool> is_pivot(cols_, false);
  for (auto& p : pivots) is_pivot[p.second] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < cols_; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix basis(cols_, free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    std::size_t fc = free_cols[k];
    basis.at(fc, k) = 1;
    for (auto& p : pivots) basis.at(p.second, k) = -m.at(p.first, fc);
  }
  return basis;
}

std::optional<std::vector<Rat>> Matrix::solve(const std::vector<Rat>& b) const {
  if (b.size() != rows_) throw std::invalid_argument("solve: rhs size mismatch");
  Matrix aug(rows_, cols_ + 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_) = b[i];
  }
  Matrix m = aug;
  auto pivots = echelon(m);
  std::vector<Rat> x(cols_, Rat(0));
  for (auto& p : pivots) {
    if (p.second == cols_) return std::nullopt;  // row [0 ... 0 | 1]
    x[p.second] = m.at(p.first, cols_);
  }
  return x;
}

Matrix Matrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
  Matrix aug(rows_, 2 * cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_ + i) = 1;
  }
  auto pivots = echelon(aug);
  if (pivots.size() != rows_) throw std::domain_error("singular matrix");
  for (auto& p : pivots)
    if (p.second >= cols_) throw std::domain_error("singular matrix");
  Matrix inv(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
  return inv;
}

long long Matrix::signature() const {
  if (rows_ != cols_) throw std::invalid_argument("signature of non-square matrix");
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (at(i, j) != at(j, i)) throw std::invalid_argument("signature of non-symmetric matrix");
  Matrix m = *this;
  std::size_t n = rows_;
  long long sig = 0;
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    // Find a nonzero diagonal entry among the remaining block.
    std::size_t piv = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && m.at(i, i) != 0) { piv = i; break; }
    if (piv == n) {
      // Look for an off-diagonal entry and mix the two rows/cols to expose one.
      std::size_t r = n, c = n;
      for (std::size_t i = 0; i < n && r == n; ++i) {
        if (done[i]) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
          if (done[j]) continue;
          if (m.at(i, j) != 0) { r = i; c = j; break; }
        }
      }
      if (r == n) break;  // remaining block is zero
      for (std::size_t j = 0; j < n; ++j) m.at(r, j) += m.at(c, j);
      for (std::size_t i = 0; i < n; ++i) m.at(i, r) += m.at(i, c);
      piv = r;
    }
    Rat d = m.at(piv, piv);
    sig += (d > 0) ? 1 : -1;
    done[piv] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || m.at(i, piv) == 0) continue;
      Rat f = m.at(i, piv) / d;
      for (std::size_t j = 0; j < n; ++j) m.at(i, j) -= f * m.at(piv, j);
      for (std::size_t j = 0; j < n; ++j) m.at(j, i) -= f * m.at(j, piv);
    }
  }
  return sig;
}

}  // namespace bfq
