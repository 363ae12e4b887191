#include "factorlab/matrix.hpp"

#include <stdexcept>

namespace factorlab {

CMat CMat::identity(std::size_t n) {
  CMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Cyc(1);
  return m;
}

bool CMat::is_zero() const {
  for (const auto& c : a_)
    if (!c.is_zero()) return false;
  return true;
}

bool CMat::operator==(const CMat& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) return false;
  for (std::size_t i = 0; i < a_.size(); ++i)
    if (a_[i] != rhs.a_[i]) return false;
  return true;
}

CMat CMat::operator+(const CMat& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("matrix: shape mismatch");
  CMat out(*this);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] += rhs.a_[i];
  return out;
}

CMat CMat::operator-(const CMat& rhs) const {
  return *this + rhs.scaled(Cyc(-1));
}

CMat CMat::operator*(const CMat& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix: shape mismatch");
  CMat out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Cyc& c = at(i, k);
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j)
        out.at(i, j) += c * rhs.at(k, j);
    }
  return out;
}

CMat CMat::scaled(const Cyc& c) const {
  CMat out(*this);
  for (auto& x : out.a_) x *= c;
  return out;
}

CMat CMat::transpose() const {
  CMat out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

Cyc CMat::trace() const {
  Cyc t;
  for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += at(i, i);
  return t;
}

CMat CMat::rref(std::vector<std::size_t>* pivot_cols) const {
  CMat m(*this);
  if (pivot_cols) pivot_cols->clear();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
    std::size_t p = row;
    while (p < rows_ && m.at(p, col).is_zero()) ++p;
    if (p == rows_) continue;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(m.at(row, j), m.at(p, j));
    Cyc inv = m.at(row, col).inverse();
    for (std::size_t j = col; j < cols_; ++j) m.at(row, j) *= inv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == row || m.at(i, col).is_zero()) continue;
      Cyc f = m.at(i, col);
      for (std::size_t j = col; j < cols_; ++j)
        m.at(i, j) -= f * m.at(row, j);
    }
    if (pivot_cols) pivot_cols->push_back(col);
    ++row;
  }
  return m;
}

std::size_t CMat::rank() const {
  std::vector<std::size_t> piv;
  rref(&piv);
  return piv.size();
}

CMat CMat::kernel() const {
  std::vector<std::size_t> piv;
  CMat r = rref(&piv);
  std::vector<bool> is_pivot(cols_, false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < cols_; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  CMat out(cols_, free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    std::size_t f = free_cols[k];
    out.at(f, k) = Cyc(1);
    for (std::size_t i = 0; i < piv.size(); ++i)
      out.at(piv[i], k) = -r.at(i, f);
  }
  return out;
}

std::optional<std::vector<Cyc>> CMat::solve(const std::vector<Cyc>& rhs) const {
  if (rhs.size() != rows_) throw std::invalid_argument("solve: shape mismatch");
  CMat aug(rows_, cols_ + 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_) = rhs[i];
  }
  std::vector<std::size_t> piv;
  CMat r = aug.rref(&piv);
  for (auto c : piv)
    if (c == cols_) return std::nullopt;  // pivot in the rhs column
  std::vector<Cyc> x(cols_, Cyc());
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = r.at(i, cols_);
  return x;
}

void RowSpan::reduce_inplace(std::vector<Cyc>& v) const {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const Cyc& c = v[pivots_[k]];
    if (c.is_zero()) continue;
    Cyc f = c;
    for (std::size_t j = 0; j < dim_; ++j) v[j] -= f * rows_[k][j];
  }
}

bool RowSpan::add(std::vector<Cyc> v) {
  if (v.size() != dim_) throw std::invalid_argument("rowspan: dim mismatch");
  reduce_inplace(v);
  std::size_t p = 0;
  while (p < dim_ && v[p].is_zero()) ++p;
  if (p == dim_) return false;
  Cyc inv = v[p].inverse();
  for (auto& c : v) c *= inv;
  // Back-substitute into the existing rows so every stored row stays reduced.
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    Cyc f = rows_[k][p];
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < dim_; ++j) rows_[k][j] -= f * v[j];
  }
  rows_.push_back(std::move(v));
  pivots_.push_back(p);
  return true;
}

bool RowSpan::contains(std::vector<Cyc> v) const {
  if (v.size() != dim_) throw std::invalid_argument("rowspan: dim mismatch");
  reduce_inplace(v);
  for (const auto& c : v)
    if (!c.is_zero()) return false;
  return true;
}

std::vector<std::size_t> RowSpan::free_coordinates() const {
  std::vector<bool> used(dim_, false);
  for (auto p : pivots_) used[p] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim_; ++i)
    if (!used[i]) out.push_back(i);
  return out;
}

}  // namespace factorlab
