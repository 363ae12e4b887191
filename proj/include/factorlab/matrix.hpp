#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "factorlab/cyclotomic.hpp"

namespace factorlab {

// Dense matrix over Q(eps_N). Sizes here are small (desk scale), so plain
// Gauss elimination with exact pivots is enough.
class CMat {
 public:
  CMat() : rows_(0), cols_(0) {}
  CMat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, Cyc()) {}

  static CMat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Cyc& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Cyc& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool is_zero() const;
  bool operator==(const CMat& rhs) const;
  bool operator!=(const CMat& rhs) const { return !(*this == rhs); }

  CMat operator+(const CMat& rhs) const;
  CMat operator-(const CMat& rhs) const;
  CMat operator*(const CMat& rhs) const;
  CMat scaled(const Cyc& c) const;
  CMat transpose() const;
  Cyc trace() const;

  // Row echelon with pivot bookkeeping.
  CMat rref(std::vector<std::size_t>* pivot_cols = nullptr) const;
  std::size_t rank() const;
  // Columns form a basis of the right null space.
  CMat kernel() const;
  // One solution of A x = rhs, or nullopt if inconsistent.
  std::optional<std::vector<Cyc>> solve(const std::vector<Cyc>& rhs) const;

 private:
  std::size_t rows_, cols_;
  std::vector<Cyc> a_;
};

// Incremental row space over Q(eps): feeds rows one by one, keeps a reduced
// basis, reports whether each row enlarged the span. This is the exact
// elimination engine behind relation-span ranks.
class RowSpan {
 public:
  explicit RowSpan(std::size_t dim) : dim_(dim) {}

  // Reduces v against the current basis; if a nonzero remainder is left it
  // joins the basis and the call returns true.
  bool add(std::vector<Cyc> v);
  bool contains(std::vector<Cyc> v) const;
  std::size_t rank() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  // Indices not used as pivots: coordinates of a complement basis.
  std::vector<std::size_t> free_coordinates() const;

 private:
  void reduce_inplace(std::vector<Cyc>& v) const;

  std::size_t dim_;
  std::vector<std::vector<Cyc>> rows_;  // reduced, pivot normalized to 1
  std::vector<std::size_t> pivots_;     // pivot column of rows_[k]
};

}  // namespace factorlab
