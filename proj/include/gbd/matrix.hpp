#pragma once

#include <initializer_list>
#include <sstream>
#include <vector>

#include "gbd/common.hpp"

namespace gbd {

/// Dense matrix over arbitrary-precision integers. Just enough linear algebra
/// for incidence data and telescoped products; no floating point anywhere.
class IntMat {
 public:
  IntMat() = default;
  IntMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}
  IntMat(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
    a_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
      require(static_cast<int>(r.size()) == cols_, "ragged matrix initialiser");
      for (long long v : r) a_.emplace_back(v);
    }
  }

  static IntMat identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMat diagonal(const std::vector<Int>& d) {
    IntMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Int& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Int& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  friend IntMat operator*(const IntMat& a, const IntMat& b) {
    require(a.cols_ == b.rows_, "matrix shape mismatch in product");
    IntMat c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const Int& aik = a(i, k);
        if (aik == 0) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  std::vector<Int> apply(const std::vector<Int>& x) const {
    require(static_cast<int>(x.size()) == cols_, "vector length mismatch");
    std::vector<Int> y(rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  friend bool operator==(const IntMat& a, const IntMat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator!=(const IntMat& a, const IntMat& b) { return !(a == b); }

  bool entrywise_positive() const {
    for (const Int& v : a_)
      if (v <= 0) return false;
    return rows_ > 0 && cols_ > 0;
  }

  bool entrywise_at_least(const Int& bound) const {
    for (const Int& v : a_)
      if (v < bound) return false;
    return rows_ > 0 && cols_ > 0;
  }

  Int min_entry() const {
    internal_check(!a_.empty(), "min_entry of empty matrix");
    Int m = a_[0];
    for (const Int& v : a_)
      if (v < m) m = v;
    return m;
  }

  Int max_entry() const {
    internal_check(!a_.empty(), "max_entry of empty matrix");
    Int m = a_[0];
    for (const Int& v : a_)
      if (v > m) m = v;
    return m;
  }

  /// No zero rows and no zero columns, all entries nonnegative.
  bool proper() const {
    if (rows_ == 0 || cols_ == 0) return false;
    for (const Int& v : a_)
      if (v < 0) return false;
    for (int i = 0; i < rows_; ++i) {
      bool nz = false;
      for (int j = 0; j < cols_; ++j) nz = nz || (*this)(i, j) != 0;
      if (!nz) return false;
    }
    for (int j = 0; j < cols_; ++j) {
      bool nz = false;
      for (int i = 0; i < rows_; ++i) nz = nz || (*this)(i, j) != 0;
      if (!nz) return false;
    }
    return true;
  }

  /// Determinant by fraction-free elimination; exact over the integers.
  Int det() const {
    internal_check(rows_ == cols_, "det of non-square matrix");
    int n = rows_;
    if (n == 0) return 1;
    IntMat m = *this;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
      if (m(k, k) == 0) {
        int p = -1;
        for (int i = k + 1; i < n; ++i)
          if (m(i, k) != 0) {
            p = i;
            break;
          }
        if (p < 0) return 0;
        for (int j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
        sign = -sign;
      }
      for (int i = k + 1; i < n; ++i)
        for (int j = k + 1; j < n; ++j) {
          Int t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
          m(i, j) = t / prev;
        }
      prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
      if (i) os << "; ";
      for (int j = 0; j < cols_; ++j) {
        if (j) os << " ";
        os << (*this)(i, j);
      }
    }
    os << "]";
    return os.str();
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Int> a_;
};

}  // namespace gbd
