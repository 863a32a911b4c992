#pragma once

// Dense matrices over the integers with exact arithmetic, plus the handful of
// normal-form computations the rest of the library needs: Smith normal form,
// rank, and determinants. Sizes here are tiny (ranks of wedge presentations),
// so clarity wins over asymptotics throughout.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "flowknot/errors.hpp"

namespace flowknot {

using bigint = boost::multiprecision::cpp_int;

class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, bigint(0)) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw invalid_input("matrix rows have unequal lengths");
      for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bigint& at(std::size_t i, std::size_t j) {
    check(i, j);
    return data_[i * cols_ + j];
  }
  const bigint& at(std::size_t i, std::size_t j) const {
    check(i, j);
    return data_[i * cols_ + j];
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw invalid_input("matrix product shape mismatch");
    IntMatrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const bigint& a = at(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) p.at(i, j) += a * o.at(k, j);
      }
    return p;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? "; " : "";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) s += " ";
        s += at(i, j).str();
      }
    }
    s += "]";
    return s;
  }

 private:
  void check(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw internal_error("matrix index out of range");
  }

  std::size_t rows_, cols_;
  std::vector<bigint> data_;
};

/// Invariant factors of an integer matrix: the nonzero diagonal of its Smith
/// normal form, in divisibility order (d1 | d2 | ...), all positive. The rank
/// of the matrix is the number of entries returned.
inline std::vector<bigint> smith_invariants(IntMatrix m) {
  const std::size_t r = m.rows(), c = m.cols();
  std::vector<bigint> diag;
  std::size_t t = 0;
  auto abs_of = [](const bigint& v) { return v < 0 ? bigint(-v) : v; };
  while (t < r && t < c) {
    // Locate a nonzero pivot of minimal absolute value in the trailing block.
    std::size_t pi = t, pj = t;
    bigint best = 0;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j) {
        const bigint a = abs_of(m.at(i, j));
        if (a != 0 && (best == 0 || a < best)) {
          best = a;
          pi = i;
          pj = j;
        }
      }
    if (best == 0) break;
    for (std::size_t j = 0; j < c; ++j) std::swap(m.at(t, j), m.at(pi, j));
    for (std::size_t i = 0; i < r; ++i) std::swap(m.at(i, t), m.at(i, pj));

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (m.at(i, t) == 0) continue;
        const bigint q = m.at(i, t) / m.at(t, t);
        for (std::size_t j = t; j < c; ++j) m.at(i, j) -= q * m.at(t, j);
        if (m.at(i, t) != 0) {
          // Remainder smaller than the pivot: promote it and restart.
          for (std::size_t j = 0; j < c; ++j) std::swap(m.at(t, j), m.at(i, j));
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (m.at(t, j) == 0) continue;
        const bigint q = m.at(t, j) / m.at(t, t);
        for (std::size_t i = t; i < r; ++i) m.at(i, j) -= q * m.at(i, t);
        if (m.at(t, j) != 0) {
          for (std::size_t i = 0; i < r; ++i) std::swap(m.at(i, t), m.at(i, j));
          clean = false;
        }
      }
      if (clean) {
        // Pivot must divide every remaining entry; if not, fold the offending
        // row into row t and reduce again.
        for (std::size_t i = t + 1; i < r && clean; ++i)
          for (std::size_t j = t + 1; j < c && clean; ++j)
            if (m.at(i, j) % m.at(t, t) != 0) {
              for (std::size_t jj = t; jj < c; ++jj) m.at(t, jj) += m.at(i, jj);
              clean = false;
            }
      }
    }
    diag.push_back(abs_of(m.at(t, t)));
    ++t;
  }
  for (std::size_t i = 0; i + 1 < diag.size(); ++i)
    if (diag[i + 1] % diag[i] != 0) throw internal_error("smith invariants out of divisibility order");
  return diag;
}

inline std::size_t matrix_rank(const IntMatrix& m) { return smith_invariants(m).size(); }

/// Exact determinant via Bareiss fraction-free elimination.
inline bigint determinant(IntMatrix m) {
  if (m.rows() != m.cols()) throw invalid_input("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  bigint sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m.at(swap_row, k) == 0) ++swap_row;
      if (swap_row == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(swap_row, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        bigint v = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        m.at(i, j) = v / prev;  // exact by Bareiss
      }
    prev = m.at(k, k);
  }
  return sign * m.at(n - 1, n - 1);
}

}  // namespace flowknot
