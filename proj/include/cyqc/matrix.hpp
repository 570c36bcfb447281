// Small dense exact matrices: rational Gauss elimination plus the integer
// normal forms (HNF, SNF, kernels, saturation) used for lattice bookkeeping.
// Everything here targets rank <= 10; no attempt is made to be asymptotically
// clever.
#pragma once

#include <algorithm>
#include <cassert>
#include <numeric>
#include <optional>
#include <sstream>

#include "cyqc/rational.hpp"

namespace cyqc {

template <typename T>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(size_t(r) * c) {}
  T& operator()(int i, int j) { return a[size_t(i) * cols + j]; }
  const T& operator()(int i, int j) const { return a[size_t(i) * cols + j]; }
  bool operator==(const Mat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

using MatQ = Mat<Rat>;
using MatZ = Mat<Int>;
using VecZ = std::vector<long>;

inline MatQ identity_q(int n) {
  MatQ m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

inline MatZ identity_z(int n) {
  MatZ m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

template <typename T>
Mat<T> transpose(const Mat<T>& m) {
  Mat<T> t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

template <typename T>
Mat<T> mul(const Mat<T>& x, const Mat<T>& y) {
  assert(x.cols == y.rows);
  Mat<T> z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const T& v = x(i, k);
      if (v == 0) continue;
      for (int j = 0; j < y.cols; ++j) z(i, j) += v * y(k, j);
    }
  return z;
}

inline MatQ to_q(const MatZ& m) {
  MatQ q(m.rows, m.cols);
  for (size_t i = 0; i < m.a.size(); ++i) q.a[i] = Rat(m.a[i]);
  return q;
}

inline bool is_symmetric(const MatQ& m) {
  if (m.rows != m.cols) return false;
  for (int i = 0; i < m.rows; ++i)
    for (int j = i + 1; j < m.cols; ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

inline Rat det_q(MatQ m) {
  assert(m.rows == m.cols);
  int n = m.rows;
  Rat d = 1;
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int r = c; r < n; ++r)
      if (m(r, c) != 0) {
        p = r;
        break;
      }
    if (p < 0) return Rat(0);
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    Rat inv = 1 / m(c, c);
    for (int r = c + 1; r < n; ++r) {
      if (m(r, c) == 0) continue;
      Rat f = m(r, c) * inv;
      for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return d;
}

inline MatQ inverse_q(MatQ m) {
  assert(m.rows == m.cols);
  int n = m.rows;
  MatQ inv = identity_q(n);
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int r = c; r < n; ++r)
      if (m(r, c) != 0) {
        p = r;
        break;
      }
    if (p < 0) throw std::domain_error("degenerate lattice");
    if (p != c)
      for (int j = 0; j < n; ++j) {
        std::swap(m(p, j), m(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    Rat piv = 1 / m(c, c);
    for (int j = 0; j < n; ++j) {
      m(c, j) *= piv;
      inv(c, j) *= piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || m(r, c) == 0) continue;
      Rat f = m(r, c);
      for (int j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

inline int rank_q(MatQ m) {
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = -1;
    for (int i = r; i < m.rows; ++i)
      if (m(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    Rat inv = 1 / m(r, c);
    for (int i = r + 1; i < m.rows; ++i) {
      if (m(i, c) == 0) continue;
      Rat f = m(i, c) * inv;
      for (int j = c; j < m.cols; ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

// Row Hermite normal form.  Returns H and, if transform != nullptr, a
// unimodular U with U * m = H (rows of U matching zero rows of H span the
// left kernel).  Pivots positive, entries above pivots reduced to [0, pivot).
inline MatZ hnf_row(MatZ m, MatZ* transform = nullptr) {
  int rows = m.rows, cols = m.cols;
  MatZ u = identity_z(rows);
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    // euclidean elimination in column c below row r
    while (true) {
      int p = -1;
      for (int i = r; i < rows; ++i)
        if (m(i, c) != 0 && (p < 0 || abs(m(i, c)) < abs(m(p, c)))) p = i;
      if (p < 0) break;
      if (p != r)
        for (int j = 0; j < cols; ++j) std::swap(m(p, j), m(r, j));
      if (p != r)
        for (int j = 0; j < rows; ++j) std::swap(u(p, j), u(r, j));
      bool done = true;
      for (int i = r + 1; i < rows; ++i) {
        if (m(i, c) == 0) continue;
        Int q = floor_div(m(i, c), m(r, c));
        if (q != 0) {
          for (int j = 0; j < cols; ++j) m(i, j) -= q * m(r, j);
          for (int j = 0; j < rows; ++j) u(i, j) -= q * u(r, j);
        }
        if (m(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (m(r, c) == 0) continue;
    if (m(r, c) < 0) {
      for (int j = 0; j < cols; ++j) m(r, j) = -m(r, j);
      for (int j = 0; j < rows; ++j) u(r, j) = -u(r, j);
    }
    for (int i = 0; i < r; ++i) {
      Int q = floor_div(m(i, c), m(r, c));
      if (q != 0) {
        for (int j = 0; j < cols; ++j) m(i, j) -= q * m(r, j);
        for (int j = 0; j < rows; ++j) u(i, j) -= q * u(r, j);
      }
    }
    ++r;
  }
  if (transform) *transform = u;
  return m;
}

inline int rank_z(const MatZ& m) {
  MatZ h = hnf_row(m);
  int r = 0;
  for (int i = 0; i < h.rows; ++i) {
    bool nonzero = false;
    for (int j = 0; j < h.cols; ++j)
      if (h(i, j) != 0) nonzero = true;
    if (nonzero) ++r;
  }
  return r;
}

// Drops zero rows of an HNF matrix.
inline MatZ drop_zero_rows(const MatZ& h) {
  std::vector<int> keep;
  for (int i = 0; i < h.rows; ++i)
    for (int j = 0; j < h.cols; ++j)
      if (h(i, j) != 0) {
        keep.push_back(i);
        break;
      }
  MatZ out(int(keep.size()), h.cols);
  for (size_t i = 0; i < keep.size(); ++i)
    for (int j = 0; j < h.cols; ++j) out(int(i), j) = h(keep[i], j);
  return out;
}

// Basis (as HNF rows) of {x in Z^cols : m * x^T = 0}.
inline MatZ right_kernel(const MatZ& m) {
  MatZ u;
  MatZ h = hnf_row(transpose(m), &u);
  std::vector<int> zr;
  for (int i = 0; i < h.rows; ++i) {
    bool zero = true;
    for (int j = 0; j < h.cols; ++j)
      if (h(i, j) != 0) zero = false;
    if (zero) zr.push_back(i);
  }
  MatZ k(int(zr.size()), m.cols);
  for (size_t i = 0; i < zr.size(); ++i)
    for (int j = 0; j < m.cols; ++j) k(int(i), j) = u(zr[i], j);
  return hnf_row(k);
}

// Saturation of the row span: basis of (row span over Q) intersected with Z^n.
inline MatZ saturate_rows(const MatZ& m) {
  MatZ w = right_kernel(m);
  if (w.rows == 0) return identity_z(m.cols);
  return right_kernel(w);
}

// Solves X * basis = vecs over the integers (basis has full row rank).
// Returns nullopt if some row is not an integral combination.
inline std::optional<MatZ> solve_in_basis(const MatZ& basis, const MatZ& vecs) {
  // rational solve then integrality check
  int r = basis.rows, n = basis.cols;
  assert(vecs.cols == n);
  // Gaussian elimination on transpose(basis) | transpose(vecs)
  MatQ A(n, r + vecs.rows);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < r; ++j) A(i, j) = Rat(basis(j, i));
    for (int j = 0; j < vecs.rows; ++j) A(i, r + j) = Rat(vecs(j, i));
  }
  int row = 0;
  std::vector<int> pivot_col;
  for (int c = 0; c < r && row < n; ++c) {
    int p = -1;
    for (int i = row; i < n; ++i)
      if (A(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    for (int j = 0; j < A.cols; ++j) std::swap(A(p, j), A(row, j));
    Rat inv = 1 / A(row, c);
    for (int j = 0; j < A.cols; ++j) A(row, j) *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == row || A(i, c) == 0) continue;
      Rat f = A(i, c);
      for (int j = 0; j < A.cols; ++j) A(i, j) -= f * A(row, j);
    }
    pivot_col.push_back(c);
    ++row;
  }
  // consistency: rows past 'row' must have zero rhs
  for (int i = row; i < n; ++i)
    for (int j = 0; j < vecs.rows; ++j)
      if (A(i, r + j) != 0) return std::nullopt;
  MatZ x(vecs.rows, r);
  for (int i = 0; i < row; ++i)
    for (int j = 0; j < vecs.rows; ++j) {
      const Rat& v = A(i, r + j);
      if (!is_integer(v)) return std::nullopt;
      x(j, pivot_col[i]) = num(v);
    }
  return x;
}

// Diagonal of the Smith normal form (nonnegative, d_1 | d_2 | ...).
inline std::vector<Int> snf_diagonal(MatZ m) {
  int rows = m.rows, cols = m.cols;
  int t = 0;
  auto nonzero_at = [&](int i, int j) { return m(i, j) != 0; };
  while (t < rows && t < cols) {
    // find pivot: smallest nonzero abs value in submatrix
    int pi = -1, pj = -1;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j)
        if (nonzero_at(i, j) &&
            (pi < 0 || abs(m(i, j)) < abs(m(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    for (int j = 0; j < cols; ++j) std::swap(m(pi, j), m(t, j));
    for (int i = 0; i < rows; ++i) std::swap(m(i, pj), m(i, t));
    bool clean = true;
    for (int i = t + 1; i < rows; ++i) {
      Int q = floor_div(m(i, t), m(t, t));
      if (q != 0)
        for (int j = 0; j < cols; ++j) m(i, j) -= q * m(t, j);
      if (m(i, t) != 0) clean = false;
    }
    for (int j = t + 1; j < cols; ++j) {
      Int q = floor_div(m(t, j), m(t, t));
      if (q != 0)
        for (int i = 0; i < rows; ++i) m(i, j) -= q * m(i, t);
      if (m(t, j) != 0) clean = false;
    }
    if (!clean) continue;
    // divisibility fixup
    bool divides_all = true;
    for (int i = t + 1; i < rows && divides_all; ++i)
      for (int j = t + 1; j < cols && divides_all; ++j)
        if (m(i, j) % m(t, t) != 0) {
          for (int jj = 0; jj < cols; ++jj) m(t, jj) += m(i, jj);
          divides_all = false;
        }
    if (!divides_all) continue;
    ++t;
  }
  std::vector<Int> d;
  for (int i = 0; i < std::min(rows, cols); ++i) d.push_back(abs(m(i, i)));
  return d;
}

// Invariant factors > 1 of coker(basis -> sub), i.e. of sub expressed in basis.
inline Factors glue_factors(const MatZ& coeff) {
  Factors f;
  for (const Int& d : snf_diagonal(coeff))
    if (d > 1) f.push_back(to_long(d));
  std::sort(f.begin(), f.end());
  return f;
}

template <typename T>
std::string mat_to_string(const Mat<T>& m) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < m.rows; ++i) {
    if (i) os << ";";
    for (int j = 0; j < m.cols; ++j) {
      if (j) os << ",";
      os << m(i, j);
    }
  }
  os << "]";
  return os.str();
}

}  // namespace cyqc
