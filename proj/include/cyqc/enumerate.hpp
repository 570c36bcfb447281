// Short-vector enumeration over exact rationals.
//
// Decomposes the quadratic form as Q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2
// (rational LDL^T) and walks integer coordinates inside exact bounds; no
// floating point.  Output is the complete, duplicate-free list of nonzero
// vectors of norm <= bound, sorted lexicographically on coordinates.
#pragma once

#include <functional>

#include "cyqc/lattice.hpp"

namespace cyqc {

struct LdlDecomposition {
  int n = 0;
  std::vector<Rat> d;  // positive diagonal
  MatQ u;              // unit upper triangular
};

inline LdlDecomposition ldl(const MatQ& g) {
  int n = g.rows;
  LdlDecomposition out;
  out.n = n;
  out.d.assign(n, Rat(0));
  out.u = identity_q(n);
  MatQ a = g;
  for (int i = 0; i < n; ++i) {
    out.d[i] = a(i, i);
    if (out.d[i] <= 0) throw std::domain_error("form not positive definite");
    for (int j = i + 1; j < n; ++j) out.u(i, j) = a(i, j) / out.d[i];
    for (int r = i + 1; r < n; ++r)
      for (int c = i + 1; c < n; ++c)
        a(r, c) -= a(i, r) * a(i, c) / out.d[i];
  }
  return out;
}

// All nonzero x with x G x^T <= bound; empty when rank is 0 or bound < 0.
// Internally enumerates on a size-reduced basis and maps coordinates back;
// output is in the caller's basis, sorted lexicographically.
inline std::vector<VecZ> vectors_up_to_norm(const GramLattice& l, const Rat& bound) {
  std::vector<VecZ> out;
  if (l.rank == 0 || bound < 0) return out;
  ReducedBasis red = reduce_gram(l.gram);
  LdlDecomposition f = ldl(red.gram);
  int n = l.rank;
  VecZ x(n, 0);
  // level i has budget t_i; c_i = sum_{j>i} u_ij x_j
  std::function<void(int, const Rat&)> rec = [&](int i, const Rat& budget) {
    if (i < 0) {
      bool nonzero = false;
      for (long v : x)
        if (v != 0) nonzero = true;
      if (!nonzero) return;  // skip zero vector
      VecZ orig(n, 0);
      for (int r = 0; r < n; ++r) {
        if (x[r] == 0) continue;
        for (int c = 0; c < n; ++c) orig[c] += x[r] * to_long(red.transform(r, c));
      }
      out.push_back(orig);
      return;
    }
    Rat c = 0;
    for (int j = i + 1; j < n; ++j)
      if (x[j] != 0) c += f.u(i, j) * x[j];
    // |x_i + c| <= sqrt(budget / d_i)
    Rat r2 = budget / f.d[i];
    Int rr = isqrt_rat(r2);
    Int lo = ceil_rat(Rat(-c) - Rat(rr) - 1);
    Int hi = floor_rat(Rat(-c) + Rat(rr) + 1);
    for (Int v = lo; v <= hi; ++v) {
      Rat term = (Rat(v) + c) * (Rat(v) + c) * f.d[i];
      if (term > budget) continue;
      x[i] = to_long(v);
      rec(i - 1, budget - term);
    }
    x[i] = 0;
  };
  rec(n - 1, bound);
  std::sort(out.begin(), out.end());
  return out;
}

inline Rat norm_of(const MatQ& g, const VecZ& v) {
  Rat s = 0;
  int n = g.rows;
  for (int i = 0; i < n; ++i) {
    if (v[i] == 0) continue;
    for (int j = 0; j < n; ++j)
      if (v[j] != 0) s += g(i, j) * v[i] * v[j];
  }
  return s;
}

inline Rat inner(const MatQ& g, const VecZ& v, const VecZ& w) {
  Rat s = 0;
  int n = g.rows;
  for (int i = 0; i < n; ++i) {
    if (v[i] == 0) continue;
    for (int j = 0; j < n; ++j)
      if (w[j] != 0) s += g(i, j) * v[i] * w[j];
  }
  return s;
}

// Smallest nonzero norm; lattice must be positive definite and of rank >= 1.
inline Rat minimal_norm(const GramLattice& l) {
  Rat bound = l.gram(0, 0);
  for (int i = 1; i < l.rank; ++i) bound = std::min(bound, l.gram(i, i));
  auto vecs = vectors_up_to_norm(l, bound);
  Rat best = bound;
  for (const auto& v : vecs) best = std::min(best, norm_of(l.gram, v));
  return best;
}

inline std::vector<VecZ> minimal_vectors(const GramLattice& l) {
  if (l.rank == 0) return {};
  Rat m = minimal_norm(l);
  std::vector<VecZ> out;
  for (const auto& v : vectors_up_to_norm(l, m))
    if (norm_of(l.gram, v) == m) out.push_back(v);
  return out;
}

}  // namespace cyqc
