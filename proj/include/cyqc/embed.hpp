// Isometric embedding search: backtracking over the ambient's short vectors,
// prescribing pairwise inner products column by column.
//
// The collecting variant returns every solution found, in deterministic
// order; no equivalence-class reduction is applied (callers must treat the
// list as possibly redundant).  A streaming variant is provided because some
// ambient/source pairs have millions of solutions.
#pragma once

#include <functional>

#include "cyqc/enumerate.hpp"

namespace cyqc {

struct Embedding {
  GramLattice source, ambient;
  std::vector<VecZ> images;  // integer coordinates in the ambient basis
};

// Calls visit(images) for each embedding; visit returns false to stop early.
// Returns number of embeddings visited.
inline long visit_embeddings(const GramLattice& source, const GramLattice& ambient,
                             const std::function<bool(const std::vector<VecZ>&)>& visit) {
  int k = source.rank, n = ambient.rank;
  if (k > n) return 0;
  if (k == 0) {
    visit({});
    return 1;
  }
  // work on size-reduced bases; images are mapped back to the callers' bases
  ReducedBasis sred = reduce_gram(source.gram);
  MatQ src = sred.gram;
  MatQ sinvq = inverse_q(to_q(sred.transform));
  MatZ sinv(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      assert(is_integer(sinvq(i, j)));
      sinv(i, j) = num(sinvq(i, j));
    }
  // scale the ambient Gram to integers
  Int s = 1;
  for (const Rat& v : ambient.gram.a) s = lcm(s, den(v));
  std::vector<std::vector<long>> gs(n, std::vector<long>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gs[i][j] = to_long(Int(num(ambient.gram(i, j) * Rat(s))));
  // required scaled inner products; all must be integral or nothing embeds
  std::vector<std::vector<long>> target(k, std::vector<long>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Rat t = src(i, j) * Rat(s);
      if (!is_integer(t)) return 0;
      target[i][j] = to_long(num(t));
    }
  Rat maxdiag = src(0, 0);
  for (int i = 1; i < k; ++i) maxdiag = std::max(maxdiag, src(i, i));
  std::vector<VecZ> cand = vectors_up_to_norm(ambient, maxdiag);
  int m = int(cand.size());
  if (m == 0) return 0;
  // scaled norms and pairwise dot table
  std::vector<long> cnorm(m);
  for (int c = 0; c < m; ++c) {
    long v = 0;
    for (int i = 0; i < n; ++i) {
      if (cand[c][i] == 0) continue;
      long row = 0;
      for (int j = 0; j < n; ++j) row += gs[i][j] * cand[c][j];
      v += cand[c][i] * row;
    }
    cnorm[c] = v;
  }
  std::vector<std::vector<long>> dot;
  bool use_table = m <= 4096;
  if (use_table) {
    // dot[a][b] via precomputed G * cand[b]
    std::vector<std::vector<long>> gc(m, std::vector<long>(n, 0));
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < n; ++i) {
        long v = 0;
        for (int j = 0; j < n; ++j) v += gs[i][j] * cand[c][j];
        gc[c][i] = v;
      }
    dot.assign(m, std::vector<long>(m));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        long v = 0;
        for (int i = 0; i < n; ++i) v += cand[a][i] * gc[b][i];
        dot[a][b] = v;
      }
  }
  auto pair_dot = [&](int a, int b) -> long {
    if (use_table) return dot[a][b];
    long v = 0;
    for (int i = 0; i < n; ++i) {
      if (cand[a][i] == 0) continue;
      long row = 0;
      for (int j = 0; j < n; ++j) row += gs[i][j] * cand[b][j];
      v += cand[a][i] * row;
    }
    return v;
  };

  std::vector<int> chosen(k, -1);
  long count = 0;
  bool stop = false;
  std::function<void(int)> rec = [&](int col) {
    if (stop) return;
    if (col == k) {
      // map images of the reduced basis back to the original source basis
      std::vector<VecZ> images(k, VecZ(n, 0));
      for (int i = 0; i < k; ++i)
        for (int r = 0; r < k; ++r) {
          long c = to_long(sinv(i, r));
          if (c == 0) continue;
          for (int j = 0; j < n; ++j) images[i][j] += c * cand[chosen[r]][j];
        }
      ++count;
      if (!visit(images)) stop = true;
      return;
    }
    for (int c = 0; c < m && !stop; ++c) {
      if (cnorm[c] != target[col][col]) continue;
      bool ok = true;
      for (int i = 0; i < col; ++i)
        if (pair_dot(chosen[i], c) != target[i][col]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen[col] = c;
      rec(col + 1);
    }
    chosen[col] = -1;
  };
  rec(0);
  return count;
}

inline std::vector<Embedding> find_embeddings(const GramLattice& source,
                                              const GramLattice& ambient) {
  std::vector<Embedding> out;
  visit_embeddings(source, ambient, [&](const std::vector<VecZ>& imgs) {
    out.push_back(Embedding{source, ambient, imgs});
    return true;
  });
  return out;
}

inline std::optional<Embedding> find_first_embedding(const GramLattice& source,
                                                     const GramLattice& ambient) {
  std::optional<Embedding> out;
  visit_embeddings(source, ambient, [&](const std::vector<VecZ>& imgs) {
    out = Embedding{source, ambient, imgs};
    return false;
  });
  return out;
}

}  // namespace cyqc
