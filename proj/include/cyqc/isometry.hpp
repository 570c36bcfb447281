// Exact isometry test for positive-definite lattices of rank <= 8.
//
// Fast rejection on rank, determinant, torsion and the vector counts at each
// norm up to 4, then a backtracking basis-image search.  An isometric
// embedding between lattices of equal rank and determinant is surjective, so
// finding one settles the question.
#pragma once

#include "cyqc/lattice_ops.hpp"

namespace cyqc {

inline std::map<Rat, long> norm_profile(const GramLattice& l, const Rat& bound) {
  std::map<Rat, long> p;
  for (const auto& v : vectors_up_to_norm(l, bound)) ++p[norm_of(l.gram, v)];
  return p;
}

inline bool is_isometric(const GramLattice& a, const GramLattice& b) {
  Factors ta = a.torsion, tb = b.torsion;
  std::erase(ta, 1L);
  std::erase(tb, 1L);
  std::sort(ta.begin(), ta.end());
  std::sort(tb.begin(), tb.end());
  if (ta != tb) return false;
  if (a.rank != b.rank) return false;
  if (a.rank == 0) return true;
  if (a.rank > 8 || b.rank > 8) throw std::invalid_argument("isometry test capped at rank 8");
  if (det(a) != det(b)) return false;
  if (norm_profile(a, 4) != norm_profile(b, 4)) return false;
  GramLattice af(a.gram), bf(b.gram);  // compare free parts only
  return find_first_embedding(af, bf).has_value();
}

}  // namespace cyqc
