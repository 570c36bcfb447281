// Orthogonal complements, saturation (primitive closure) and glue groups.
#pragma once

#include "cyqc/embed.hpp"

namespace cyqc {

inline MatZ images_matrix(const Embedding& e) {
  int k = int(e.images.size()), n = e.ambient.rank;
  MatZ m(k, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = e.images[i][j];
  return m;
}

// Basis rows (in ambient coordinates) of {v : v perpendicular to all images}.
// The kernel of an integer matrix is automatically saturated in the ambient.
inline MatZ complement_basis(const Embedding& e) {
  int k = int(e.images.size()), n = e.ambient.rank;
  if (k == 0) return identity_z(n);
  // rows: G * image_i, scaled to integers
  MatZ m(k, n);
  for (int i = 0; i < k; ++i) {
    std::vector<Rat> row(n, Rat(0));
    Int d = 1;
    for (int j = 0; j < n; ++j) {
      Rat v = 0;
      for (int t = 0; t < n; ++t) v += e.ambient.gram(j, t) * e.images[i][t];
      row[j] = v;
      d = lcm(d, den(v));
    }
    for (int j = 0; j < n; ++j) m(i, j) = num(row[j] * Rat(d));
  }
  return right_kernel(m);
}

inline MatQ gram_of_rows(const MatZ& rows, const MatQ& ambient_gram) {
  MatQ r = to_q(rows);
  return mul(mul(r, ambient_gram), transpose(r));
}

// Gram of {v in ambient : v ^ images}; torsion classes have height zero and
// are orthogonal to everything, so the ambient torsion is carried along.
inline GramLattice orthogonal_complement(const Embedding& e) {
  MatZ k = complement_basis(e);
  return GramLattice(gram_of_rows(k, e.ambient.gram), e.ambient.torsion);
}

struct Saturation {
  Embedding closure;    // primitive closure of the image
  Factors glue;         // invariant factors of closure / image
};

// Primitive closure of the image inside the ambient; requires an integral
// ambient Gram (the glue group is read off from integer coordinates only, so
// in fact any ambient works, but the spec of this operation is integral).
inline Saturation saturate(const Embedding& e) {
  MatZ img = images_matrix(e);
  MatZ sat = (img.rows == 0) ? MatZ(0, e.ambient.rank) : drop_zero_rows(saturate_rows(img));
  auto coeff = solve_in_basis(sat, img);
  if (!coeff) throw std::logic_error("saturation does not contain image");
  Saturation out;
  std::vector<VecZ> rows;
  for (int i = 0; i < sat.rows; ++i) {
    VecZ r(e.ambient.rank);
    for (int j = 0; j < e.ambient.rank; ++j) r[j] = to_long(sat(i, j));
    rows.push_back(r);
  }
  out.closure = Embedding{GramLattice(gram_of_rows(sat, e.ambient.gram)), e.ambient, rows};
  out.glue = glue_factors(*coeff);
  return out;
}

}  // namespace cyqc
