// Exact arithmetic primitives.  All lattice computations in this library run
// over GMP rationals; nothing is ever rounded.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyqc {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat(long p, long q = 1) {
  if (q == 0) throw std::invalid_argument("zero denominator");
  Rat r(p, q);
  r.canonicalize();
  return r;
}

inline Int num(const Rat& r) { return r.get_num(); }
inline Int den(const Rat& r) { return r.get_den(); }

inline bool is_integer(const Rat& r) { return den(r) == 1; }

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int floor_rat(const Rat& r) { return floor_div(num(r), den(r)); }

inline Int ceil_rat(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), num(r).get_mpz_t(), den(r).get_mpz_t());
  return q;
}

// Largest s >= 0 with s^2 <= r.  Requires r >= 0.
inline Int isqrt_rat(const Rat& r) {
  if (r < 0) throw std::invalid_argument("isqrt of negative");
  Int s;
  mpz_sqrt(s.get_mpz_t(), floor_rat(r).get_mpz_t());
  while (Rat(s * s) > r) --s;
  while (Rat((s + 1) * (s + 1)) <= r) ++s;
  return s;
}

inline long to_long(const Int& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("integer too large for long");
  return v.get_si();
}

inline Rat parse_rat(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

// Invariant-factor lists for finite abelian groups: d_1 | d_2 | ... , all > 1.
using Factors = std::vector<long>;

inline long group_order(const Factors& f) {
  long n = 1;
  for (long d : f) n *= d;
  return n;
}

inline std::string factors_to_string(const Factors& f) {
  if (f.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < f.size(); ++i) {
    if (i) s += "x";
    s += "Z" + std::to_string(f[i]);
  }
  return s;
}

inline Factors parse_factors(const std::string& s) {
  if (s.empty() || s == "0" || s == "-") return {};
  Factors f;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] != 'Z') throw std::invalid_argument("bad torsion: " + s);
    size_t j = ++i;
    while (j < s.size() && isdigit(s[j])) ++j;
    f.push_back(std::stol(s.substr(i, j - i)));
    i = j;
    if (i < s.size()) {
      if (s[i] != 'x') throw std::invalid_argument("bad torsion: " + s);
      ++i;
    }
  }
  return f;
}

}  // namespace cyqc
