#pragma once

#include "fqdio/series.hpp"

#include <random>

namespace fqdio::testgen {

inline Elem elem(std::mt19937_64& g, const Field& f) { return static_cast<Elem>(g() % f.k()); }

inline Elem nonzero(std::mt19937_64& g, const Field& f) { return static_cast<Elem>(1 + g() % (f.k() - 1)); }

inline Poly poly(std::mt19937_64& g, const FieldRef& f, int max_deg) {
  std::vector<Elem> c(static_cast<std::size_t>(max_deg + 1));
  for (auto& x : c) x = elem(g, *f);
  return Poly(f, std::move(c));
}

/// Random series: exact finite support, exact rational, or truncated.
inline LaurentSeries series(std::mt19937_64& g, const FieldRef& f, bool allow_truncated = true) {
  long hi = static_cast<long>(g() % 9) - 4;
  int kind = static_cast<int>(g() % (allow_truncated ? 3 : 2));
  if (kind == 2) {
    std::vector<Elem> d(1 + g() % 10);
    d[0] = nonzero(g, *f);
    for (std::size_t i = 1; i < d.size(); ++i) d[i] = elem(g, *f);
    return LaurentSeries::truncated(f, hi, d);
  }
  if (kind == 1) {
    Poly den = poly(g, f, 1 + static_cast<int>(g() % 3));
    if (den.is_zero()) den = Poly::constant(f, 1);
    return LaurentSeries::from_ratfunc(RatFunc(poly(g, f, static_cast<int>(g() % 4)), den));
  }
  std::vector<Elem> d(1 + g() % 8);
  for (auto& x : d) x = elem(g, *f);
  return LaurentSeries::from_digits(f, hi, d);
}

}  // namespace fqdio::testgen
