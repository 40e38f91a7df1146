#include "fqdio/linalg.hpp"

#include "fqdio/errors.hpp"

#include <stdexcept>

namespace fqdio {

std::size_t row_reduce(const Field& f, ElemMatrix& a, std::vector<std::size_t>* pivots) {
  std::size_t rank = 0;
  std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t piv = rank;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    Elem inv = f.inv(a[rank][c]);
    for (auto& x : a[rank]) x = f.mul(x, inv);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == rank || a[i][c] == 0) continue;
      Elem m = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] = f.sub(a[i][j], f.mul(m, a[rank][j]));
    }
    if (pivots) pivots->push_back(c);
    ++rank;
  }
  return rank;
}

std::vector<std::vector<Elem>> kernel(const Field& f, ElemMatrix a, std::size_t cols) {
  std::vector<std::size_t> piv;
  std::size_t rank = row_reduce(f, a, &piv);
  std::vector<bool> is_piv(cols, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::vector<Elem>> out;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_piv[free]) continue;
    std::vector<Elem> v(cols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < rank; ++r) v[piv[r]] = f.neg(a[r][free]);
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

std::size_t rank_rf(std::vector<std::vector<RatFunc>> a) {
  std::size_t rank = 0;
  std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t piv = rank;
    while (piv < a.size() && a[piv][c].is_zero()) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      if (a[i][c].is_zero()) continue;
      RatFunc m = a[i][c] / a[rank][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] = a[i][j] - m * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

RatFunc det_rf(std::vector<std::vector<RatFunc>> a, const FieldRef& f) {
  std::size_t n = a.size();
  RatFunc d = RatFunc::from_poly(Poly::constant(f, 1));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c].is_zero()) ++piv;
    if (piv == n) return RatFunc::from_poly(Poly(f));
    if (piv != c) {
      std::swap(a[piv], a[c]);
      d = -d;
    }
    d = d * a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c].is_zero()) continue;
      RatFunc m = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] = a[i][j] - m * a[c][j];
    }
  }
  return d;
}

LaurentSeries det_cofactor(const SeriesMatrix& a, std::vector<std::size_t>& cols, std::size_t row) {
  std::size_t n = a.rows();
  if (row == n) return LaurentSeries::one(a.field());
  LaurentSeries s = LaurentSeries::zero(a.field());
  bool neg = false;
  for (std::size_t idx = 0; idx < cols.size(); ++idx) {
    std::size_t c = cols[idx];
    if (!a(row, c).is_zero()) {
      cols.erase(cols.begin() + static_cast<long>(idx));
      LaurentSeries t = a(row, c) * det_cofactor(a, cols, row + 1);
      cols.insert(cols.begin() + static_cast<long>(idx), c);
      s = neg ? s - t : s + t;
    }
    neg = !neg;
  }
  return s;
}

}  // namespace

std::vector<std::vector<RatFunc>> to_ratfunc(const SeriesMatrix& a) {
  std::vector<std::vector<RatFunc>> r(a.rows(), std::vector<RatFunc>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!a(i, j).is_exact()) throw std::invalid_argument("exact matrix entries required");
      r[i][j] = a(i, j).ratfunc();
      if (a(i, j).is_zero()) r[i][j] = RatFunc::from_poly(Poly(a.field()));
    }
  return r;
}

SeriesMatrix from_ratfunc(const FieldRef& f, const std::vector<std::vector<RatFunc>>& a) {
  SeriesMatrix m(f, a.size(), a.empty() ? 0 : a[0].size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = LaurentSeries::from_ratfunc(a[i][j]);
  return m;
}

std::size_t rank(const std::vector<std::vector<Poly>>& rows) {
  std::vector<std::vector<RatFunc>> a;
  for (const auto& r : rows) {
    std::vector<RatFunc> v;
    for (const auto& p : r) v.push_back(RatFunc::from_poly(p));
    a.push_back(std::move(v));
  }
  return rank_rf(std::move(a));
}

std::size_t rank(const std::vector<SeriesVec>& rows) {
  std::vector<std::vector<RatFunc>> a;
  for (const auto& r : rows) {
    std::vector<RatFunc> v;
    for (const auto& x : r) {
      if (!x.is_exact()) throw std::invalid_argument("exact entries required for rank");
      v.push_back(x.ratfunc());
    }
    a.push_back(std::move(v));
  }
  return rank_rf(std::move(a));
}

LaurentSeries det(const SeriesMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of non-square matrix");
  if (a.rows() == 0) return LaurentSeries::one(a.field());
  bool exact = true;
  for (const auto& x : a.entries()) exact &= x.is_exact();
  if (exact) return LaurentSeries::from_ratfunc(det_rf(to_ratfunc(a), a.field()));
  if (a.rows() > 5) throw std::invalid_argument("determinant of large truncated matrix");
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < a.cols(); ++j) cols.push_back(j);
  return det_cofactor(a, cols, 0);
}

SeriesMatrix inverse(const SeriesMatrix& a) {
  std::size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("inverse of non-square matrix");
  auto m = to_ratfunc(a);
  const FieldRef& f = a.field();
  RatFunc zero = RatFunc::from_poly(Poly(f)), one = RatFunc::from_poly(Poly::constant(f, 1));
  for (std::size_t i = 0; i < n; ++i) {
    m[i].resize(2 * n, zero);
    m[i][n + i] = one;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c].is_zero()) ++piv;
    if (piv == n) throw DivisionByZero();
    std::swap(m[piv], m[c]);
    RatFunc inv = one / m[c][c];
    for (auto& x : m[c]) x = x * inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c].is_zero()) continue;
      RatFunc t = m[i][c];
      for (std::size_t j = 0; j < 2 * n; ++j) m[i][j] = m[i][j] - t * m[c][j];
    }
  }
  SeriesMatrix r(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = LaurentSeries::from_ratfunc(m[i][n + j]);
  return r;
}

}  // namespace fqdio
