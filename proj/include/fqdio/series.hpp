#pragma once

#include "fqdio/magnitude.hpp"
#include "fqdio/poly.hpp"

#include <climits>
#include <string>
#include <string_view>
#include <vector>

namespace fqdio {

/// Reduced fraction num/den with den monic.
struct RatFunc {
  Poly num, den;

  RatFunc() = default;
  RatFunc(Poly n, Poly d);
  static RatFunc from_poly(const Poly& p);

  bool is_zero() const { return num.is_zero(); }
  /// deg num - deg den (meaningless for zero).
  long lead_exp() const { return static_cast<long>(num.degree()) - den.degree(); }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc operator-() const { return RatFunc(-num, den); }
  bool operator==(const RatFunc& o) const { return num == o.num && den == o.den; }
};

/// Default number of coefficients produced when inverting a truncated series.
inline constexpr long kDefaultDivisionBudget = 64;

/// An element of F_k((X^-1)). Either exact (a rational function, which covers
/// every finite-support series) or truncated: digits known from the leading
/// exponent down to known_below, unknown further down.
class LaurentSeries {
 public:
  LaurentSeries() = default;
  static LaurentSeries zero(FieldRef f);
  static LaurentSeries one(FieldRef f) { return monomial(std::move(f), 1, 0); }
  static LaurentSeries monomial(FieldRef f, Elem c, long e);
  static LaurentSeries from_poly(const Poly& p);
  static LaurentSeries from_ratfunc(RatFunc r);
  /// digits[i] is the coefficient of X^(hi - i); all exponents below
  /// hi - digits.size() + 1 are unknown. Throws PrecisionExhausted if no digit
  /// is nonzero.
  static LaurentSeries truncated(FieldRef f, long hi, std::vector<Elem> digits);
  /// Finite-support exact value from digits[i] = coefficient of X^(hi - i).
  static LaurentSeries from_digits(FieldRef f, long hi, const std::vector<Elem>& digits);

  const FieldRef& field() const { return f_; }
  bool is_zero() const { return exact_ && q_.is_zero(); }
  bool is_exact() const { return exact_; }
  /// Exact with a denominator that is a power of X.
  bool has_finite_support() const;
  const RatFunc& ratfunc() const { return q_; }

  /// Exponent of the leading term; the series must be nonzero.
  long lead_exp() const;
  /// Lowest exponent whose coefficient is known (LONG_MIN for exact values).
  long known_below() const { return exact_ ? LONG_MIN : kb_; }
  Magnitude norm() const;

  /// Coefficient of X^e; PrecisionExhausted below known_below.
  Elem coeff(long e) const;
  /// Coefficients of X^hi, X^(hi-1), ..., X^lo.
  std::vector<Elem> digits(long hi, long lo) const;

  /// Forgets every coefficient below exponent kb.
  LaurentSeries truncate(long kb) const;
  /// Exact series holding the known coefficients at exponents >= lo.
  LaurentSeries chop(long lo) const;

  Poly polynomial_part() const;
  LaurentSeries fractional_part() const;
  /// ||x - [x]||, the distance to F[X].
  Magnitude frac_norm() const;

  LaurentSeries operator-() const;
  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) { return divide(a, b); }
  static LaurentSeries divide(const LaurentSeries& a, const LaurentSeries& b, long budget = kDefaultDivisionBudget);
  LaurentSeries inverse(long budget = kDefaultDivisionBudget) const;
  LaurentSeries pow(long e) const;
  LaurentSeries scale(Elem c) const;

  /// Structural equality: same exactness, same known coefficients and precision.
  bool operator==(const LaurentSeries& o) const;

  std::string str() const;

 private:
  FieldRef f_;
  bool exact_ = true;
  RatFunc q_;
  long lead_ = 0, kb_ = 0;
  std::vector<Elem> d_;  // truncated: coefficients of X^lead_ ... X^kb_
};

LaurentSeries parse_series(std::string_view text, const FieldRef& f);
std::string format_series(const LaurentSeries& x);

using SeriesVec = std::vector<LaurentSeries>;

class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  SeriesMatrix(FieldRef f, std::size_t rows, std::size_t cols);
  static SeriesMatrix identity(FieldRef f, std::size_t d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const FieldRef& field() const { return f_; }
  LaurentSeries& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const LaurentSeries& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
  SeriesVec row(std::size_t i) const;
  SeriesVec col(std::size_t j) const;
  SeriesMatrix transpose() const;
  /// Entries listed row by row.
  const std::vector<LaurentSeries>& entries() const { return e_; }

  bool operator==(const SeriesMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_; }

 private:
  FieldRef f_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<LaurentSeries> e_;
};

SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b);
SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b);
SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b);
/// Row vector times matrix.
SeriesVec operator*(const SeriesVec& v, const SeriesMatrix& a);
LaurentSeries dot(const SeriesVec& a, const SeriesVec& b);
SeriesVec to_series(const std::vector<Poly>& v);

Magnitude height(const SeriesVec& v);
Magnitude height(const SeriesMatrix& a);
Magnitude height(const std::vector<Poly>& v);
Magnitude lattice_distance(const SeriesVec& v);
Magnitude lattice_distance(const SeriesMatrix& a);

/// Rows separated by '|', entries by ';'.
SeriesMatrix parse_matrix(std::string_view text, const FieldRef& f);
std::string format_matrix(const SeriesMatrix& a);

}  // namespace fqdio
