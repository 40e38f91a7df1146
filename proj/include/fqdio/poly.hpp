#pragma once

#include "fqdio/field.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fqdio {

/// Dense polynomial over F_k, coefficients lowest degree first, no trailing zeros.
class Poly {
 public:
  Poly() = default;
  explicit Poly(FieldRef f) : f_(std::move(f)) {}
  Poly(FieldRef f, std::vector<Elem> coeffs);

  static Poly constant(FieldRef f, Elem c);
  /// c * X^e
  static Poly monomial(FieldRef f, Elem c, unsigned e);
  static Poly x(FieldRef f) { return monomial(std::move(f), 1, 1); }

  const FieldRef& field() const { return f_; }
  const std::vector<Elem>& coeffs() const { return c_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Elem coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : 0; }
  Elem lead() const { return c_.empty() ? 0 : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scale(Elem c) const;
  /// Multiplies by X^s.
  Poly shift(unsigned s) const;

  bool operator==(const Poly& o) const { return c_ == o.c_; }

  /// Monic multiple of this polynomial (zero stays zero).
  Poly monic() const;

  /// Field-independent text, e.g. "X^2 + X + 1".
  std::string str() const;

 private:
  void trim();

  FieldRef f_;
  std::vector<Elem> c_;
};

/// Quotient and remainder; throws DivisionByZero for b = 0.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
/// Monic gcd (zero when both are zero).
Poly gcd(const Poly& a, const Poly& b);

/// Formats coefficient c times X^e following the series grammar.
std::string format_term(const Field& f, Elem c, long e);

}  // namespace fqdio
