#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fqdio {

/// An element of F_k encoded as sum c_i p^i of its coordinates over F_p.
/// Zero is 0 and one is 1 in every field.
using Elem = std::uint8_t;

class Field;
using FieldRef = std::shared_ptr<const Field>;

/// The finite field F_k, k = p^r <= 256, with table-driven arithmetic.
/// Instances are immutable and shared between all values over the field.
class Field {
 public:
  static FieldRef prime(unsigned p);
  /// `modulus` holds the coefficients of a monic irreducible polynomial of
  /// degree r over F_p, lowest degree first (length r + 1).
  static FieldRef extension(unsigned p, unsigned r, std::vector<unsigned> modulus);
  /// Uses the first monic irreducible polynomial of degree r in
  /// lexicographic order of its coefficient vector.
  static FieldRef extension(unsigned p, unsigned r);
  /// Accepts "p", "p^r" or "p^r:modulus" where the modulus is written in the
  /// series grammar over F_p, e.g. "2^2:X^2+X+1".
  static FieldRef parse(std::string_view spec);

  unsigned p() const { return p_; }
  unsigned r() const { return r_; }
  unsigned k() const { return k_; }
  const std::vector<unsigned>& modulus() const { return modulus_; }

  Elem add(Elem a, Elem b) const { return add_[a * k_ + b]; }
  Elem sub(Elem a, Elem b) const { return add_[a * k_ + neg_[b]]; }
  Elem mul(Elem a, Elem b) const { return mul_[a * k_ + b]; }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  /// Table row for repeated addition of a fixed element (row[a] = a + b).
  const Elem* add_row(Elem b) const { return add_.data() + b * k_; }
  const Elem* mul_row(Elem b) const { return mul_.data() + b * k_; }

  /// Coordinates over F_p, c_0 first.
  std::vector<unsigned> coords(Elem a) const;
  Elem from_coords(std::span<const unsigned> c) const;
  /// The basis element with a single unit coordinate at position s.
  Elem basis(unsigned s) const;

  std::string spec_string() const;
  /// Integer for prime-subfield elements, "(c_{r-1},...,c_0)" otherwise.
  std::string format(Elem a) const;

  bool operator==(const Field& o) const { return p_ == o.p_ && r_ == o.r_ && modulus_ == o.modulus_; }

  static bool is_prime(unsigned n);
  /// Irreducibility over F_p by trial division with every monic polynomial of
  /// degree <= deg/2; coefficients lowest first.
  static bool is_irreducible(unsigned p, const std::vector<unsigned>& poly);

 private:
  Field(unsigned p, unsigned r, std::vector<unsigned> modulus);

  unsigned p_, r_, k_;
  std::vector<unsigned> modulus_;
  std::vector<Elem> add_, mul_, neg_, inv_;
};

/// Throws std::invalid_argument unless both refer to the same field.
const Field& same_field(const FieldRef& a, const FieldRef& b);

}  // namespace fqdio
