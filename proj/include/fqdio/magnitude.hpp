#pragma once

#include <algorithm>
#include <compare>
#include <string>

namespace fqdio {

/// A value of the absolute value: zero or k^e.
struct Magnitude {
  bool zero = true;
  long exp = 0;

  static Magnitude zero_value() { return {}; }
  static Magnitude power(long e) { return {false, e}; }

  bool is_zero() const { return zero; }

  friend bool operator==(const Magnitude& a, const Magnitude& b) {
    return a.zero == b.zero && (a.zero || a.exp == b.exp);
  }
  friend std::strong_ordering operator<=>(const Magnitude& a, const Magnitude& b) {
    if (a.zero || b.zero) return static_cast<int>(!a.zero) <=> static_cast<int>(!b.zero);
    return a.exp <=> b.exp;
  }
  friend Magnitude operator*(const Magnitude& a, const Magnitude& b) {
    if (a.zero || b.zero) return {};
    return power(a.exp + b.exp);
  }
  /// a^n for n >= 1.
  Magnitude pow(long n) const { return zero ? *this : power(exp * n); }

  /// "0" or "k^e".
  std::string str() const { return zero ? "0" : "k^" + std::to_string(exp); }
};

inline Magnitude max(const Magnitude& a, const Magnitude& b) { return a < b ? b : a; }

}  // namespace fqdio
