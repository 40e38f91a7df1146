#include "fqdio/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace fqdio {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(num, den);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (digits.empty() || digits == "-") digits += "0";
    BigInt num(digits);
    BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(s.size() - dot - 1));
    return Rational(num, den);
  }
  return Rational(BigInt(s));
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational k_power(unsigned k, long e) {
  BigInt b = boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(e < 0 ? -e : e));
  if (e >= 0) return Rational(b);
  return Rational(BigInt(1), b);
}

long floor_log_k(const Rational& x, unsigned k) {
  if (x <= 0) throw std::invalid_argument("floor_log_k of non-positive value");
  long bits = static_cast<long>(msb(numerator(x))) - static_cast<long>(msb(denominator(x)));
  long e = static_cast<long>(std::floor(static_cast<double>(bits) / std::log2(static_cast<double>(k))));
  while (k_power(k, e) > x) --e;
  while (k_power(k, e + 1) <= x) ++e;
  return e;
}

bool is_k_power(const Rational& x, unsigned k, long* e) {
  if (x <= 0) return false;
  long f = floor_log_k(x, k);
  if (k_power(k, f) != x) return false;
  if (e) *e = f;
  return true;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace fqdio
