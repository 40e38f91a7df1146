#include "fqdio/field.hpp"

#include "fqdio/errors.hpp"

#include <charconv>
#include <stdexcept>

namespace fqdio {

namespace {

// Coefficients lowest first; trailing zeros trimmed.
using PPoly = std::vector<unsigned>;

void trim(PPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PPoly pmod(PPoly a, const PPoly& m, unsigned p) {
  trim(a);
  unsigned lead_inv = 1;
  for (unsigned x = 1; x < p; ++x)
    if ((m.back() * x) % p == 1) lead_inv = x;
  while (a.size() >= m.size()) {
    unsigned c = (a.back() * lead_inv) % p;
    std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = (a[shift + i] + p * p - c * m[i] % p) % p;
    trim(a);
  }
  return a;
}

bool next_monic(PPoly& c, unsigned p) {
  // increments the non-leading coefficients as a base-p counter
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (++c[i] < p) return true;
    c[i] = 0;
  }
  return false;
}

unsigned parse_uint(std::string_view s, std::string_view what) {
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("bad " + std::string(what) + " in field spec: '" + std::string(s) + "'");
  return v;
}

// Minimal reader for a modulus "X^2+X+1" over F_p: terms c*X^e or c or X^e.
PPoly parse_prime_poly(std::string_view s, unsigned p) {
  PPoly out;
  std::string t;
  for (char ch : s)
    if (ch != ' ') t += ch;
  std::size_t i = 0;
  while (i < t.size()) {
    std::size_t j = t.find('+', i);
    if (j == std::string::npos) j = t.size();
    std::string term = t.substr(i, j - i);
    if (term.empty()) throw std::invalid_argument("empty term in modulus");
    unsigned coeff = 1, exp = 0;
    auto x = term.find('X');
    if (x == std::string::npos) {
      coeff = parse_uint(term, "coefficient");
    } else {
      if (x > 0) {
        std::string c = term.substr(0, x);
        if (c.back() == '*') c.pop_back();
        coeff = parse_uint(c, "coefficient");
      }
      exp = 1;
      if (x + 1 < term.size()) {
        if (term[x + 1] != '^') throw std::invalid_argument("bad modulus term '" + term + "'");
        exp = parse_uint(std::string_view(term).substr(x + 2), "exponent");
      }
    }
    if (coeff >= p) throw std::invalid_argument("modulus coefficient out of range");
    if (out.size() <= exp) out.resize(exp + 1, 0);
    out[exp] = (out[exp] + coeff) % p;
    i = j + 1;
  }
  trim(out);
  return out;
}

}  // namespace

bool Field::is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool Field::is_irreducible(unsigned p, const std::vector<unsigned>& poly) {
  PPoly f = poly;
  trim(f);
  if (f.size() < 2) return false;
  std::size_t deg = f.size() - 1;
  if (deg == 1) return true;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    PPoly g(d + 1, 0);
    g[d] = 1;
    do {
      if (pmod(f, g, p).empty()) return false;
    } while (next_monic(g, p));
  }
  return true;
}

Field::Field(unsigned p, unsigned r, std::vector<unsigned> modulus)
    : p_(p), r_(r), modulus_(std::move(modulus)) {
  k_ = 1;
  for (unsigned i = 0; i < r; ++i) k_ *= p;
  add_.resize(k_ * k_);
  mul_.resize(k_ * k_);
  neg_.resize(k_);
  inv_.assign(k_, 0);
  std::vector<PPoly> c(k_);
  for (unsigned a = 0; a < k_; ++a) {
    c[a].resize(r);
    unsigned v = a;
    for (unsigned i = 0; i < r; ++i) {
      c[a][i] = v % p;
      v /= p;
    }
  }
  auto encode = [&](const PPoly& x) {
    unsigned v = 0, w = 1;
    for (unsigned i = 0; i < r; ++i) {
      v += (i < x.size() ? x[i] : 0) * w;
      w *= p;
    }
    return static_cast<Elem>(v);
  };
  for (unsigned a = 0; a < k_; ++a) {
    PPoly n(r);
    for (unsigned i = 0; i < r; ++i) n[i] = (p - c[a][i]) % p;
    neg_[a] = encode(n);
    for (unsigned b = 0; b < k_; ++b) {
      PPoly s(r);
      for (unsigned i = 0; i < r; ++i) s[i] = (c[a][i] + c[b][i]) % p;
      add_[a * k_ + b] = encode(s);
      PPoly prod(2 * r, 0);
      for (unsigned i = 0; i < r; ++i)
        for (unsigned j = 0; j < r; ++j) prod[i + j] = (prod[i + j] + c[a][i] * c[b][j]) % p;
      if (r > 1) prod = pmod(prod, modulus_, p);
      mul_[a * k_ + b] = encode(prod);
    }
  }
  for (unsigned a = 1; a < k_; ++a)
    for (unsigned b = 1; b < k_; ++b)
      if (mul_[a * k_ + b] == 1) inv_[a] = static_cast<Elem>(b);
}

FieldRef Field::prime(unsigned p) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
  if (p > 256) throw std::invalid_argument("field size above 256 is not supported");
  return FieldRef(new Field(p, 1, {0, 1}));
}

FieldRef Field::extension(unsigned p, unsigned r, std::vector<unsigned> modulus) {
  if (r == 1) return prime(p);
  if (!is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
  if (r == 0) throw std::invalid_argument("extension degree must be positive");
  unsigned k = 1;
  for (unsigned i = 0; i < r; ++i) {
    k *= p;
    if (k > 256) throw std::invalid_argument("field size above 256 is not supported");
  }
  trim(modulus);
  if (modulus.size() != r + 1 || modulus.back() != 1)
    throw std::invalid_argument("modulus must be monic of degree " + std::to_string(r));
  for (unsigned c : modulus)
    if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
  if (!is_irreducible(p, modulus)) throw std::invalid_argument("modulus is reducible over F_" + std::to_string(p));
  return FieldRef(new Field(p, r, std::move(modulus)));
}

FieldRef Field::extension(unsigned p, unsigned r) {
  if (r == 1) return prime(p);
  if (!is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
  PPoly g(r + 1, 0);
  g[r] = 1;
  do {
    if (is_irreducible(p, g)) return extension(p, r, g);
  } while (next_monic(g, p));
  throw std::logic_error("no irreducible polynomial found");
}

FieldRef Field::parse(std::string_view spec) {
  std::string s;
  for (char ch : spec)
    if (ch != ' ') s += ch;
  auto colon = s.find(':');
  std::string head = s.substr(0, colon);
  auto caret = head.find('^');
  unsigned p = parse_uint(head.substr(0, caret), "characteristic");
  unsigned r = caret == std::string::npos ? 1 : parse_uint(std::string_view(head).substr(caret + 1), "degree");
  if (colon == std::string::npos) return extension(p, r);
  return extension(p, r, parse_prime_poly(std::string_view(s).substr(colon + 1), p));
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw DivisionByZero();
  return inv_[a];
}

std::vector<unsigned> Field::coords(Elem a) const {
  std::vector<unsigned> c(r_);
  unsigned v = a;
  for (unsigned i = 0; i < r_; ++i) {
    c[i] = v % p_;
    v /= p_;
  }
  return c;
}

Elem Field::from_coords(std::span<const unsigned> c) const {
  unsigned v = 0, w = 1;
  for (unsigned i = 0; i < r_; ++i) {
    unsigned ci = i < c.size() ? c[i] : 0;
    if (ci >= p_) throw std::invalid_argument("coordinate out of range");
    v += ci * w;
    w *= p_;
  }
  return static_cast<Elem>(v);
}

Elem Field::basis(unsigned s) const {
  unsigned v = 1;
  for (unsigned i = 0; i < s; ++i) v *= p_;
  return static_cast<Elem>(v);
}

std::string Field::spec_string() const {
  if (r_ == 1) return std::to_string(p_);
  std::string out = std::to_string(p_) + "^" + std::to_string(r_) + ":";
  bool first = true;
  for (std::size_t e = modulus_.size(); e-- > 0;) {
    unsigned c = modulus_[e];
    if (c == 0) continue;
    if (!first) out += "+";
    first = false;
    if (e == 0) {
      out += std::to_string(c);
      continue;
    }
    if (c != 1) out += std::to_string(c) + "*";
    out += "X";
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

std::string Field::format(Elem a) const {
  if (a < p_) return std::to_string(a);
  auto c = coords(a);
  std::string out = "(";
  for (std::size_t i = r_; i-- > 0;) {
    out += std::to_string(c[i]);
    if (i) out += ",";
  }
  return out + ")";
}

const Field& same_field(const FieldRef& a, const FieldRef& b) {
  if (!a || !b) throw std::invalid_argument("value without field");
  if (a != b && !(*a == *b)) throw std::invalid_argument("operands over different fields");
  return *a;
}

}  // namespace fqdio
