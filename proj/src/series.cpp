#include "fqdio/series.hpp"

#include "fqdio/errors.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <stdexcept>

namespace fqdio {

// ---- RatFunc

RatFunc::RatFunc(Poly n, Poly d) {
  if (d.is_zero()) throw DivisionByZero();
  if (n.is_zero()) {
    num = Poly(d.field());
    den = Poly::constant(d.field(), 1);
    return;
  }
  Poly g = gcd(n, d);
  n = divmod(n, g).first;
  d = divmod(d, g).first;
  Elem li = d.field()->inv(d.lead());
  num = n.scale(li);
  den = d.scale(li);
}

RatFunc RatFunc::from_poly(const Poly& p) { return RatFunc(p, Poly::constant(p.field(), 1)); }

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.den == b.den) return RatFunc(a.num + b.num, a.den);
  return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den);
}
RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
RatFunc operator*(const RatFunc& a, const RatFunc& b) { return RatFunc(a.num * b.num, a.den * b.den); }
RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw DivisionByZero();
  return RatFunc(a.num * b.den, a.den * b.num);
}

// ---- LaurentSeries

namespace {

std::optional<unsigned> x_power(const Poly& d) {
  int deg = d.degree();
  for (int i = 0; i < deg; ++i)
    if (d.coeff(i)) return std::nullopt;
  return deg;
}

}  // namespace

LaurentSeries LaurentSeries::zero(FieldRef f) {
  LaurentSeries s;
  s.f_ = f;
  s.q_ = RatFunc(Poly(f), Poly::constant(f, 1));
  return s;
}

LaurentSeries LaurentSeries::monomial(FieldRef f, Elem c, long e) {
  if (c == 0) return zero(f);
  if (e >= 0) return from_poly(Poly::monomial(f, c, static_cast<unsigned>(e)));
  return from_ratfunc(RatFunc(Poly::constant(f, c), Poly::monomial(f, 1, static_cast<unsigned>(-e))));
}

LaurentSeries LaurentSeries::from_poly(const Poly& p) { return from_ratfunc(RatFunc::from_poly(p)); }

LaurentSeries LaurentSeries::from_ratfunc(RatFunc r) {
  LaurentSeries s;
  s.f_ = r.den.field();
  s.q_ = std::move(r);
  return s;
}

LaurentSeries LaurentSeries::truncated(FieldRef f, long hi, std::vector<Elem> digits) {
  std::size_t first = 0;
  while (first < digits.size() && digits[first] == 0) ++first;
  if (first == digits.size()) throw PrecisionExhausted("no known nonzero coefficient");
  LaurentSeries s;
  s.f_ = std::move(f);
  s.exact_ = false;
  s.lead_ = hi - static_cast<long>(first);
  s.kb_ = hi - static_cast<long>(digits.size()) + 1;
  s.d_.assign(digits.begin() + first, digits.end());
  return s;
}

LaurentSeries LaurentSeries::from_digits(FieldRef f, long hi, const std::vector<Elem>& digits) {
  long lo = hi - static_cast<long>(digits.size()) + 1;
  std::vector<Elem> c(digits.rbegin(), digits.rend());  // exponent lo first
  Poly p(f, std::move(c));
  if (lo >= 0) return from_poly(p.shift(static_cast<unsigned>(lo)));
  return from_ratfunc(RatFunc(p, Poly::monomial(f, 1, static_cast<unsigned>(-lo))));
}

bool LaurentSeries::has_finite_support() const { return exact_ && x_power(q_.den).has_value(); }

long LaurentSeries::lead_exp() const {
  if (!exact_) return lead_;
  if (q_.is_zero()) throw std::logic_error("leading exponent of zero");
  return q_.lead_exp();
}

Magnitude LaurentSeries::norm() const {
  if (is_zero()) return Magnitude::zero_value();
  return Magnitude::power(lead_exp());
}

std::vector<Elem> LaurentSeries::digits(long hi, long lo) const {
  std::vector<Elem> out;
  if (hi < lo) return out;
  out.assign(static_cast<std::size_t>(hi - lo + 1), 0);
  if (!exact_) {
    if (lo < kb_) throw PrecisionExhausted("coefficient of X^" + std::to_string(lo) + " unknown");
    for (long e = std::min(hi, lead_); e >= lo; --e) out[hi - e] = d_[lead_ - e];
    return out;
  }
  if (q_.is_zero() || lead_exp() < lo) return out;
  long s = std::max(0L, -lo);
  Poly quot;
  if (auto xp = x_power(q_.den)) {
    // num / X^xp: coefficient of X^e is num_{e + xp}
    for (long e = hi; e >= lo; --e) out[hi - e] = q_.num.coeff(static_cast<int>(e + static_cast<long>(*xp)));
    return out;
  }
  quot = divmod(q_.num.shift(static_cast<unsigned>(s)), q_.den).first;
  for (long e = hi; e >= lo; --e) out[hi - e] = quot.coeff(static_cast<int>(e + s));
  return out;
}

Elem LaurentSeries::coeff(long e) const { return digits(e, e)[0]; }

LaurentSeries LaurentSeries::truncate(long kb) const {
  if (is_zero()) return *this;
  long hi = lead_exp();
  long lo = std::max(kb, known_below());
  if (hi < lo) throw PrecisionExhausted("no known coefficient at or above X^" + std::to_string(lo));
  return truncated(f_, hi, digits(hi, lo));
}

LaurentSeries LaurentSeries::chop(long lo) const {
  if (is_zero()) return *this;
  long hi = lead_exp();
  if (hi < lo) return zero(f_);
  return from_digits(f_, hi, digits(hi, lo));
}

Poly LaurentSeries::polynomial_part() const {
  if (is_zero()) return Poly(f_);
  if (exact_) return divmod(q_.num, q_.den).first;
  if (lead_ < 0) return Poly(f_);
  if (kb_ > 0) throw PrecisionExhausted("constant coefficient unknown");
  auto d = digits(lead_, 0);
  std::reverse(d.begin(), d.end());
  return Poly(f_, std::move(d));
}

LaurentSeries LaurentSeries::fractional_part() const {
  if (is_zero()) return *this;
  if (exact_) return from_ratfunc(RatFunc(divmod(q_.num, q_.den).second, q_.den));
  if (kb_ >= 0) throw PrecisionExhausted("fractional part unknown");
  long hi = std::min(-1L, lead_);
  return truncated(f_, hi, digits(hi, kb_));
}

Magnitude LaurentSeries::frac_norm() const { return fractional_part().norm(); }

LaurentSeries LaurentSeries::operator-() const {
  LaurentSeries r(*this);
  if (exact_) {
    r.q_ = -q_;
  } else {
    for (auto& c : r.d_) c = f_->neg(c);
  }
  return r;
}

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const Field& F = same_field(a.f_, b.f_);
  if (a.exact_ && b.exact_) return LaurentSeries::from_ratfunc(a.q_ + b.q_);
  long kb = std::max(a.known_below(), b.known_below());
  long hi = std::max(a.lead_exp(), b.lead_exp());
  if (hi < kb) throw PrecisionExhausted("sum has no known coefficient");
  auto da = a.digits(hi, kb), db = b.digits(hi, kb);
  for (std::size_t i = 0; i < da.size(); ++i) da[i] = F.add(da[i], db[i]);
  try {
    return LaurentSeries::truncated(a.f_, hi, std::move(da));
  } catch (const PrecisionExhausted&) {
    throw PrecisionExhausted("cancellation below known precision");
  }
}

LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  FieldRef f = a.f_ ? a.f_ : b.f_;
  if (a.is_zero() || b.is_zero()) return LaurentSeries::zero(f);
  const Field& F = same_field(a.f_, b.f_);
  if (a.exact_ && b.exact_) return LaurentSeries::from_ratfunc(a.q_ * b.q_);
  long la = a.lead_exp(), lb = b.lead_exp();
  long kb;
  if (a.exact_) kb = b.kb_ + la;
  else if (b.exact_) kb = a.kb_ + lb;
  else kb = std::max(a.kb_ + lb, b.kb_ + la);
  long hi = la + lb;
  // coefficients of a needed from la down to kb - lb, of b from lb down to kb - la
  auto da = a.digits(la, kb - lb), db = b.digits(lb, kb - la);
  std::vector<Elem> out(static_cast<std::size_t>(hi - kb + 1), 0);
  for (std::size_t i = 0; i < da.size(); ++i) {
    if (!da[i]) continue;
    const Elem* row = F.mul_row(da[i]);
    for (std::size_t j = 0; j < db.size() && i + j < out.size(); ++j) out[i + j] = F.add(out[i + j], row[db[j]]);
  }
  return LaurentSeries::truncated(f, hi, std::move(out));
}

LaurentSeries LaurentSeries::inverse(long budget) const {
  if (is_zero()) throw DivisionByZero();
  if (exact_) return from_ratfunc(RatFunc(q_.den, q_.num));
  const Field& F = *f_;
  long L = lead_;
  long n = std::min(L - kb_, budget - 1) + 1;  // number of coefficients of 1/y
  std::vector<Elem> w(static_cast<std::size_t>(n), 0);
  Elem li = F.inv(d_[0]);
  w[0] = li;
  for (long j = 1; j < n; ++j) {
    Elem s = 0;
    for (long i = 1; i <= j; ++i) s = F.add(s, F.mul(d_[i], w[j - i]));
    w[j] = F.neg(F.mul(li, s));
  }
  return truncated(f_, -L, std::move(w));
}

LaurentSeries LaurentSeries::divide(const LaurentSeries& a, const LaurentSeries& b, long budget) {
  if (b.is_zero()) throw DivisionByZero();
  return a * b.inverse(budget);
}

LaurentSeries LaurentSeries::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  LaurentSeries r = one(f_), base = *this;
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

LaurentSeries LaurentSeries::scale(Elem c) const { return *this * monomial(f_, c, 0); }

bool LaurentSeries::operator==(const LaurentSeries& o) const {
  if (exact_ != o.exact_) return false;
  if (exact_) return q_ == o.q_;
  return lead_ == o.lead_ && kb_ == o.kb_ && d_ == o.d_;
}

std::string LaurentSeries::str() const { return format_series(*this); }

std::string format_series(const LaurentSeries& x) {
  if (x.is_zero()) return "0";
  const Field& F = *x.field();
  if (x.is_exact() && !x.has_finite_support())
    return "(" + x.ratfunc().num.str() + ")/(" + x.ratfunc().den.str() + ")";
  long hi = x.lead_exp();
  long lo = x.is_exact() ? hi - x.ratfunc().num.degree() : x.known_below();
  auto d = x.digits(hi, lo);
  std::string out;
  for (long e = hi; e >= lo; --e) {
    Elem c = d[hi - e];
    if (!c) continue;
    if (!out.empty()) out += " + ";
    out += format_term(F, c, e);
  }
  if (!x.is_exact()) out += " + O(X^" + std::to_string(x.known_below() - 1) + ")";
  return out;
}

// ---- parser

namespace {

struct Value {
  LaurentSeries s;
  std::optional<long> order;  // unknown coefficients at exponents <= order
};

class Parser {
 public:
  Parser(std::string_view t, const FieldRef& f) : t_(t), f_(f) {}

  LaurentSeries run() {
    Value v = expr();
    skip();
    if (i_ != t_.size()) fail("unexpected character");
    if (!v.order) return v.s;
    return v.s.truncate(*v.order + 1);
  }

 private:
  [[noreturn]] void fail(const std::string& what) { throw SyntaxError(what, i_); }

  void skip() {
    while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < t_.size() && t_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return i_ < t_.size() ? t_[i_] : '\0';
  }

  long integer(bool allow_sign) {
    skip();
    std::size_t start = i_;
    bool neg = false;
    if (allow_sign && i_ < t_.size() && (t_[i_] == '-' || t_[i_] == '+')) {
      neg = t_[i_] == '-';
      ++i_;
    }
    if (i_ >= t_.size() || !std::isdigit(static_cast<unsigned char>(t_[i_]))) {
      i_ = start;
      fail("integer expected");
    }
    long v = 0;
    while (i_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[i_]))) {
      if (v > 100000000L) fail("integer too large");
      v = v * 10 + (t_[i_++] - '0');
    }
    return neg ? -v : v;
  }

  static std::optional<long> merge(std::optional<long> a, std::optional<long> b) {
    if (!a) return b;
    if (!b) return a;
    return std::max(*a, *b);
  }

  Value expr() {
    Value v = product();
    for (;;) {
      if (eat('+')) {
        Value w = product();
        v.s = v.s + w.s;
        v.order = merge(v.order, w.order);
      } else if (eat('-')) {
        Value w = product();
        v.s = v.s - w.s;
        v.order = merge(v.order, w.order);
      } else {
        return v;
      }
    }
  }

  Value product() {
    std::size_t start = (skip(), i_);
    Value v = factor();
    for (;;) {
      bool mul = eat('*');
      if (!mul && !eat('/')) return v;
      Value w = factor();
      if (v.order || w.order) {
        i_ = start;
        fail("O(...) term cannot be multiplied or divided");
      }
      v.s = mul ? v.s * w.s : v.s / w.s;
    }
  }

  Value factor() {
    if (eat('-')) {
      Value v = factor();
      v.s = -v.s;
      return v;
    }
    std::size_t start = (skip(), i_);
    Value v = primary();
    if (eat('^')) {
      if (v.order) fail("O(...) term cannot be raised to a power");
      long e = integer(true);
      if (v.s.is_zero() && e < 0) throw DivisionByZero();
      if (v.s.is_zero()) v.s = e == 0 ? LaurentSeries::one(f_) : v.s;
      else v.s = v.s.pow(e);
      (void)start;
    }
    return v;
  }

  Value primary() {
    skip();
    char c = peek();
    if (c == 'X') {
      ++i_;
      return {LaurentSeries::monomial(f_, 1, 1), {}};
    }
    if (c == 'O') {
      ++i_;
      if (!eat('(') || !eat('X')) fail("expected O(X^e)");
      long e = 1;
      if (eat('^')) e = integer(true);
      if (!eat(')')) fail("expected ')'");
      return {LaurentSeries::zero(f_), e};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t pos = i_;
      long v = integer(false);
      if (v >= static_cast<long>(f_->p())) throw CoefficientOutOfRange(std::to_string(v) + " not in [0," + std::to_string(f_->p()) + ")", pos);
      return {LaurentSeries::monomial(f_, static_cast<Elem>(v), 0), {}};
    }
    if (c == '(') {
      if (is_tuple()) return {LaurentSeries::monomial(f_, tuple(), 0), {}};
      ++i_;
      Value v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    fail(c ? std::string("unexpected '") + c + "'" : "unexpected end of input");
  }

  bool is_tuple() {
    int depth = 0;
    for (std::size_t j = i_; j < t_.size(); ++j) {
      if (t_[j] == '(') ++depth;
      else if (t_[j] == ')') {
        if (--depth == 0) return false;
      } else if (t_[j] == ',' && depth == 1) {
        return true;
      }
    }
    return false;
  }

  Elem tuple() {
    std::size_t pos = i_;
    eat('(');
    std::vector<unsigned> c;
    do {
      std::size_t p = (skip(), i_);
      long v = integer(false);
      if (v >= static_cast<long>(f_->p())) throw CoefficientOutOfRange(std::to_string(v) + " not in [0," + std::to_string(f_->p()) + ")", p);
      c.push_back(static_cast<unsigned>(v));
    } while (eat(','));
    if (!eat(')')) fail("expected ')' closing coefficient tuple");
    if (c.size() != f_->r()) {
      i_ = pos;
      fail("coefficient tuple needs " + std::to_string(f_->r()) + " entries");
    }
    std::reverse(c.begin(), c.end());
    return f_->from_coords(c);
  }

  std::string_view t_;
  const FieldRef& f_;
  std::size_t i_ = 0;
};

}  // namespace

LaurentSeries parse_series(std::string_view text, const FieldRef& f) { return Parser(text, f).run(); }

// ---- matrices

SeriesMatrix::SeriesMatrix(FieldRef f, std::size_t rows, std::size_t cols)
    : f_(f), rows_(rows), cols_(cols), e_(rows * cols, LaurentSeries::zero(f)) {}

SeriesMatrix SeriesMatrix::identity(FieldRef f, std::size_t d) {
  SeriesMatrix m(f, d, d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = LaurentSeries::one(f);
  return m;
}

SeriesVec SeriesMatrix::row(std::size_t i) const { return SeriesVec(e_.begin() + i * cols_, e_.begin() + (i + 1) * cols_); }

SeriesVec SeriesMatrix::col(std::size_t j) const {
  SeriesVec v;
  for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
  return v;
}

SeriesMatrix SeriesMatrix::transpose() const {
  SeriesMatrix t(f_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix dimensions do not match");
  SeriesMatrix r(a.field(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      LaurentSeries s = LaurentSeries::zero(a.field());
      for (std::size_t l = 0; l < a.cols(); ++l) s = s + a(i, l) * b(l, j);
      r(i, j) = s;
    }
  return r;
}

SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix dimensions do not match");
  SeriesMatrix r(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix dimensions do not match");
  SeriesMatrix r(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

SeriesVec operator*(const SeriesVec& v, const SeriesMatrix& a) {
  if (v.size() != a.rows()) throw std::invalid_argument("vector length does not match matrix");
  SeriesVec r;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    LaurentSeries s = LaurentSeries::zero(a.field());
    for (std::size_t i = 0; i < v.size(); ++i) s = s + v[i] * a(i, j);
    r.push_back(s);
  }
  return r;
}

LaurentSeries dot(const SeriesVec& a, const SeriesVec& b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("dot product of mismatched vectors");
  LaurentSeries s = LaurentSeries::zero(a[0].field());
  for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
  return s;
}

SeriesVec to_series(const std::vector<Poly>& v) {
  SeriesVec r;
  for (const auto& p : v) r.push_back(LaurentSeries::from_poly(p));
  return r;
}

Magnitude height(const SeriesVec& v) {
  Magnitude h;
  for (const auto& x : v) h = max(h, x.norm());
  return h;
}

Magnitude height(const SeriesMatrix& a) { return height(a.entries()); }

Magnitude height(const std::vector<Poly>& v) {
  Magnitude h;
  for (const auto& p : v)
    if (!p.is_zero()) h = max(h, Magnitude::power(p.degree()));
  return h;
}

Magnitude lattice_distance(const SeriesVec& v) {
  Magnitude h;
  for (const auto& x : v) h = max(h, x.frac_norm());
  return h;
}

Magnitude lattice_distance(const SeriesMatrix& a) { return lattice_distance(a.entries()); }

SeriesMatrix parse_matrix(std::string_view text, const FieldRef& f) {
  std::vector<std::vector<LaurentSeries>> rows;
  std::size_t start = 0;
  for (;;) {
    std::size_t bar = text.find('|', start);
    std::string_view r = text.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
    std::vector<LaurentSeries> row;
    std::size_t s = 0;
    for (;;) {
      std::size_t semi = r.find(';', s);
      std::string_view cell = r.substr(s, semi == std::string_view::npos ? std::string_view::npos : semi - s);
      try {
        row.push_back(parse_series(cell, f));
      } catch (const SyntaxError& e) {
        throw SyntaxError(std::string(e.what()) + " in matrix entry '" + std::string(cell) + "'",
                          start + s + e.position());
      }
      if (semi == std::string_view::npos) break;
      s = semi + 1;
    }
    if (!rows.empty() && row.size() != rows[0].size()) throw SyntaxError("ragged matrix rows", start);
    rows.push_back(std::move(row));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  SeriesMatrix m(f, rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

std::string format_matrix(const SeriesMatrix& a) {
  std::string out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (i) out += " | ";
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out += "; ";
      out += format_series(a(i, j));
    }
  }
  return out;
}

}  // namespace fqdio
