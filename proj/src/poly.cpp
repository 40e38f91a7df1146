#include "fqdio/poly.hpp"

#include "fqdio/errors.hpp"

namespace fqdio {

Poly::Poly(FieldRef f, std::vector<Elem> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(FieldRef f, Elem c) { return Poly(std::move(f), {c}); }

Poly Poly::monomial(FieldRef f, Elem c, unsigned e) {
  std::vector<Elem> v(e + 1, 0);
  v[e] = c;
  return Poly(std::move(f), std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::operator-() const {
  Poly r(*this);
  for (auto& c : r.c_) c = f_->neg(c);
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.is_zero()) return *this;
  if (!f_) f_ = o.f_;
  const Field& F = same_field(f_, o.f_);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = F.add(c_[i], o.c_[i]);
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.is_zero()) return *this;
  if (!f_) f_ = o.f_;
  const Field& F = same_field(f_, o.f_);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = F.sub(c_[i], o.c_[i]);
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  FieldRef f = a.f_ ? a.f_ : b.f_;
  if (a.is_zero() || b.is_zero()) return Poly(f);
  const Field& F = same_field(a.f_, b.f_);
  std::vector<Elem> r(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (!a.c_[i]) continue;
    const Elem* row = F.mul_row(a.c_[i]);
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = F.add(r[i + j], row[b.c_[j]]);
  }
  return Poly(f, std::move(r));
}

Poly Poly::scale(Elem c) const {
  if (c == 0) return Poly(f_);
  Poly r(*this);
  for (auto& x : r.c_) x = f_->mul(x, c);
  return r;
}

Poly Poly::shift(unsigned s) const {
  if (is_zero()) return *this;
  std::vector<Elem> v(s, 0);
  v.insert(v.end(), c_.begin(), c_.end());
  return Poly(f_, std::move(v));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scale(f_->inv(lead()));
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DivisionByZero();
  const Field& F = same_field(a.field() ? a.field() : b.field(), b.field());
  std::vector<Elem> r = a.coeffs();
  int db = b.degree();
  if (a.degree() < db) return {Poly(b.field()), a};
  std::vector<Elem> q(a.degree() - db + 1, 0);
  Elem li = F.inv(b.lead());
  const auto& bc = b.coeffs();
  for (int i = a.degree(); i >= db; --i) {
    Elem c = r[i];
    if (!c) continue;
    c = F.mul(c, li);
    q[i - db] = c;
    const Elem* row = F.mul_row(c);
    for (int j = 0; j <= db; ++j) r[i - db + j] = F.sub(r[i - db + j], row[bc[j]]);
  }
  return {Poly(b.field(), std::move(q)), Poly(b.field(), std::move(r))};
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

std::string format_term(const Field& f, Elem c, long e) {
  if (e == 0) return f.format(c);
  std::string x = "X";
  if (e != 1) x += "^" + std::to_string(e);
  if (c == 1) return x;
  return f.format(c) + "*" + x;
}

std::string Poly::str() const {
  if (is_zero()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    if (!c_[i]) continue;
    if (!out.empty()) out += " + ";
    out += format_term(*f_, c_[i], i);
  }
  return out;
}

}  // namespace fqdio
