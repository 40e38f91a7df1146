#include "fqdio/approx.hpp"

#include "fqdio/enumerate.hpp"
#include "fqdio/errors.hpp"
#include "fqdio/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace fqdio {

HatMatrices build_hat(const SeriesMatrix& a) {
  std::size_t m = a.rows(), n = a.cols(), d = m + n;
  const FieldRef& f = a.field();
  HatMatrices h{SeriesMatrix(f, d, d), SeriesMatrix(f, d, d)};
  auto one = LaurentSeries::one(f);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      h.hat(i, j) = a(i, j);
      h.hat_star(j, i) = a(i, j);
    }
    h.hat(i, n + i) = one;
    h.hat_star(n + i, i) = one;
  }
  for (std::size_t j = 0; j < n; ++j) {
    h.hat(m + j, j) = one;
    h.hat_star(j, m + j) = one;
  }
  return h;
}

ApproxWitness evaluate_witness(const SeriesMatrix& a, const std::vector<Poly>& q) {
  if (q.size() != a.rows()) throw std::invalid_argument("q has wrong length");
  ApproxWitness w;
  w.q = q;
  w.height = height(q);
  w.dist = lattice_distance(to_series(q) * a);
  w.score = w.height.pow(static_cast<long>(a.rows())) * w.dist.pow(static_cast<long>(a.cols()));
  return w;
}

namespace {

// Fractional digits of the columns of qA at exponents -1 .. -L_j, kept
// incrementally while q runs through a Gray walk over its coefficients.
struct ColumnWindows {
  const Field& f;
  std::size_t m, n;
  long deg;  // q coefficients at degrees 0..deg
  std::vector<long> len;
  std::vector<bool> exact;
  std::vector<std::size_t> offset;
  std::size_t total = 0;
  std::vector<std::vector<Elem>> table;  // [(i * (deg+1) + d) * r + s] -> window digits
  std::vector<Elem> acc;

  ColumnWindows(const SeriesMatrix& a, long deg_, long floor)
      : f(*a.field()), m(a.rows()), n(a.cols()), deg(deg_) {
    len.resize(n);
    exact.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      bool ex = true;
      long kb = LONG_MIN, dens = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const auto& x = a(i, j);
        if (x.is_exact()) {
          if (!x.is_zero()) dens += x.ratfunc().den.degree();
        } else {
          ex = false;
          kb = std::max(kb, x.known_below());
        }
      }
      if (floor != LONG_MIN) {
        ex = false;
        kb = std::max(kb, floor);
      }
      exact[j] = ex;
      len[j] = ex ? dens : -(kb + deg);
      if (!ex && len[j] <= 0) throw PrecisionExhausted("matrix entries not known past X^" + std::to_string(kb));
      offset.push_back(total);
      total += static_cast<std::size_t>(len[j]);
    }
    const unsigned r = f.r();
    table.assign(m * static_cast<std::size_t>(deg + 1) * r, std::vector<Elem>(total, 0));
    for (std::size_t i = 0; i < m; ++i)
      for (long d = 0; d <= deg; ++d) {
        std::vector<Elem> base(total, 0);
        for (std::size_t j = 0; j < n; ++j) {
          if (len[j] == 0 || a(i, j).is_zero()) continue;
          auto dg = a(i, j).digits(-1 - d, -len[j] - d);
          std::copy(dg.begin(), dg.end(), base.begin() + static_cast<long>(offset[j]));
        }
        for (unsigned s = 0; s < r; ++s) {
          auto& t = table[(i * static_cast<std::size_t>(deg + 1) + static_cast<std::size_t>(d)) * r + s];
          const Elem* row = f.mul_row(f.basis(s));
          for (std::size_t x = 0; x < total; ++x) t[x] = row[base[x]];
        }
      }
    acc.assign(total, 0);
  }

  void add(std::size_t gen, unsigned s) {
    const auto& t = table[gen * f.r() + s];
    for (std::size_t x = 0; x < total; ++x) acc[x] = f.add(acc[x], t[x]);
  }

  // Exponent of <qA> (certain) or zero; throws if undeterminable.
  Magnitude dist() const {
    Magnitude best;
    long unknown_below = LONG_MIN;  // max over truncated zero windows of -len
    for (std::size_t j = 0; j < n; ++j) {
      long first = -1;
      for (long t = 0; t < len[j]; ++t)
        if (acc[offset[j] + static_cast<std::size_t>(t)]) {
          first = t;
          break;
        }
      if (first >= 0) best = max(best, Magnitude::power(-1 - first));
      else if (!exact[j]) unknown_below = std::max(unknown_below, -len[j]);
    }
    if (unknown_below != LONG_MIN && (best.is_zero() || best.exp < unknown_below))
      throw PrecisionExhausted("distance to the lattice below known precision");
    return best;
  }
};

}  // namespace

BadnessResult badness_constant(const SeriesMatrix& a, long height_exp, std::uint64_t budget, long known_below) {
  if (height_exp < 0) throw std::invalid_argument("height bound below 1 leaves no nonzero q");
  const Field& F = *a.field();
  const std::size_t m = a.rows(), n = a.cols();
  BadnessResult res;
  bool have = false;
  std::uint64_t spent = 0;
  for (long h = 0; h <= height_exp; ++h) {
    if (have && res.constant.is_zero()) break;
    ColumnWindows win(a, h, known_below);
    const std::size_t gens = m * static_cast<std::size_t>(h + 1);
    std::uint64_t need = span_size(F.k(), gens);
    if (need > budget - spent || spent > budget) throw SearchBudgetExceeded(spent + need, budget);
    spent += need;
    GrayState st(F, gens);
    std::size_t top_nonzero = 0;
    gray_walk(F, gens, [&](std::size_t g, unsigned s) {
      Elem before = st.coeff[g];
      st.apply(g, s);
      win.add(g, s);
      if (static_cast<long>(g % static_cast<std::size_t>(h + 1)) == h) {
        if (!before && st.coeff[g]) ++top_nonzero;
        else if (before && !st.coeff[g]) --top_nonzero;
      }
      if (!top_nonzero) return true;
      ++res.enumerated;
      Magnitude d = win.dist();
      Magnitude sc = Magnitude::power(h * static_cast<long>(m)) * d.pow(static_cast<long>(n));
      if (!have || sc < res.constant) {
        have = true;
        res.constant = sc;
        std::vector<Poly> q;
        for (std::size_t i = 0; i < m; ++i) {
          std::vector<Elem> c(st.coeff.begin() + static_cast<long>(i * (h + 1)),
                              st.coeff.begin() + static_cast<long>((i + 1) * (h + 1)));
          q.emplace_back(a.field(), std::move(c));
        }
        res.witness = {q, height(q), d, sc};
      }
      return !sc.is_zero();
    });
  }
  return res;
}

long dirichlet_exponent(std::size_t m, std::size_t n, long t) {
  long num = static_cast<long>(m) * (t + 1), den = static_cast<long>(n);
  return (num + den - 1) / den;
}

ApproxWitness dirichlet_witness(const SeriesMatrix& a, long t) {
  if (t < 0) throw std::invalid_argument("t must be nonnegative");
  const Field& F = *a.field();
  const std::size_t m = a.rows(), n = a.cols();
  long g = dirichlet_exponent(m, n, t);
  // unknowns ordered by degree first so the first kernel vector has least height
  std::size_t cols = m * static_cast<std::size_t>(t + 1);
  ElemMatrix rows;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Elem>> dg(m);
    for (std::size_t i = 0; i < m; ++i) dg[i] = a(i, j).digits(-1, -(g - 1) - t);
    for (long e = 1; e <= g - 1; ++e) {
      std::vector<Elem> row(cols, 0);
      for (long d = 0; d <= t; ++d)
        for (std::size_t i = 0; i < m; ++i) {
          long exp = -e - d;  // coefficient of X^-e in X^d a_ij
          row[static_cast<std::size_t>(d) * m + i] = exp <= -1 ? dg[i][static_cast<std::size_t>(-1 - exp)] : 0;
        }
      rows.push_back(std::move(row));
    }
  }
  auto ker = kernel(F, rows, cols);
  if (ker.empty()) throw WitnessNotFound("no q with ||q|| <= k^" + std::to_string(t));
  const auto& v = ker.front();
  std::vector<Poly> q;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Elem> c;
    for (long d = 0; d <= t; ++d) c.push_back(v[static_cast<std::size_t>(d) * m + i]);
    q.emplace_back(a.field(), std::move(c));
  }
  ApproxWitness w;
  try {
    w = evaluate_witness(a, q);
  } catch (const PrecisionExhausted&) {
    w.q = q;
    w.height = height(q);
    w.dist = Magnitude::power(-g);  // bound only; deeper digits unknown
    w.score = w.height.pow(static_cast<long>(m)) * w.dist.pow(static_cast<long>(n));
  }
  if (!w.dist.is_zero() && w.dist.exp > -g) throw WitnessNotFound("Dirichlet exponent constant too aggressive");
  return w;
}

ContinuedFraction cf_expand(const LaurentSeries& x, int max_terms, bool allow_partial) {
  ContinuedFraction cf;
  if (max_terms <= 0) return cf;
  if (x.is_exact()) {
    Poly num = x.ratfunc().num, den = x.ratfunc().den;
    if (x.is_zero()) num = Poly(den.field());
    while (static_cast<int>(cf.a.size()) < max_terms) {
      auto [q, r] = divmod(num, den);
      cf.a.push_back(q);
      if (r.is_zero()) {
        cf.terminated = true;
        break;
      }
      num = std::move(den);
      den = std::move(r);
    }
    return cf;
  }
  LaurentSeries y = x;
  try {
    while (static_cast<int>(cf.a.size()) < max_terms) {
      cf.a.push_back(y.polynomial_part());
      if (static_cast<int>(cf.a.size()) == max_terms) break;
      y = y.fractional_part().inverse(LONG_MAX / 4);
    }
  } catch (const PrecisionExhausted&) {
    if (!allow_partial) throw PrecisionExhausted("continued fraction", static_cast<long>(cf.a.size()));
    cf.precision_exhausted = true;
  }
  return cf;
}

LaurentSeries cf_eval(const std::vector<Poly>& a) {
  if (a.empty()) throw std::invalid_argument("empty continued fraction");
  RatFunc v = RatFunc::from_poly(a.back());
  for (std::size_t i = a.size() - 1; i-- > 0;) v = RatFunc::from_poly(a[i]) + RatFunc(v.den, v.num);
  return LaurentSeries::from_ratfunc(v);
}

std::vector<Convergent> cf_convergents(const ContinuedFraction& cf) {
  if (cf.a.empty()) throw std::invalid_argument("empty continued fraction");
  const FieldRef& f = cf.a[0].field();
  Poly p2 = Poly(f), q2 = Poly::constant(f, 1);  // index -2
  Poly p1 = Poly::constant(f, 1), q1 = Poly(f);  // index -1
  std::vector<Convergent> out;
  for (const auto& a : cf.a) {
    Poly p = a * p1 + p2, q = a * q1 + q2;
    out.push_back({p, q});
    p2 = std::move(p1);
    q2 = std::move(q1);
    p1 = p;
    q1 = q;
  }
  return out;
}

CfBadness is_bad_cf(const LaurentSeries& x, int depth) {
  auto cf = cf_expand(x, depth + 1);
  CfBadness r;
  r.reached = static_cast<int>(cf.a.size()) - 1;
  r.bounded = r.reached >= depth;
  for (std::size_t i = 1; i < cf.a.size(); ++i) r.max_deg = std::max(r.max_deg, cf.a[i].degree());
  return r;
}

}  // namespace fqdio
