#include "fqdio/geom.hpp"

#include "fqdio/approx.hpp"
#include "fqdio/errors.hpp"
#include "fqdio/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fqdio {

Parallelepiped::Parallelepiped(SeriesMatrix a, std::vector<long> bound_exps) : a_(std::move(a)), e_(std::move(bound_exps)) {
  if (a_.rows() != a_.cols()) throw std::invalid_argument("parallelepiped matrix must be square");
  if (e_.size() != a_.cols()) throw std::invalid_argument("one bound per column required");
  for (const auto& x : a_.entries())
    if (!x.is_exact()) throw std::invalid_argument("parallelepiped entries must be exact");
  auto d = det(a_);
  if (d.is_zero()) throw std::invalid_argument("parallelepiped matrix is singular");
  det_exp_ = d.lead_exp();
}

Magnitude Parallelepiped::distance(const SeriesVec& x) const {
  auto y = x * a_;
  Magnitude f;
  for (std::size_t j = 0; j < y.size(); ++j) f = max(f, y[j].norm() * Magnitude::power(-e_[j]));
  return f;
}

Magnitude Parallelepiped::distance(const std::vector<Poly>& x) const { return distance(to_series(x)); }

long Parallelepiped::measure_exp() const { return std::accumulate(e_.begin(), e_.end(), 0L) - det_exp_; }

Rational Parallelepiped::measure() const { return k_power(field()->k(), measure_exp()); }

Parallelepiped Parallelepiped::canonical() const {
  SeriesMatrix m = a_;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = m(i, j) * LaurentSeries::monomial(field(), 1, -e_[j]);
  return unit(m);
}

Parallelepiped Parallelepiped::polar() const { return unit(inverse(canonical().a_).transpose()); }

namespace {

// Incremental F(X)-linear independence test for polynomial vectors.
class Echelon {
 public:
  explicit Echelon(std::size_t d) : d_(d) {}
  std::size_t rank() const { return rows_.size(); }

  bool add(const std::vector<Poly>& v) {
    std::vector<RatFunc> r;
    for (const auto& p : v) r.push_back(RatFunc::from_poly(p));
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      std::size_t c = piv_[k];
      if (r[c].is_zero()) continue;
      RatFunc f = r[c] / rows_[k][c];
      for (std::size_t j = 0; j < d_; ++j) r[j] = r[j] - f * rows_[k][j];
    }
    for (std::size_t c = 0; c < d_; ++c)
      if (!r[c].is_zero()) {
        rows_.push_back(std::move(r));
        piv_.push_back(c);
        return true;
      }
    return false;
  }

 private:
  std::size_t d_;
  std::vector<std::vector<RatFunc>> rows_;
  std::vector<std::size_t> piv_;
};

struct LatticeData {
  std::vector<std::vector<Poly>> n;  // D * A diag(X^-e), polynomial
  long deg_d = 0;
  long hinv = 0;  // exponent of the height of (A diag(X^-e))^-1
};

LatticeData lattice_data(const Parallelepiped& p) {
  const FieldRef& f = p.field();
  auto m = p.canonical().matrix();
  LatticeData ld;
  Poly den = Poly::constant(f, 1);
  for (const auto& x : m.entries())
    if (!x.is_zero()) {
      const Poly& dx = x.ratfunc().den;
      den = divmod(den * dx, gcd(den, dx)).first;
    }
  ld.deg_d = den.degree();
  std::size_t d = p.dim();
  ld.n.assign(d, std::vector<Poly>(d, Poly(f)));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const auto& x = m(i, j);
      if (x.is_zero()) continue;
      ld.n[i][j] = x.ratfunc().num * divmod(den, x.ratfunc().den).first;
    }
  auto h = height(inverse(m));
  ld.hinv = h.exp;
  return ld;
}

}  // namespace

int minima_degree_bound(const Parallelepiped& p) {
  auto ld = lattice_data(p);
  long d = static_cast<long>(p.dim());
  long v_lo = -ld.hinv;
  long lam_max = -p.measure_exp() - (d - 1) * v_lo;
  return static_cast<int>(std::max(0L, lam_max + ld.hinv));
}

SuccessiveMinima successive_minima(const Parallelepiped& p) { return successive_minima(p, minima_degree_bound(p)); }

SuccessiveMinima successive_minima(const Parallelepiped& p, int degree_bound) {
  if (degree_bound < 0) throw std::invalid_argument("negative degree bound");
  const FieldRef& f = p.field();
  const Field& F = *f;
  auto ld = lattice_data(p);
  const std::size_t d = p.dim();
  const long B = degree_bound;
  std::vector<long> col_deg(d, -1);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) col_deg[j] = std::max(col_deg[j], static_cast<long>(ld.n[i][j].degree()));
  long top = -1;
  for (long c : col_deg) top = std::max(top, c);
  const long v_lo = -ld.hinv, v_hi = B + top - ld.deg_d;
  const std::size_t unknowns = d * static_cast<std::size_t>(B + 1);

  SuccessiveMinima res;
  res.degree_bound = degree_bound;
  Echelon ech(d);
  for (long v = v_lo; v <= v_hi && ech.rank() < d; ++v) {
    // x with deg x_i <= B and deg (xN)_j <= v + deg D; unknown (b, i) at b * d + i
    long cap = v + ld.deg_d;
    ElemMatrix rows;
    for (std::size_t j = 0; j < d; ++j)
      for (long t = std::max(cap + 1, 0L); t <= B + col_deg[j]; ++t) {
        std::vector<Elem> row(unknowns, 0);
        bool any = false;
        for (std::size_t i = 0; i < d; ++i)
          for (long b = 0; b <= B; ++b) {
            Elem c = ld.n[i][j].coeff(static_cast<int>(t - b));
            if (c) {
              row[static_cast<std::size_t>(b) * d + i] = c;
              any = true;
            }
          }
        if (any) rows.push_back(std::move(row));
      }
    auto ker = rows.empty() ? std::vector<std::vector<Elem>>() : kernel(F, rows, unknowns);
    if (rows.empty())
      for (std::size_t u = 0; u < unknowns; ++u) {
        std::vector<Elem> e(unknowns, 0);
        e[u] = 1;
        ker.push_back(std::move(e));
      }
    for (const auto& kv : ker) {
      std::vector<Poly> x;
      for (std::size_t i = 0; i < d; ++i) {
        std::vector<Elem> c;
        for (long b = 0; b <= B; ++b) c.push_back(kv[static_cast<std::size_t>(b) * d + i]);
        x.emplace_back(f, std::move(c));
      }
      if (ech.add(x)) {
        res.lambda_exps.push_back(v);
        res.witnesses.push_back(std::move(x));
        if (ech.rank() == d) break;
      }
    }
  }
  long sum = std::accumulate(res.lambda_exps.begin(), res.lambda_exps.end(), 0L);
  if (ech.rank() < d || sum != -p.measure_exp()) throw SearchIncomplete(minima_degree_bound(p));
  return res;
}

Parallelepiped structured_body(const SeriesMatrix& c, long r_exp, long level) {
  std::size_t m = c.rows(), n = c.cols();
  auto hs = build_hat(c).hat_star;
  std::vector<long> e;
  for (std::size_t l = 0; l < m; ++l) e.push_back(-r_exp * static_cast<long>(n) * (1 + level));
  for (std::size_t l = 0; l < n; ++l) e.push_back(r_exp * static_cast<long>(m) * (1 + level));
  return {hs, e};
}

Parallelepiped structured_polar_body(const SeriesMatrix& c, long r_exp, long level) {
  std::size_t m = c.rows(), n = c.cols();
  auto h = build_hat(c).hat;
  std::vector<long> e;
  for (std::size_t l = 0; l < n; ++l) e.push_back(-r_exp * static_cast<long>(m) * (1 + level));
  for (std::size_t l = 0; l < m; ++l) e.push_back(r_exp * static_cast<long>(n) * (1 + level));
  return {h, e};
}

SeriesVec structured_polar_map(const SeriesVec& y, std::size_t n) {
  SeriesVec out(y.begin() + static_cast<long>(n), y.end());
  for (std::size_t i = 0; i < n; ++i) out.push_back(-y[i]);
  return out;
}

DualityReport check_duality(const Parallelepiped& p, std::size_t m, std::size_t n, int degree_bound) {
  std::size_t d = p.dim();
  if (m + n != d || m == 0 || n == 0) throw std::invalid_argument("m + n must equal the dimension");
  DualityReport r;
  auto q = p.polar();
  r.lambda = degree_bound < 0 ? successive_minima(p) : successive_minima(p, degree_bound);
  r.sigma = degree_bound < 0 ? successive_minima(q) : successive_minima(q, degree_bound);
  for (std::size_t j = 0; j < d; ++j) r.products.push_back(r.lambda.lambda_exps[j] + r.sigma.lambda_exps[d - 1 - j]);
  r.holds = r.lambda.lambda_exps[m - 1] + r.sigma.lambda_exps[n] == 0;
  return r;
}

}  // namespace fqdio
