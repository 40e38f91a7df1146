#include "fqdio/white_strategy.hpp"

#include "fqdio/enumerate.hpp"
#include "fqdio/errors.hpp"
#include "fqdio/field.hpp"
#include "fqdio/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace fqdio {

namespace {

Rational mag_value(const Magnitude& x, unsigned k) { return x.is_zero() ? Rational(0) : k_power(k, x.exp); }

long floor_rat(const Rational& x) {
  BigInt q = numerator(x) / denominator(x);
  if (x < 0 && Rational(q) != x) q -= 1;
  return static_cast<long>(q);
}

/// Largest integer strictly below x.
long below(const Rational& x) {
  long f = floor_rat(x);
  return Rational(f) == x ? f - 1 : f;
}

Magnitude vec_norm(const std::vector<LaurentSeries>& v) {
  Magnitude m;
  for (const auto& x : v) m = max(m, x.norm());
  return m;
}

LaurentSeries random_finite(std::mt19937_64& g, const FieldRef& f, long hi, int len) {
  std::vector<Elem> d(static_cast<std::size_t>(len));
  for (auto& x : d) x = static_cast<Elem>(g() % f->k());
  return LaurentSeries::from_digits(f, hi, d);
}

std::string format_q(const std::vector<Poly>& q) {
  std::string s = "(";
  for (std::size_t i = 0; i < q.size(); ++i) s += (i ? ", " : "") + q[i].str();
  return s + ")";
}

/// Subsets of {0..n-1} of size v in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t v) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == v) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

LaurentSeries sub_det(const SeriesMatrix& g, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  if (rows.empty()) return LaurentSeries::one(g.field());
  SeriesMatrix s(g.field(), rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = g(rows[i], cols[j]);
  return det(s);
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

/// Entry of A that meets coordinate s of q' in column c.
const LaurentSeries& paired_entry(const SeriesMatrix& a, DangerKind kind, std::size_t s, std::size_t c) {
  return kind == DangerKind::KType ? a(s, c) : a(c, s);
}

}  // namespace

const char* kind_name(DangerKind k) { return k == DangerKind::KType ? "k-type" : "h-type"; }

long StrategyConfig::delta_exp() const {
  long d = static_cast<long>(m + n);
  return -r_exp * static_cast<long>(m) * d * d;
}

long StrategyConfig::delta_star_exp() const {
  long d = static_cast<long>(m + n);
  return -r_exp * static_cast<long>(n) * d * d;
}

long StrategyConfig::certify_exp() const {
  long mm = static_cast<long>(m), nn = static_cast<long>(n);
  return (mm + nn) * delta_exp() + r_exp * (-nn * nn - mm * nn) - 1;
}

long k_marker_exp(const StrategyConfig& cfg, long i) {
  return -cfg.r_exp * static_cast<long>(cfg.m) - cfg.r_exp * static_cast<long>(cfg.m + cfg.n) * i;
}

long h_marker_exp(const StrategyConfig& cfg, long i) {
  return -cfg.r_exp * static_cast<long>(cfg.m + cfg.n) * (1 + i);
}

Markers schedule_markers(const GameTranscript& t, const StrategyConfig& cfg) {
  Markers mk;
  auto first_below = [&](long e) -> std::optional<std::size_t> {
    Rational th = k_power(t.params.k, e);
    for (std::size_t j = 0; j < t.moves.size(); j += 2)
      if (t.moves[j].legal && t.moves[j].ball.radius < th) return j;
    return std::nullopt;
  };
  for (long i = 0;; ++i) {
    auto km = first_below(k_marker_exp(cfg, i));
    if (!km) break;
    mk.k_moves.push_back(*km);
    auto hm = first_below(h_marker_exp(cfg, i));
    if (!hm) break;
    mk.h_moves.push_back(*hm);
  }
  return mk;
}

InequalityWindow inequality_window(DangerKind kind, long i, const StrategyConfig& cfg) {
  Rational r(cfg.r_exp), m(static_cast<long>(cfg.m)), n(static_cast<long>(cfg.n));
  if (kind == DangerKind::KType) {
    Rational ti = cfg.tau() + i;
    return {cfg.delta_exp() + r * n * ti, cfg.delta_exp() + r * (-m * ti - n)};
  }
  return {cfg.delta_star_exp() + r * m * (1 + i), cfg.delta_star_exp() + r * (-n * (1 + i) - m)};
}

bool check_inequalities(const SeriesMatrix& a, const std::vector<Poly>& q, long i, DangerKind kind,
                        const StrategyConfig& cfg) {
  const std::size_t m = a.rows(), n = a.cols();
  if (q.size() != m + n) throw std::invalid_argument("q must have m + n coordinates");
  std::size_t lead = kind == DangerKind::KType ? m : n, cols = kind == DangerKind::KType ? n : m;
  auto w = inequality_window(kind, i, cfg);
  Magnitude h = height(std::vector<Poly>(q.begin(), q.begin() + static_cast<long>(lead)));
  if (h.is_zero() || !(Rational(h.exp) < w.height)) return false;
  auto hats = build_hat(a);
  const SeriesMatrix& mat = kind == DangerKind::KType ? hats.hat : hats.hat_star;
  SeriesVec qs = to_series(q);
  for (std::size_t c = 0; c < cols; ++c) {
    Magnitude d = dot(qs, mat.col(c)).norm();
    if (!d.is_zero() && !(Rational(d.exp) < w.dist)) return false;
  }
  return true;
}

DangerReport danger_set(const FormalBall& b, long i, DangerKind kind, const StrategyConfig& cfg, long height_cap_exp,
                        std::uint64_t budget) {
  DangerReport rep;
  rep.level = i;
  rep.kind = kind;
  FormalBall cb = canonicalize(b);
  const SeriesMatrix& c = cb.center;
  const FieldRef& fr = c.field();
  const Field& F = *fr;
  const long fexp = cb.effective_exp();
  const std::size_t lead = kind == DangerKind::KType ? c.rows() : c.cols();
  const std::size_t cols = kind == DangerKind::KType ? c.cols() : c.rows();
  auto w = inequality_window(kind, i, cfg);
  long maxdeg = std::min(below(w.height), height_cap_exp);
  rep.max_degree = maxdeg;
  if (maxdeg < 0) return rep;
  const long dist_top = below(w.dist);
  const std::size_t len = lead * static_cast<std::size_t>(maxdeg + 1);
  check_budget(F.k(), len, budget);
  std::uint64_t spent = 0;
  std::vector<Elem> coeff(len, 0);
  const std::uint64_t total = span_size(F.k(), len);
  for (std::uint64_t it = 1; it < total; ++it) {
    for (std::size_t x = 0; x < len; ++x) {
      if (++coeff[x] < F.k()) break;
      coeff[x] = 0;
    }
    std::vector<Poly> qp;
    long d = -1;
    for (std::size_t s = 0; s < lead; ++s) {
      std::vector<Elem> cf(coeff.begin() + static_cast<long>(s * (maxdeg + 1)),
                           coeff.begin() + static_cast<long>((s + 1) * (maxdeg + 1)));
      qp.emplace_back(fr, std::move(cf));
      d = std::max(d, static_cast<long>(qp.back().degree()));
    }
    const long top = std::max(dist_top, fexp + d);
    std::vector<std::vector<Poly>> options(cols);
    bool ok = true;
    for (std::size_t col = 0; col < cols && ok; ++col) {
      LaurentSeries x = LaurentSeries::zero(fr);
      for (std::size_t s = 0; s < lead; ++s)
        if (!qp[s].is_zero()) x = x + LaurentSeries::from_poly(qp[s]) * paired_entry(c, kind, s, col);
      Poly base = -x.polynomial_part();
      if (top < 0) {
        LaurentSeries fr_part = x.fractional_part();
        if (fr_part.is_zero() || fr_part.lead_exp() <= top) options[col].push_back(base);
        else ok = false;
        continue;
      }
      std::uint64_t cnt = span_size(F.k(), static_cast<std::size_t>(top + 1));
      spent += cnt;
      if (spent > budget) throw SearchBudgetExceeded(spent, budget);
      std::vector<Elem> r(static_cast<std::size_t>(top + 1), 0);
      for (std::uint64_t z = 0; z < cnt; ++z) {
        options[col].push_back(base + Poly(fr, r));
        for (auto& e : r) {
          if (++e < F.k()) break;
          e = 0;
        }
      }
    }
    if (!ok) continue;
    std::vector<std::size_t> pick(cols, 0);
    for (;;) {
      std::vector<Poly> sol = qp;
      for (std::size_t col = 0; col < cols; ++col) sol.push_back(options[col][pick[col]]);
      rep.solutions.push_back(std::move(sol));
      if (++spent > budget) throw SearchBudgetExceeded(spent, budget);
      std::size_t col = 0;
      for (; col < cols; ++col) {
        if (++pick[col] < options[col].size()) break;
        pick[col] = 0;
      }
      if (col == cols) break;
    }
  }
  rep.rank = rep.solutions.empty() ? 0 : rank(rep.solutions);
  return rep;
}

SubspaceBasis orthonormal_basis(const std::vector<SeriesVec>& vectors) {
  SubspaceBasis out;
  std::vector<SeriesVec> rows = vectors;
  if (rows.empty()) return out;
  const std::size_t d = rows.front().size();
  std::vector<bool> used(d, false);
  while (!rows.empty()) {
    std::size_t br = 0, bc = 0;
    Magnitude best;
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < d; ++c)
        if (!used[c] && rows[r][c].norm() > best) {
          best = rows[r][c].norm();
          br = r;
          bc = c;
        }
    if (best.is_zero()) break;
    SeriesVec piv = rows[br];
    LaurentSeries inv = piv[bc].inverse();
    for (auto& x : piv) x = x * inv;
    rows.erase(rows.begin() + static_cast<long>(br));
    auto eliminate = [&](SeriesVec& row) {
      if (row[bc].is_zero()) return;
      LaurentSeries factor = row[bc];
      for (std::size_t c = 0; c < d; ++c) row[c] = row[c] - factor * piv[c];
    };
    for (auto& row : rows) eliminate(row);
    for (auto& row : out.y) eliminate(row);
    used[bc] = true;
    out.y.push_back(std::move(piv));
  }
  return out;
}

SubspaceBasis orthonormal_basis(const std::vector<std::vector<Poly>>& vectors) {
  std::vector<SeriesVec> v;
  for (const auto& p : vectors) v.push_back(to_series(p));
  return orthonormal_basis(v);
}

bool is_orthonormal(const SubspaceBasis& b, std::mt19937_64& g, int trials) {
  if (b.y.empty()) return true;
  const FieldRef& f = b.y.front().front().field();
  for (const auto& y : b.y)
    if (vec_norm(y) != Magnitude::power(0)) return false;
  const std::size_t d = b.y.front().size();
  for (int t = 0; t < trials; ++t) {
    SeriesVec sum(d, LaurentSeries::zero(f));
    Magnitude top;
    for (const auto& y : b.y) {
      LaurentSeries s = g() % 4 == 0 ? LaurentSeries::zero(f)
                                     : random_finite(g, f, static_cast<long>(g() % 7) - 3, 1 + static_cast<int>(g() % 4));
      top = max(top, s.norm());
      for (std::size_t c = 0; c < d; ++c) sum[c] = sum[c] + s * y[c];
    }
    if (vec_norm(sum) != top) return false;
  }
  return true;
}

SeriesMatrix pairing_matrix(const SeriesMatrix& a, const SubspaceBasis& b, DangerKind kind) {
  auto hats = build_hat(a);
  const SeriesMatrix& mat = kind == DangerKind::KType ? hats.hat : hats.hat_star;
  std::size_t cols = kind == DangerKind::KType ? a.cols() : a.rows();
  SeriesMatrix g(a.field(), b.y.size(), cols);
  for (std::size_t h = 0; h < b.y.size(); ++h)
    for (std::size_t l = 0; l < cols; ++l) g(h, l) = dot(b.y[h], mat.col(l));
  return g;
}

Magnitude MinorVector::norm() const { return vec_norm(entries); }

MinorVector minors(const SeriesMatrix& a, const SubspaceBasis& b, long v, DangerKind kind) {
  MinorVector mv;
  mv.v = v;
  if (v <= 0) {
    mv.entries.push_back(LaurentSeries::one(a.field()));
    return mv;
  }
  SeriesMatrix g = pairing_matrix(a, b, kind);
  if (static_cast<std::size_t>(v) > g.rows() || static_cast<std::size_t>(v) > g.cols())
    throw std::invalid_argument("minor size exceeds the pairing matrix");
  auto rs = subsets(g.rows(), static_cast<std::size_t>(v));
  auto cs = subsets(g.cols(), static_cast<std::size_t>(v));
  for (const auto& r : rs)
    for (const auto& c : cs) mv.entries.push_back(sub_det(g, r, c));
  return mv;
}

LaurentSeries leading_det(const SeriesMatrix& a, const SubspaceBasis& b, long v, DangerKind kind) {
  if (v <= 0) return LaurentSeries::one(a.field());
  SeriesMatrix g = pairing_matrix(a, b, kind);
  return sub_det(g, iota(static_cast<std::size_t>(v)), iota(static_cast<std::size_t>(v)));
}

SeriesVec discrete_gradient(const SeriesMatrix& a, const SubspaceBasis& b, long v, DangerKind kind) {
  LaurentSeries base = leading_det(a, b, v, kind);
  SeriesVec out;
  auto one = LaurentSeries::one(a.field());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      SeriesMatrix s = a;
      s(i, j) = s(i, j) + one;
      out.push_back(leading_det(s, b, v, kind) - base);
    }
  return out;
}

Magnitude phi(const SeriesVec& z, const SeriesMatrix& a, const SubspaceBasis& b, long v, DangerKind kind) {
  if (v < 1) throw std::invalid_argument("phi needs v >= 1");
  SeriesMatrix g = pairing_matrix(a, b, kind);
  SeriesVec w(z.size(), LaurentSeries::zero(a.field()));
  auto cols = iota(static_cast<std::size_t>(v - 1));
  for (long h = 1; h <= v; ++h) {
    std::vector<std::size_t> rows;
    for (long r = 0; r < v; ++r)
      if (r != h - 1) rows.push_back(static_cast<std::size_t>(r));
    LaurentSeries d = sub_det(g, rows, cols);
    if (h % 2 == 0) d = -d;
    for (std::size_t c = 0; c < z.size(); ++c) w[c] = w[c] + d * b.y[static_cast<std::size_t>(h - 1)][c];
  }
  return dot(w, z).norm();
}

Magnitude minors_sup(const FormalBall& ball, const SubspaceBasis& b, long v, DangerKind kind) {
  if (v <= 0) return Magnitude::power(0);
  const SeriesMatrix& c = ball.center;
  const std::size_t vars = c.rows() * c.cols();
  if (vars > 16) throw std::invalid_argument("too many entries for the exact sup");
  const long f = ball.effective_exp();
  const std::size_t masks = std::size_t(1) << vars;
  std::vector<std::vector<LaurentSeries>> vals(masks);
  auto one = LaurentSeries::one(c.field());
  for (std::size_t t = 0; t < masks; ++t) {
    SeriesMatrix a = c;
    for (std::size_t e = 0; e < vars; ++e)
      if (t >> e & 1) a(e / c.cols(), e % c.cols()) = a(e / c.cols(), e % c.cols()) + one;
    vals[t] = minors(a, b, v, kind).entries;
  }
  // Moebius transform: vals[S] becomes the coefficient of prod_{s in S} E_s.
  for (std::size_t e = 0; e < vars; ++e)
    for (std::size_t t = 0; t < masks; ++t)
      if (t >> e & 1)
        for (std::size_t x = 0; x < vals[t].size(); ++x) vals[t][x] = vals[t][x] - vals[t ^ (std::size_t(1) << e)][x];
  Magnitude sup;
  for (std::size_t t = 0; t < masks; ++t) {
    Magnitude cm = vec_norm(vals[t]);
    if (!cm.is_zero()) sup = max(sup, Magnitude::power(cm.exp + f * static_cast<long>(std::popcount(t))));
  }
  return sup;
}

LaurentSeries matrix_dot(const SeriesMatrix& x, const SeriesVec& g) {
  LaurentSeries s = LaurentSeries::zero(x.field());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) s = s + x(i, j) * g[i * x.cols() + j];
  return s;
}

long anchor_rounds(const GameParams& p) {
  Rational gamma = p.gamma();
  if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
  Rational ab = p.alpha * p.beta, pw = ab;
  long t = 1;
  while (pw > gamma / 2) {
    pw *= ab;
    ++t;
  }
  return t;
}

DerivedConstants derive_constants(const StrategyConfig& cfg, const GameParams& p) {
  DerivedConstants d;
  d.gamma = p.gamma();
  d.epsilon = d.gamma * cfg.K5 / (8 * cfg.K4);
  d.t0 = anchor_rounds(p);
  Rational ab = p.alpha * p.beta, k6 = 1;
  d.mu.push_back(1);
  d.K6.push_back(1);
  for (std::size_t v = 1; v <= cfg.m; ++v) {
    k6 *= ab * std::min(Rational(1, 2), d.epsilon) * d.mu[v - 1];
    d.K6.push_back(k6);
    Rational mu = std::min({Rational(1, 8), Rational(d.gamma / 8 * ab * k6), Rational(3 * d.gamma / 8 * cfg.K5 * k6 * cfg.K7)});
    d.mu.push_back(mu);
  }
  return d;
}

namespace {

std::vector<std::vector<Elem>> grid_offsets(const MoveGrid& g, unsigned k, std::size_t limit, std::uint64_t seed) {
  std::size_t len = g.entries * static_cast<std::size_t>(g.digits_per_entry());
  std::uint64_t total = span_size(k, len);
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> off(len, 0);
  if (total <= limit) {
    for (std::uint64_t c = 0; c < total; ++c) {
      out.push_back(off);
      for (auto& e : off) {
        if (++e < k) break;
        e = 0;
      }
    }
    return out;
  }
  out.push_back(off);
  std::mt19937_64 rng(seed);
  while (out.size() < limit) {
    for (auto& e : off) e = static_cast<Elem>(rng() % k);
    out.push_back(off);
  }
  return out;
}

FormalBall shrink(const GameTranscript& t) {
  return {t.last().center, t.params.alpha * t.last().radius};
}

}  // namespace

FormalBall WhiteStrategy::propose(const GameTranscript& t) {
  if (t.to_move() != Player::White) throw std::logic_error("white strategy asked to move for black");
  return cfg_.mode == WhiteMode::Literal ? literal_move(t) : avoid_move(t);
}

FormalBall WhiteStrategy::avoid_move(const GameTranscript& t) {
  MoveGrid g = move_grid(t);
  const FieldRef& fr = t.field;
  const unsigned k = t.params.k;
  const std::size_t m = t.m, n = t.n;
  const long H = cfg_.avoid_height_exp, fnew = floor_log_k(g.new_radius, k), kexp = cfg_.certify_exp();
  const std::size_t len = m * static_cast<std::size_t>(H + 1);
  check_budget(k, len, cfg_.danger_budget);
  std::vector<std::vector<Poly>> qs;
  std::vector<long> degs;
  std::vector<Elem> coeff(len, 0);
  const std::uint64_t total = span_size(k, len);
  for (std::uint64_t it = 1; it < total; ++it) {
    for (auto& e : coeff) {
      if (++e < k) break;
      e = 0;
    }
    std::vector<Poly> q;
    long d = -1;
    for (std::size_t s = 0; s < m; ++s) {
      q.emplace_back(fr, std::vector<Elem>(coeff.begin() + static_cast<long>(s * (H + 1)),
                                           coeff.begin() + static_cast<long>((s + 1) * (H + 1))));
      d = std::max(d, static_cast<long>(q.back().degree()));
    }
    qs.push_back(std::move(q));
    degs.push_back(d);
  }
  auto margins = [&](const SeriesMatrix& c) {
    std::vector<long> out;
    out.reserve(qs.size());
    for (std::size_t x = 0; x < qs.size(); ++x) {
      const long spread = degs[x] + fnew;
      Magnitude best;
      for (std::size_t j = 0; j < n; ++j) {
        LaurentSeries s = LaurentSeries::zero(fr);
        for (std::size_t i = 0; i < m; ++i)
          if (!qs[x][i].is_zero()) s = s + LaurentSeries::from_poly(qs[x][i]) * c(i, j);
        best = max(best, s.fractional_part().norm());
      }
      long dexp = !best.is_zero() && best.exp > spread ? best.exp : spread;
      long val = static_cast<long>(m) * degs[x] + static_cast<long>(n) * dexp - kexp;
      out.push_back(val);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto offs = grid_offsets(g, k, cfg_.max_candidates, t.moves.size());
  SeriesMatrix best_c = g.center(offs.front());
  auto best_m = margins(best_c);
  for (std::size_t o = 1; o < offs.size(); ++o) {
    SeriesMatrix c = g.center(offs[o]);
    auto mm = margins(c);
    if (mm > best_m) {
      best_m = std::move(mm);
      best_c = std::move(c);
    }
  }
  return {best_c, g.new_radius};
}

FormalBall WhiteStrategy::literal_move(const GameTranscript& t) {
  Markers mk = schedule_markers(t, cfg_);
  std::size_t stage_move = 0;
  DangerKind kind = DangerKind::HType;
  long level = 0;
  bool have = false;
  // latest marker so far decides which system is being avoided next
  for (std::size_t i = 0; i < mk.k_moves.size(); ++i) {
    if (!have || mk.k_moves[i] >= stage_move) {
      stage_move = mk.k_moves[i];
      kind = DangerKind::HType;
      level = static_cast<long>(i);
      have = true;
    }
    if (i < mk.h_moves.size() && mk.h_moves[i] >= stage_move && mk.h_moves[i] > mk.k_moves[i]) {
      stage_move = mk.h_moves[i];
      kind = DangerKind::KType;
      level = static_cast<long>(i) + 1;
    }
  }
  if (!have) {
    ++fallbacks_;
    return shrink(t);
  }
  DangerReport rep;
  try {
    rep = danger_set(t.moves[stage_move].ball, level, kind, cfg_, cfg_.avoid_height_exp, cfg_.danger_budget);
  } catch (const SearchBudgetExceeded&) {
    ++fallbacks_;
    return shrink(t);
  }
  if (rep.solutions.empty()) {
    ++fallbacks_;
    return shrink(t);
  }
  SubspaceBasis basis = orthonormal_basis(rep.solutions);
  const std::size_t cols = kind == DangerKind::KType ? t.n : t.m;
  long v = static_cast<long>(std::min(basis.y.size(), cols));
  basis.y.resize(static_cast<std::size_t>(v));
  const SeriesMatrix& c = t.last().center;
  if (anchor_stage_ != stage_move || countdown_ <= 0) {
    anchor_ = discrete_gradient(c, basis, v, kind);
    countdown_ = anchor_rounds(t.params);
    anchor_stage_ = stage_move;
  }
  --countdown_;
  if (vec_norm(anchor_).is_zero()) {
    ++fallbacks_;
    return shrink(t);
  }
  MoveGrid g = move_grid(t);
  auto offs = grid_offsets(g, t.params.k, cfg_.max_candidates, t.moves.size());
  SeriesMatrix best_c = g.center(offs.front());
  Magnitude best;
  for (const auto& off : offs) {
    SeriesMatrix d = g.center(off);
    Magnitude s = matrix_dot(c - d, anchor_).norm();
    if (s > best) {
      best = s;
      best_c = std::move(d);
    }
  }
  return {best_c, g.new_radius};
}

Certificate certify_bad(const SeriesMatrix& point, const StrategyConfig& cfg, long cap_exp, long known_below) {
  Certificate cert;
  cert.K_exp = cfg.certify_exp();
  cert.cap_exp = cap_exp;
  BadnessResult r;
  try {
    r = badness_constant(point, cap_exp, kDefaultSearchBudget, known_below);
  } catch (const PrecisionExhausted&) {
    // a q whose score stays below K whatever the unknown digits are still refutes
    long kb = known_below;
    for (std::size_t i = 0; i < point.rows(); ++i)
      for (std::size_t j = 0; j < point.cols(); ++j) kb = std::max(kb, point(i, j).known_below());
    SeriesMatrix known = point;
    for (std::size_t i = 0; i < point.rows(); ++i)
      for (std::size_t j = 0; j < point.cols(); ++j) known(i, j) = point(i, j).chop(kb);
    BadnessResult r0 = badness_constant(known, cap_exp);
    const long m = static_cast<long>(point.rows()), n = static_cast<long>(point.cols());
    Magnitude dist = max(r0.witness.dist, r0.witness.height * Magnitude::power(kb - 1));
    Magnitude upper = r0.witness.height.pow(m) * dist.pow(n);
    if (upper.exp <= cert.K_exp) throw CounterexampleFound(format_q(r0.witness.q), upper.exp);
    throw;
  }
  cert.witnesses_checked = r.enumerated;
  cert.worst = r.witness;
  if (r.constant.is_zero() || r.constant.exp <= cert.K_exp)
    throw CounterexampleFound(format_q(r.witness.q), r.constant.is_zero() ? LONG_MIN : r.constant.exp);
  cert.min_margin_exp = r.constant.exp - cert.K_exp;
  return cert;
}

SeriesMatrix sample_point(std::mt19937_64& g, const FormalBall& ball, int depth) {
  SeriesMatrix x = ball.center;
  long f = ball.effective_exp();
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) = x(i, j) + random_finite(g, x.field(), f, depth);
  return x;
}

FormalBall sample_subball(std::mt19937_64& g, const FormalBall& outer, const Rational& radius_bound) {
  unsigned k = outer.center.field()->k();
  Rational cap = std::min(radius_bound, outer.radius);
  long e = floor_log_k(cap, k);
  Rational r = k_power(k, e);
  if (r >= radius_bound) r = k_power(k, --e);
  SeriesMatrix c = outer.center;
  Rational slack = outer.radius - r;
  if (slack > 0) {
    long s = floor_log_k(slack, k);
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) = c(i, j) + random_finite(g, c.field(), s, 3);
  }
  return {c, r};
}

MinorInstance sample_minor_instance(std::mt19937_64& g, const StrategyConfig& cfg, FieldRef f) {
  MinorInstance li;
  const std::size_t d = cfg.m + cfg.n;
  do {
    std::vector<SeriesVec> vecs;
    for (std::size_t h = 0; h < cfg.m; ++h) {
      SeriesVec v;
      for (std::size_t c = 0; c < d; ++c)
        v.push_back(g() % 3 == 0 ? LaurentSeries::zero(f) : random_finite(g, f, static_cast<long>(g() % 3), 3));
      vecs.push_back(std::move(v));
    }
    li.basis = orthonormal_basis(vecs);
  } while (li.basis.y.size() != cfg.m);
  SeriesMatrix c(f, cfg.m, cfg.n);
  for (std::size_t i = 0; i < cfg.m; ++i)
    for (std::size_t j = 0; j < cfg.n; ++j) c(i, j) = random_finite(g, f, cfg.sigma_exp, 5);
  long s = 1 + static_cast<long>(g() % 4);
  Rational r = k_power(f->k(), -s);
  if (g() % 3 == 0) r = r * Rational(static_cast<long>(f->k()) * 2 - 1, 2 * static_cast<long>(f->k()));
  li.ball = {c, r};
  li.v = 1 + static_cast<long>(g() % cfg.m);
  return li;
}

namespace {

/// Solves D_v = 0 for one entry of row v-1 (h-type) and returns the matrix,
/// chopped to finite support at `precision`.
std::optional<SeriesMatrix> plant_zero(const SeriesMatrix& a, const SubspaceBasis& b, long v, long precision) {
  const std::size_t row = static_cast<std::size_t>(v - 1);
  SeriesMatrix z = a;
  for (std::size_t j = 0; j < a.cols(); ++j) z(row, j) = LaurentSeries::zero(a.field());
  LaurentSeries c0 = leading_det(z, b, v);
  std::vector<LaurentSeries> cj;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    SeriesMatrix e = z;
    e(row, j) = LaurentSeries::one(a.field());
    cj.push_back(leading_det(e, b, v) - c0);
  }
  std::size_t piv = a.cols();
  for (std::size_t j = 0; j < a.cols(); ++j)
    if (!cj[j].is_zero() && (piv == a.cols() || cj[j].norm() > cj[piv].norm())) piv = j;
  if (piv == a.cols()) return std::nullopt;
  LaurentSeries rest = c0;
  for (std::size_t j = 0; j < a.cols(); ++j)
    if (j != piv) rest = rest + cj[j] * a(row, j);
  SeriesMatrix out = a;
  out(row, piv) = (-rest / cj[piv]).chop(precision);
  if (out(row, piv).is_zero()) out(row, piv) = LaurentSeries::zero(a.field());
  return out;
}

struct GradientSample {
  bool ok = false;
  Magnitude grad, mprev_ball;
};

/// Builds A' with small M_v and checks the hypotheses of the gradient bound.
GradientSample gradient_sample(std::mt19937_64& g, const StrategyConfig& cfg, FieldRef f) {
  GradientSample gs;
  auto li = sample_minor_instance(g, cfg, f);
  long v = li.v;
  long fe = li.ball.effective_exp();
  SeriesMatrix a = sample_point(g, li.ball, 4);
  auto planted = plant_zero(a, li.basis, v, fe - 3 - static_cast<long>(g() % 4));
  if (!planted) return gs;
  FormalBall bp{*planted, k_power(f->k(), fe - 1 - static_cast<long>(g() % 2))};
  Magnitude mprev = minors_sup(bp, li.basis, v - 1);
  Magnitude mv = minors(*planted, li.basis, v).norm();
  // need ||M_v(A')|| < M_{v-1}(B') / 8
  if (mprev.is_zero() || !(mag_value(mv, f->k()) < mag_value(mprev, f->k()) / 8)) return gs;
  MinorVector prev = minors(*planted, li.basis, v - 1);
  LaurentSeries dv = v == 1 ? LaurentSeries::one(f) : leading_det(*planted, li.basis, v - 1);
  if (dv.norm() != prev.norm()) return gs;
  gs.ok = true;
  gs.grad = [&] {
    Magnitude m;
    for (const auto& x : discrete_gradient(*planted, li.basis, v)) m = max(m, x.norm());
    return m;
  }();
  gs.mprev_ball = mprev;
  return gs;
}

}  // namespace

Calibration calibrate(const StrategyConfig& cfg, FieldRef f, std::size_t samples, std::uint64_t seed) {
  Calibration cal;
  cal.samples = samples;
  cal.seed = seed;
  std::mt19937_64 g(seed);
  const unsigned k = f->k();
  std::optional<Rational> k4, k5, k7;
  for (std::size_t s = 0; s < samples; ++s) {
    auto li = sample_minor_instance(g, cfg, f);
    SeriesMatrix a1 = sample_point(g, li.ball, 4), a2 = sample_point(g, li.ball, 4);
    auto g1 = discrete_gradient(a1, li.basis, li.v), g2 = discrete_gradient(a2, li.basis, li.v);
    Magnitude num;
    for (std::size_t x = 0; x < g1.size(); ++x) num = max(num, (g1[x] - g2[x]).norm());
    auto m1 = minors(a1, li.basis, li.v - 1).entries, m2 = minors(a2, li.basis, li.v - 1).entries;
    Magnitude den;
    for (std::size_t x = 0; x < m1.size(); ++x) den = max(den, (m1[x] - m2[x]).norm());
    if (!den.is_zero()) {
      Rational ratio = mag_value(num, k) / mag_value(den, k);
      k4 = k4 ? std::max(*k4, ratio) : ratio;
      ++cal.k4_used;
    }

    SeriesMatrix a = sample_point(g, li.ball, 4);
    Magnitude lhs = matrix_dot(a - li.ball.center, discrete_gradient(a, li.basis, li.v)).norm();
    Magnitude dv = leading_det(a, li.basis, li.v).norm();
    if (dv.is_zero()) {
      if (!lhs.is_zero()) ++cal.k7_zero_det;
    } else if (!lhs.is_zero()) {
      Rational ratio = mag_value(dv, k) / mag_value(lhs, k);
      k7 = k7 ? std::min(*k7, ratio) : ratio;
      ++cal.k7_used;
    }

    auto gs = gradient_sample(g, cfg, f);
    if (gs.ok) {
      Rational ratio = mag_value(gs.grad, k) / mag_value(gs.mprev_ball, k);
      k5 = k5 ? std::min(*k5, ratio) : ratio;
      ++cal.k5_used;
    }
  }
  cal.K4 = k4 && *k4 > 0 ? *k4 : Rational(1);
  cal.K5 = k5 && *k5 > 0 ? *k5 / k : cfg.K5;
  cal.K7 = k7 && *k7 > 0 ? std::min(*k7, Rational(1)) : cfg.K7;
  return cal;
}

InequalityCheck check_minor_variation(const StrategyConfig& cfg, const GameParams& p, FieldRef f, std::size_t samples,
                            std::uint64_t seed) {
  InequalityCheck lc;
  std::mt19937_64 g(seed);
  auto dc = derive_constants(cfg, p);
  const unsigned k = f->k();
  for (std::size_t s = 0; s < samples; ++s) {
    auto li = sample_minor_instance(g, cfg, f);
    const FormalBall& outer = li.ball;
    Rational rho0 = std::min(outer.radius * k_power(k, static_cast<long>(g() % 2)), Rational(1, 2));
    if (rho0 < outer.radius) rho0 = outer.radius;
    Rational eps = std::vector<Rational>{dc.epsilon, Rational(1, 2), Rational(1, k)}[g() % 3];
    Rational mu = dc.mu[static_cast<std::size_t>(li.v - 1)];
    FormalBall inner = sample_subball(g, outer, eps * mu * outer.radius);
    SeriesMatrix a1 = sample_point(g, inner, 4), a2 = sample_point(g, inner, 4);
    auto m1 = minors(a1, li.basis, li.v - 1).entries, m2 = minors(a2, li.basis, li.v - 1).entries;
    Magnitude diff;
    for (std::size_t x = 0; x < m1.size(); ++x) diff = max(diff, (m1[x] - m2[x]).norm());
    Rational rhs = eps * rho0 * mu * mag_value(minors_sup(outer, li.basis, li.v - 2), k);
    ++lc.checked;
    if (!(mag_value(diff, k) < rhs)) ++lc.violations;
  }
  return lc;
}

InequalityCheck check_minor_stability(const StrategyConfig& cfg, const GameParams& p, FieldRef f, std::size_t samples,
                         std::uint64_t seed) {
  InequalityCheck lc;
  std::mt19937_64 g(seed);
  auto dc = derive_constants(cfg, p);
  const unsigned k = f->k();
  while (lc.checked < samples) {
    if (lc.skipped > 50 * samples) break;
    auto li = sample_minor_instance(g, cfg, f);
    const FormalBall& outer = li.ball;
    Rational mu = dc.mu[static_cast<std::size_t>(li.v - 1)];
    Rational rho0 = outer.radius;
    // ||M_{v-1}|| is constant on the whole outer ball once it
    // exceeds the variation bound rho * M_{v-2}(ball).
    Rational mprev2 = mag_value(minors_sup(outer, li.basis, li.v - 2), k);
    Rational at_center = mag_value(minors(outer.center, li.basis, li.v - 1).norm(), k);
    if (!(at_center > k_power(k, outer.effective_exp()) * mprev2 && at_center > rho0 * mu * mprev2)) {
      ++lc.skipped;
      continue;
    }
    FormalBall inner = sample_subball(g, outer, mu * outer.radius / 2);
    SeriesMatrix a = sample_point(g, inner, 4);
    Rational lhs = mag_value(minors(a, li.basis, li.v - 1).norm(), k);
    Rational rhs = mag_value(minors_sup(inner, li.basis, li.v - 1), k) / 2;
    ++lc.checked;
    if (!(lhs > rhs)) ++lc.violations;
  }
  return lc;
}

InequalityCheck check_phi_homogeneity(const StrategyConfig& cfg, FieldRef f, std::size_t samples, std::uint64_t seed) {
  InequalityCheck lc;
  std::mt19937_64 g(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    auto li = sample_minor_instance(g, cfg, f);
    SeriesMatrix a = sample_point(g, li.ball, 3);
    SeriesVec z;
    for (std::size_t c = 0; c < cfg.m + cfg.n; ++c) z.push_back(random_finite(g, f, static_cast<long>(g() % 5) - 2, 3));
    LaurentSeries x = random_finite(g, f, static_cast<long>(g() % 7) - 3, 3);
    SeriesVec xz;
    for (const auto& e : z) xz.push_back(x * e);
    Magnitude lhs = phi(xz, a, li.basis, li.v), rhs = x.norm() * phi(z, a, li.basis, li.v);
    ++lc.checked;
    if (lhs != rhs) ++lc.violations;
  }
  return lc;
}

InequalityCheck check_gradient_bound(const StrategyConfig& cfg, FieldRef f, std::size_t samples, std::uint64_t seed) {
  InequalityCheck lc;
  std::mt19937_64 g(seed);
  const unsigned k = f->k();
  while (lc.checked < samples) {
    if (lc.skipped > 50 * samples) break;
    auto gs = gradient_sample(g, cfg, f);
    if (!gs.ok) {
      ++lc.skipped;
      continue;
    }
    ++lc.checked;
    if (!(mag_value(gs.grad, k) > cfg.K5 * mag_value(gs.mprev_ball, k))) ++lc.violations;
  }
  return lc;
}

}  // namespace fqdio
