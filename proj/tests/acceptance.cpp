// Acceptance run: one line per criterion, exit status 1 if any fails.
#include "fqdio/approx.hpp"
#include "fqdio/dimension.hpp"
#include "fqdio/errors.hpp"
#include "fqdio/game.hpp"
#include "fqdio/geom.hpp"
#include "fqdio/linalg.hpp"
#include "fqdio/white_strategy.hpp"
#include "gen.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

using namespace fqdio;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

FieldRef field_of_size(unsigned k) { return k == 4 ? Field::extension(2, 2) : Field::prime(k); }

SeriesMatrix single(const LaurentSeries& x) {
  SeriesMatrix a(x.field(), 1, 1);
  a(0, 0) = x;
  return a;
}

// largest integer strictly below x
long below(const Rational& x) {
  BigInt q = numerator(x) / denominator(x);
  if (x < 0 && Rational(q) != x) q -= 1;
  long f = static_cast<long>(q);
  return Rational(f) == x ? f - 1 : f;
}

Outcome ac1() {
  std::mt19937_64 g(1);
  std::size_t bad = 0, pairs = 0;
  for (unsigned k : {2u, 3u, 4u}) {
    auto f = field_of_size(k);
    for (int i = 0; i < 10000; ++i) {
      auto x = testgen::series(g, f), y = testgen::series(g, f);
      ++pairs;
      try {
        auto s = (x + y).norm(), nx = x.norm(), ny = y.norm();
        if (s > max(nx, ny)) ++bad;
        if (nx != ny && s != max(nx, ny)) ++bad;
      } catch (const PrecisionExhausted&) {
        // x + y cancelled every known digit; only possible when the norms agree
        if (x.norm() != y.norm()) ++bad;
      }
      if ((x * y).norm() != x.norm() * y.norm()) ++bad;
    }
  }
  return {bad == 0, std::to_string(pairs) + " pairs, " + std::to_string(bad) + " violations"};
}

SeriesMatrix random_invertible(std::mt19937_64& g, const FieldRef& f, std::size_t d, int deg) {
  for (;;) {
    SeriesMatrix a(f, d, d);
    for (auto i = 0u; i < d; ++i)
      for (auto j = 0u; j < d; ++j) a(i, j) = LaurentSeries::from_poly(testgen::poly(g, f, deg));
    if (!det(a).is_zero()) return a;
  }
}

Outcome ac2() {
  std::mt19937_64 g(2);
  int bad = 0, dims4 = 0;
  for (int it = 0; it < 200; ++it) {
    auto f = Field::prime(it % 2 ? 3 : 2);
    std::size_t d = 1 + it % 4;
    Parallelepiped p(random_invertible(g, f, d, static_cast<int>(g() % 3)), std::vector<long>(d, 0));
    auto mins = successive_minima(p);
    long sum = p.measure_exp();
    for (auto e : mins.lambda_exps) sum += e;
    bool witnessed = rank(mins.witnesses) == d;
    for (std::size_t j = 0; j < d; ++j)
      witnessed = witnessed && p.distance(mins.witnesses[j]) == Magnitude::power(mins.lambda_exps[j]);
    if (sum != 0 || !witnessed) ++bad;
    if (d == 4) ++dims4;
  }
  return {bad == 0, "200 matrices (" + std::to_string(dims4) + " of dimension 4), " + std::to_string(bad) +
                        " with lambda_1...lambda_d mu != 1 or bad witnesses"};
}

Outcome ac3() {
  std::mt19937_64 g(3);
  auto f = Field::prime(2);
  int bad = 0;
  for (int it = 0; it < 100; ++it) {
    std::size_t m = 1 + g() % 2, n = 1 + g() % 2;
    SeriesMatrix c(f, m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) c(i, j) = testgen::series(g, f, false).chop(-4);
    auto rep = check_duality(structured_body(c, 1 + static_cast<long>(g() % 2), static_cast<long>(g() % 2)), m, n);
    if (!rep.holds) ++bad;
  }
  return {bad == 0, "100 structured instances, " + std::to_string(bad) + " failures"};
}

Outcome ac4() {
  auto f = Field::prime(2);
  std::size_t count = 0, bad = 0;
  for (unsigned dq = 1; dq <= 6; ++dq)
    for (unsigned qb = 0; qb < (1u << dq); ++qb)
      for (unsigned pb = 1; pb < (1u << dq); ++pb) {
        std::vector<Elem> qc(dq + 1), pc(dq);
        for (unsigned i = 0; i < dq; ++i) qc[i] = (qb >> i) & 1;
        qc[dq] = 1;
        for (unsigned i = 0; i < dq; ++i) pc[i] = (pb >> i) & 1;
        Poly q(f, qc), p(f, pc);
        if (gcd(p, q).degree() > 0) continue;
        ++count;
        auto x = LaurentSeries::from_ratfunc(RatFunc(p, q));
        auto cf = cf_expand(x, 40);
        int maxdeg = 0;
        for (std::size_t i = 1; i < cf.a.size(); ++i) maxdeg = std::max(maxdeg, cf.a[i].degree());
        // heights strictly below ||q_J||; at ||q_J|| itself q_J annihilates x
        if (badness_constant(single(x), q.degree() - 1).constant != Magnitude::power(-maxdeg)) ++bad;
        if (!badness_constant(single(x), q.degree()).constant.is_zero()) ++bad;
      }
  return {bad == 0, std::to_string(count) + " reduced fractions, " + std::to_string(bad) + " mismatches"};
}

Outcome ac5() {
  std::mt19937_64 g(5);
  std::size_t checks = 0, bad = 0, bounded = 0;
  for (unsigned k : {2u, 3u}) {
    auto f = Field::prime(k);
    for (int i = 0; i < 1000; ++i) {
      std::vector<Elem> d(20);
      d[0] = testgen::nonzero(g, *f);
      for (std::size_t j = 1; j < d.size(); ++j) d[j] = testgen::elem(g, *f);
      auto x = single(LaurentSeries::truncated(f, -1 - static_cast<long>(g() % 2), d));
      long kb = x(0, 0).known_below();
      for (long t = 1; t <= 8; ++t) {
        ++checks;
        auto w = dirichlet_witness(x, t);
        if (w.height > Magnitude::power(t)) ++bad;
        try {
          if (evaluate_witness(x, w.q).dist > Magnitude::power(-(t + kDirichletC0))) ++bad;
        } catch (const PrecisionExhausted&) {
          // every known digit of qx vanishes: <qx> <= k^(kb + deg q - 1)
          ++bounded;
          if (kb + w.height.exp - 1 > -(t + kDirichletC0)) ++bad;
        }
      }
    }
  }
  return {bad == 0, std::to_string(checks) + " (x, t) pairs with c0 = " + std::to_string(kDirichletC0) + ", " +
                        std::to_string(bad) + " failures (" + std::to_string(bounded) + " decided by precision)"};
}

Outcome ac6() {
  std::mt19937_64 g(6);
  std::size_t bad = 0, prefix_checks = 0;
  const Rational ratios[] = {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(3, 4)};
  for (int it = 0; it < 1000; ++it) {
    unsigned k = 2 + it % 3;
    auto f = field_of_size(k);
    std::size_t m = 1 + g() % 2, n = 1 + g() % 2;
    GameParams p(ratios[g() % 5], ratios[g() % 5], k);
    SeriesMatrix c(f, m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) c(i, j) = testgen::series(g, f, false).chop(-3);
    BlackRandom w(g()), b(g());
    auto t = play(w, b, {c, Rational(1)}, p, StopRule{std::nullopt, 20});
    if (t.forfeit || replay_check(t) != -1) ++bad;
    for (std::size_t i = 1; i < t.moves.size(); ++i) {
      const auto& prev = t.moves[i - 1].ball;
      const auto& next = t.moves[i].ball;
      if (!formal_contains(next, prev)) ++bad;
      if (i >= 2 && next.radius != p.alpha * p.beta * t.moves[i - 2].ball.radius) ++bad;
    }
    // limit points of every deep enough prefix agree with the full play
    long full = -t.last().effective_exp() - 1;
    for (std::size_t len = 2; len < t.moves.size(); ++len) {
      GameTranscript pre = t;
      pre.moves.resize(len);
      long prec = -pre.last().effective_exp() - 1;
      if (prec < 1 || prec > full) continue;
      ++prefix_checks;
      if (!(limit_point(pre, prec).center == limit_point(t, prec).center)) ++bad;
    }
  }
  return {bad == 0, "1000 games, " + std::to_string(prefix_checks) + " prefix limits, " + std::to_string(bad) +
                        " violations"};
}

Outcome ac7() {
  auto f = Field::prime(2);
  GameParams p(Rational(1, 4), Rational(1, 2), 2);
  StrategyConfig cfg;
  cfg.m = cfg.n = 1;
  cfg.r_exp = 2;
  int ok = 0;
  long worst = LONG_MAX;
  std::string failures;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    WhiteStrategy white(cfg);
    BlackRandom black(seed);
    auto t = play(white, black, {SeriesMatrix(f, 1, 1), Rational(1)}, p, StopRule{std::nullopt, 24});
    try {
      auto lp = limit_point(t, -t.last().effective_exp() - 1);
      auto cert = certify_bad(lp.center, cfg, 4, lp.known_below());
      ++ok;
      worst = std::min(worst, cert.min_margin_exp);
    } catch (const Error& e) {
      failures += " seed " + std::to_string(seed) + ": " + e.what() + ";";
    }
  }
  return {ok == 100, std::to_string(ok) + "/100 certified at cap k^4 with K = k^" +
                         std::to_string(cfg.certify_exp()) + ", min margin k^" + std::to_string(worst) + failures};
}

Outcome ac8() {
  auto f = Field::prime(2);
  GameParams p(Rational(1, 4), Rational(1, 2), 2);
  std::ostringstream os;
  bool pass = true;
  for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {2, 1}, {1, 2}}) {
    StrategyConfig cfg;
    cfg.m = m;
    cfg.n = n;
    cfg.r_exp = 2;
    auto cal = calibrate(cfg, f, 1000, 8);
    cfg.K4 = cal.K4;
    cfg.K5 = cal.K5;
    cfg.K7 = cal.K7;
    auto w2 = check_minor_variation(cfg, p, f, 1000, 81);
    auto f1 = check_minor_stability(cfg, p, f, 1000, 82);
    auto ph = check_phi_homogeneity(cfg, f, 1000, 83);
    std::size_t v = w2.violations + f1.violations + ph.violations;
    if (v || w2.checked < 1000 || f1.checked < 1000 || ph.checked < 1000) pass = false;
    os << "(" << m << "," << n << ") K4=" << to_string(cal.K4) << " K5=" << to_string(cal.K5)
       << " K7=" << to_string(cal.K7) << " checked " << w2.checked << "/" << f1.checked << "/" << ph.checked
       << " violations " << v << "; ";
  }
  return {pass, os.str()};
}

Outcome ac9() {
  auto f = Field::prime(2);
  std::mt19937_64 g(9);
  std::size_t balls = 0, bad = 0, nonempty = 0, level0 = 0, resampled = 0;
  const std::vector<std::pair<std::size_t, std::size_t>> shapes{{1, 1}, {2, 1}, {1, 2}};
  std::size_t max_rank = 0;
  for (std::size_t slot = 0; balls < 500; ++slot) {
    auto [m, n] = shapes[slot % 3];
    DangerKind kind = slot / 3 % 2 ? DangerKind::KType : DangerKind::HType;
    StrategyConfig cfg;
    cfg.m = m;
    cfg.n = n;
    cfg.r_exp = 2;
    // first level whose height window admits degree >= 2
    long lvl = 0;
    while (below(inequality_window(kind, lvl, cfg).height) < 2) ++lvl;
    long thr = kind == DangerKind::HType ? k_marker_exp(cfg, lvl) : h_marker_exp(cfg, lvl - 1);
    DangerKind other = kind == DangerKind::HType ? DangerKind::KType : DangerKind::HType;
    long olvl = kind == DangerKind::HType ? lvl : lvl - 1;
    long fe = thr - 1 - static_cast<long>(g() % 3);
    SeriesMatrix c(f, m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (g() % 2) {
          std::vector<Elem> qc(2 + g() % 3), pc(3);
          for (auto& e : qc) e = g() % 2;
          qc.back() = 1;
          for (auto& e : pc) e = g() % 2;
          c(i, j) = LaurentSeries::from_ratfunc(RatFunc(Poly(f, pc), Poly(f, qc))).chop(fe - 3);
        } else {
          std::vector<Elem> d(static_cast<std::size_t>(-fe + 4));
          for (auto& e : d) e = g() % 2;
          c(i, j) = LaurentSeries::from_digits(f, 0, d);
        }
      }
    FormalBall b{c, k_power(2, fe)};
    if (!danger_set(b, 0, DangerKind::KType, cfg, 6).solutions.empty()) ++level0;
    // the rank bound presumes the other system has no solution on this ball
    if (!danger_set(b, olvl, other, cfg, 6).solutions.empty()) {
      ++resampled;
      continue;
    }
    auto rep = danger_set(b, lvl, kind, cfg, 6);
    ++balls;
    if (!rep.solutions.empty()) ++nonempty;
    max_rank = std::max(max_rank, rep.rank);
    if (rep.rank > (kind == DangerKind::HType ? m : n)) ++bad;
  }
  return {bad == 0 && level0 == 0,
          std::to_string(balls) + " balls (" + std::to_string(nonempty) + " with solutions, max rank " +
              std::to_string(max_rank) + ", " + std::to_string(resampled) + " resampled), rank violations " +
              std::to_string(bad) + ", nonempty level-0 k-type sets " + std::to_string(level0)};
}

std::string ball_key(const FormalBall& b) {
  auto c = canonicalize(b);
  std::string s = to_string(c.radius);
  for (std::size_t j = 0; j < c.center.cols(); ++j) s += "|" + c.center(0, j).str();
  return s;
}

Outcome ac10() {
  std::size_t bad = 0;
  Rational prev = -1;
  for (long j = 2; j <= 12; ++j) {
    auto b = dim_lower_bound(Rational(1, 4), k_power(2, -j), 1, 1, 2);
    if (!b.exact || *b.exact != Rational(j - 1, j + 2) || *b.exact <= prev || *b.exact >= 1) ++bad;
    if (b.exact) prev = *b.exact;
  }
  std::size_t tables = 0;
  for (unsigned k : {2u, 3u})
    for (std::size_t mn = 1; mn <= 2; ++mn)
      for (long j = 1; j <= 5; ++j) {
        long digits = j + 1;
        std::uint64_t total = 1;
        for (long i = 0; i < digits * static_cast<long>(mn); ++i) total *= k;
        if (total > (1u << 16)) continue;
        auto f = Field::prime(k);
        Rational beta = k_power(k, -j);
        std::set<std::string> cosets;
        for (std::uint64_t idx = 0; idx < total; ++idx) {
          SeriesMatrix c(f, 1, mn);
          std::uint64_t x = idx;
          for (std::size_t e = 0; e < mn; ++e) {
            std::vector<Elem> d(static_cast<std::size_t>(digits));
            for (auto& v : d) {
              v = static_cast<Elem>(x % k);
              x /= k;
            }
            c(0, e) = LaurentSeries::from_digits(f, -1, d);
          }
          cosets.insert(ball_key({c, beta}));
        }
        ++tables;
        auto pc = packing_count(beta, 1, mn, k);
        if (BigInt(cosets.size()) != pc.max_count) ++bad;
        if (BigInt(packing_centers(beta, 1, mn, f).size()) != pc.max_count) ++bad;
      }
  return {bad == 0, "j = 2..12 bounds and " + std::to_string(tables) + " packing tables, " + std::to_string(bad) +
                        " mismatches"};
}

Outcome ac11() {
  auto f = Field::prime(2);
  std::size_t bad = 0;
  std::vector<Magnitude> Ks{Magnitude::zero_value()};
  for (long e = -24; e <= 2; ++e) Ks.push_back(Magnitude::power(e));
  std::map<std::pair<long, std::size_t>, BigInt> at;
  for (long cap = 2; cap <= 4; ++cap)
    for (std::size_t i = 0; i < Ks.size(); ++i) at[{cap, i}] = box_count_bad(Ks[i], cap, 10, 1, 1, f, 4).back().cells_surviving;
  for (long cap = 2; cap <= 4; ++cap) {
    if (at[{cap, 0}] != 1024) ++bad;
    for (std::size_t i = 1; i < Ks.size(); ++i) {
      if (at[{cap, i}] > at[{cap, i - 1}]) ++bad;
      if (cap > 2 && at[{cap, i}] > at[{cap - 1, i}]) ++bad;
      if (!(Ks[i] < Magnitude::power(0)) && at[{cap, i}] != 0) ++bad;
    }
  }
  std::ostringstream os;
  os << "caps k^2..k^4, " << Ks.size() << " thresholds, surviving at K = k^-6: " << at[{2, 19}] << "/"
     << at[{3, 19}] << "/" << at[{4, 19}] << ", " << bad << " violations";
  return {bad == 0, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {"AC-1", 5, ac1},  {"AC-2", 60, ac2},  {"AC-3", 60, ac3},  {"AC-4", 120, ac4},
      {"AC-5", 30, ac5}, {"AC-6", 10, ac6},  {"AC-7", 120, ac7}, {"AC-8", 60, ac8},
      {"AC-9", 60, ac9}, {"AC-10", 5, ac10}, {"AC-11", 120, ac11},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = s <= c.limit_s;
    bool ok = o.pass && in_time;
    if (!ok) ++failed;
    std::printf("%-5s %s  %.2fs (limit %.0fs)%s  %s\n", c.id, ok ? "PASS" : "FAIL", s, c.limit_s,
                in_time ? "" : " over time", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed ? 1 : 0;
}
