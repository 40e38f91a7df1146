#include "doctest.h"
#include "fqdio/errors.hpp"
#include "fqdio/field.hpp"
#include "fqdio/linalg.hpp"
#include "fqdio/white_strategy.hpp"
#include "gen.hpp"

#include <set>

using namespace fqdio;

namespace {

LaurentSeries S(const char* t, const FieldRef& f) { return parse_series(t, f); }

StrategyConfig config(std::size_t m, std::size_t n, long r) {
  StrategyConfig c;
  c.m = m;
  c.n = n;
  c.r_exp = r;
  return c;
}

SeriesVec random_vec(std::mt19937_64& g, const FieldRef& f, std::size_t d) {
  SeriesVec v;
  for (std::size_t i = 0; i < d; ++i) v.push_back(testgen::series(g, f, false).chop(-5));
  return v;
}

SubspaceBasis random_basis(std::mt19937_64& g, const FieldRef& f, std::size_t count, std::size_t d) {
  for (;;) {
    std::vector<SeriesVec> vs;
    for (std::size_t i = 0; i < count; ++i) vs.push_back(random_vec(g, f, d));
    auto b = orthonormal_basis(vs);
    if (b.y.size() == count) return b;
  }
}

}  // namespace

TEST_CASE("derived exponents") {
  auto c = config(1, 1, 2);
  CHECK(c.delta_exp() == -8);
  CHECK(c.delta_star_exp() == -8);
  CHECK(c.tau() == Rational(1, 2));
  CHECK(c.certify_exp() == -21);
  auto d = config(2, 1, 1);
  CHECK(d.delta_exp() == -18);
  CHECK(d.delta_star_exp() == -9);
  CHECK(d.tau() == Rational(2, 3));
}

TEST_CASE("marker schedule") {
  auto f = Field::prime(2);
  ShrinkInPlace s;
  GameParams p(Rational(1, 2), Rational(1, 2), 2);
  SeriesMatrix c(f, 1, 1);
  auto cfg = config(1, 1, 1);
  auto t = play(s, s, {c, Rational(1)}, p, StopRule{std::nullopt, 2});
  auto mk = schedule_markers(t, cfg);
  REQUIRE(mk.k_moves.size() == 1);
  CHECK(mk.k_moves[0] == 2);
  CHECK(mk.h_moves.empty());
  auto early = play(s, s, {c, Rational(1)}, p, StopRule{std::nullopt, 1});
  CHECK(schedule_markers(early, cfg).k_moves.empty());

  std::mt19937_64 g(4);
  for (int trial = 0; trial < 1000; ++trial) {
    GameParams q(Rational(1 + static_cast<long>(g() % 3), 4), Rational(1 + static_cast<long>(g() % 3), 4), 2);
    auto cf = config(1 + g() % 2, 1 + g() % 2, 1 + static_cast<long>(g() % 2));
    SeriesMatrix z(f, cf.m, cf.n);
    auto tr = play(s, s, {z, Rational(1)}, q, StopRule{std::nullopt, 40});
    auto m = schedule_markers(tr, cf);
    std::vector<std::size_t> seq;
    for (std::size_t i = 0; i < m.k_moves.size(); ++i) {
      seq.push_back(m.k_moves[i]);
      if (i < m.h_moves.size()) seq.push_back(m.h_moves[i]);
    }
    CHECK(std::is_sorted(seq.begin(), seq.end()));
    // one Black ball can cross two thresholds unless a round shrinks by less than the gap
    const long gap = cf.r_exp * static_cast<long>(std::min(cf.m, cf.n));
    if (q.alpha * q.beta > k_power(2, -gap))
      for (std::size_t i = 1; i < seq.size(); ++i) CHECK(seq[i] > seq[i - 1]);
    for (auto x : seq) CHECK(x % 2 == 0);
  }
}

TEST_CASE("inequality checks") {
  auto f = Field::prime(2);
  auto cfg = config(1, 1, 1);
  std::mt19937_64 g(8);
  SeriesMatrix a(f, 1, 1);
  a(0, 0) = S("X^-1 + X^-4", f);
  for (int t = 0; t < 200; ++t) {
    std::vector<Poly> q{testgen::poly(g, f, 4), testgen::poly(g, f, 4)};
    CHECK_FALSE(check_inequalities(a, q, 0, DangerKind::KType, cfg));
  }
  std::vector<Poly> zero{Poly::constant(f, 0), Poly::constant(f, 0)};
  CHECK_FALSE(check_inequalities(a, zero, 9, DangerKind::KType, cfg));
  CHECK_FALSE(check_inequalities(a, zero, 9, DangerKind::HType, cfg));
  // A = P/Q and q = (Q, -P) make qA + p vanish.
  Poly qd = Poly::x(f) * Poly::x(f) + Poly::constant(f, 1), pn = Poly::x(f);
  SeriesMatrix r(f, 1, 1);
  r(0, 0) = LaurentSeries::from_ratfunc(RatFunc(pn, qd));
  std::vector<Poly> planted{qd, -pn};
  CHECK_FALSE(check_inequalities(r, planted, 5, DangerKind::KType, cfg));
  CHECK(check_inequalities(r, planted, 6, DangerKind::KType, cfg));
  CHECK(check_inequalities(r, planted, 6, DangerKind::HType, cfg));
}

TEST_CASE("danger set examples and oracle") {
  auto f = Field::prime(2);
  auto cfg = config(1, 1, 1);
  std::mt19937_64 g(15);
  for (int t = 0; t < 50; ++t) {
    SeriesMatrix c(f, 1, 1);
    c(0, 0) = testgen::series(g, f, false).chop(-12);
    CHECK(danger_set({c, Rational(1, 4)}, 0, DangerKind::KType, cfg, 8).solutions.empty());
  }
  // level 6 k-type: deg q' <= 2, |qA + p| <= 2^-12; ball radius 2^-9
  for (int t = 0; t < 12; ++t) {
    SeriesMatrix c(f, 1, 1);
    c(0, 0) = testgen::series(g, f, false).chop(-9);
    FormalBall b{c, k_power(2, -9)};
    auto rep = danger_set(b, 6, DangerKind::KType, cfg, 8);
    CHECK(rep.max_degree == 2);
    std::set<std::string> found;
    for (const auto& s : rep.solutions) found.insert(s[0].str() + "|" + s[1].str());
    // brute force over A = C + digits at exponents -9..-16 and q, p small
    std::set<std::string> brute;
    for (unsigned bits = 0; bits < 256; ++bits) {
      std::vector<Elem> d(8);
      for (int i = 0; i < 8; ++i) d[i] = (bits >> i) & 1;
      SeriesMatrix a = c;
      a(0, 0) = a(0, 0) + LaurentSeries::from_digits(f, -9, d);
      for (unsigned qb = 1; qb < 8; ++qb) {
        Poly q(f, {Elem(qb & 1), Elem(qb >> 1 & 1), Elem(qb >> 2 & 1)});
        Poly p = -(LaurentSeries::from_poly(q) * a(0, 0)).polynomial_part();
        if (check_inequalities(a, {q, p}, 6, DangerKind::KType, cfg)) brute.insert(q.str() + "|" + p.str());
      }
    }
    CHECK(found == brute);
    auto smaller = danger_set({c, k_power(2, -11)}, 6, DangerKind::KType, cfg, 8);
    for (const auto& s : smaller.solutions) CHECK(found.count(s[0].str() + "|" + s[1].str()) == 1);
  }
}

TEST_CASE("danger rank bounds on marker-sized balls") {
  auto f = Field::prime(2);
  std::mt19937_64 g(21);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    auto cfg = config(t % 3 == 1 ? 2 : 1, t % 3 == 2 ? 2 : 1, 2);
    SeriesMatrix c(f, cfg.m, cfg.n);
    for (std::size_t i = 0; i < cfg.m; ++i)
      for (std::size_t j = 0; j < cfg.n; ++j) {
        Poly den(f, {1, Elem(g() % 2), 1});
        c(i, j) = LaurentSeries::from_ratfunc(RatFunc(testgen::poly(g, f, 1), den)).chop(-40);
      }
    FormalBall b{c, k_power(2, k_marker_exp(cfg, 5) - 1)};
    if (!danger_set(b, 5, DangerKind::KType, cfg, 5).solutions.empty()) continue;
    auto rep = danger_set(b, 5, DangerKind::HType, cfg, 5);
    CHECK(rep.rank <= cfg.m);
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("orthonormal bases") {
  std::mt19937_64 g(3);
  for (unsigned k : {2u, 3u}) {
    auto f = Field::prime(k);
    for (int t = 0; t < 40; ++t) {
      std::size_t d = 2 + g() % 3, cnt = 1 + g() % d;
      std::vector<SeriesVec> vs;
      for (std::size_t i = 0; i < cnt; ++i) vs.push_back(random_vec(g, f, d));
      auto b = orthonormal_basis(vs);
      CHECK(b.y.size() == rank(vs));
      CHECK(is_orthonormal(b, g, 30));
      auto both = vs;
      both.insert(both.end(), b.y.begin(), b.y.end());
      CHECK(rank(both) == b.y.size());
    }
  }
}

TEST_CASE("minor vectors") {
  auto f = Field::prime(2);
  std::mt19937_64 g(6);
  SeriesMatrix a(f, 1, 1);
  a(0, 0) = S("X + X^-2", f);
  auto b1 = random_basis(g, f, 1, 2);
  CHECK(minors(a, b1, 0).entries.size() == 1);
  CHECK(minors(a, b1, 0).entries[0] == LaurentSeries::one(f));
  auto m1 = minors(a, b1, 1);
  REQUIRE(m1.entries.size() == 1);
  CHECK(m1.entries[0] == b1.y[0][0] * a(0, 0) + b1.y[0][1]);
  SeriesMatrix a3(f, 3, 1);
  for (int i = 0; i < 3; ++i) a3(i, 0) = testgen::series(g, f, false).chop(-4);
  auto b3 = random_basis(g, f, 3, 4);
  CHECK(minors(a3, b3, 2).entries.size() == 9);
  CHECK(minors(a3, b3, 3).entries.size() == 1);
}

TEST_CASE("discrete gradient") {
  auto f = Field::prime(2);
  std::mt19937_64 g(12);
  auto b = random_basis(g, f, 1, 2);
  for (int t = 0; t < 20; ++t) {
    SeriesMatrix a(f, 1, 1);
    a(0, 0) = testgen::series(g, f, false).chop(-5);
    auto grad = discrete_gradient(a, b, 1);
    REQUIRE(grad.size() == 1);
    CHECK(grad[0] == b.y[0][0]);
  }
  // m = 2, n = 1 at A = 0: cofactor expansion by hand
  for (int t = 0; t < 20; ++t) {
    auto b2 = random_basis(g, f, 2, 3);
    SeriesMatrix z(f, 2, 1);
    auto grad = discrete_gradient(z, b2, 2);
    const auto& y1 = b2.y[0];
    const auto& y2 = b2.y[1];
    CHECK(grad[0] == y1[0] * y2[2] - y2[0] * y1[2]);
    CHECK(grad[1] == y1[1] * y2[0] - y2[1] * y1[0]);
  }
}

TEST_CASE("minor perturbation bound and exact sup") {
  std::mt19937_64 g(31);
  for (unsigned k : {2u, 3u}) {
    auto f = Field::prime(k);
    for (int t = 0; t < 40; ++t) {
      auto cfg = config(1 + g() % 2, 1 + g() % 2, 1);
      auto li = sample_minor_instance(g, cfg, f);
      long v = li.v;
      Magnitude sup_prev = minors_sup(li.ball, li.basis, v - 2);
      SeriesMatrix a = sample_point(g, li.ball, 3);
      std::size_t i = g() % cfg.m, j = g() % cfg.n;
      LaurentSeries x = LaurentSeries::from_digits(f, li.ball.effective_exp(), {Elem(1 + g() % (k - 1)), Elem(g() % k)});
      SeriesMatrix b = a;
      b(i, j) = b(i, j) + x;
      auto ma = minors(a, li.basis, v - 1).entries, mb = minors(b, li.basis, v - 1).entries;
      Magnitude diff;
      for (std::size_t e = 0; e < ma.size(); ++e) diff = max(diff, (ma[e] - mb[e]).norm());
      CHECK(diff <= x.norm() * sup_prev);
      // the sup is attained on corners C + X^f * (0/1 pattern)
      Magnitude sup = minors_sup(li.ball, li.basis, v), corner;
      const std::size_t vars = cfg.m * cfg.n;
      for (std::size_t mask = 0; mask < (std::size_t(1) << vars); ++mask) {
        SeriesMatrix c = li.ball.center;
        for (std::size_t e = 0; e < vars; ++e)
          if (mask >> e & 1)
            c(e / cfg.n, e % cfg.n) = c(e / cfg.n, e % cfg.n) + LaurentSeries::monomial(f, 1, li.ball.effective_exp());
        corner = max(corner, minors(c, li.basis, v).norm());
      }
      CHECK(corner == sup);
      for (int s = 0; s < 5; ++s) CHECK(minors(sample_point(g, li.ball, 4), li.basis, v).norm() <= sup);
    }
  }
}

TEST_CASE("phi") {
  auto f = Field::prime(3);
  std::mt19937_64 g(2);
  for (int t = 0; t < 40; ++t) {
    auto b = random_basis(g, f, 2, 3);
    SeriesMatrix a(f, 2, 1);
    for (int i = 0; i < 2; ++i) a(i, 0) = testgen::series(g, f, false).chop(-4);
    SeriesVec zero(3, LaurentSeries::zero(f));
    CHECK(phi(zero, a, b, 2).is_zero());
    auto z = random_vec(g, f, 3);
    SeriesVec xz;
    for (const auto& e : z) xz.push_back(LaurentSeries::monomial(f, 1, 1) * e);
    CHECK(phi(xz, a, b, 2) == Magnitude::power(1) * phi(z, a, b, 2));
    CHECK(phi(z, a, b, 1) == dot(b.y[0], z).norm());
  }
}

TEST_CASE("anchor rounds and derived constants") {
  for (auto [a, b] : std::vector<std::pair<Rational, Rational>>{
           {Rational(1, 4), Rational(1, 2)}, {Rational(1, 5), Rational(9, 10)}, {Rational(1, 10), Rational(1, 3)}}) {
    GameParams p(a, b, 2);
    long t0 = anchor_rounds(p);
    Rational ab = a * b, pw = 1;
    for (long i = 0; i < t0; ++i) pw *= ab;
    CHECK(ab * p.gamma() / 2 < pw);
    CHECK(pw <= p.gamma() / 2);
    auto d = derive_constants(config(2, 1, 2), p);
    REQUIRE(d.mu.size() == 3);
    for (const auto& mu : d.mu) CHECK(mu > 0);
  }
  CHECK_THROWS(anchor_rounds(GameParams(Rational(1, 2), Rational(1, 2), 2)));
}

TEST_CASE("white moves") {
  auto f = Field::prime(2);
  GameParams p(Rational(1, 4), Rational(1, 2), 2);
  // literal mode with nothing to avoid shrinks in place
  {
    auto cfg = config(1, 1, 2);
    cfg.mode = WhiteMode::Literal;
    WhiteStrategy w(cfg);
    GameTranscript t;
    t.params = p;
    t.field = f;
    SeriesMatrix c(f, 1, 1);
    c(0, 0) = S("X^-1", f);
    t.moves.push_back({Player::Black, {c, Rational(1)}, true});
    auto mv = w.propose(t);
    CHECK(mv.center == c);
    CHECK(mv.radius == Rational(1, 4));
    CHECK(w.fallbacks() == 1);
  }
  // avoidance with no preference among candidates keeps the centre
  {
    auto cfg = config(1, 1, 2);
    cfg.avoid_height_exp = 0;
    WhiteStrategy w(cfg);
    GameTranscript t;
    t.params = p;
    t.field = f;
    SeriesMatrix c(f, 1, 1);
    c(0, 0) = S("X^-1", f);
    t.moves.push_back({Player::Black, {c, k_power(2, -10)}, true});
    auto mv = w.propose(t);
    CHECK(mv.center == c);
  }
  // some grid centre moves the anchor product by at least (1 - alpha) rho ||grad|| / 2
  std::mt19937_64 g(77);
  for (int trial = 0; trial < 100; ++trial) {
    GameTranscript t;
    t.params = p;
    t.field = f;
    t.m = 1 + g() % 2;
    t.n = 1 + g() % 2;
    SeriesMatrix c(f, t.m, t.n);
    for (auto i = 0u; i < t.m; ++i)
      for (auto j = 0u; j < t.n; ++j) c(i, j) = testgen::series(g, f, false).chop(-6);
    Rational rho = k_power(2, -static_cast<long>(g() % 5));
    t.moves.push_back({Player::Black, {c, rho}, true});
    SeriesVec grad = random_vec(g, f, t.m * t.n);
    Magnitude gn;
    for (const auto& x : grad) gn = max(gn, x.norm());
    if (gn.is_zero()) continue;
    MoveGrid mg = move_grid(t);
    std::size_t len = mg.entries * static_cast<std::size_t>(mg.digits_per_entry());
    bool found = false;
    for (std::size_t bits = 0; bits < (std::size_t(1) << len) && !found; ++bits) {
      std::vector<Elem> off(len);
      for (std::size_t i = 0; i < len; ++i) off[i] = bits >> i & 1;
      SeriesMatrix d = mg.center(off);
      Magnitude s = matrix_dot(c - d, grad).norm();
      if (!s.is_zero() && k_power(2, s.exp) >= Rational(1, 2) * (1 - p.alpha) * rho * k_power(2, gn.exp)) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("black cannot move the anchor product far") {
  auto f = Field::prime(2);
  GameParams p(Rational(1, 4), Rational(1, 2), 2);
  std::mt19937_64 g(9);
  for (int s = 0; s < 20; ++s) {
    WhiteStrategy w(config(1, 2, 2));
    BlackRandom b(g());
    auto t = play(w, b, {SeriesMatrix(f, 1, 2), Rational(1)}, p, StopRule{std::nullopt, 20});
    REQUIRE_FALSE(t.forfeit);
    SeriesVec grad = random_vec(g, f, 2);
    Magnitude gn;
    for (const auto& x : grad) gn = max(gn, x.norm());
    for (std::size_t i = 1; 2 * i < t.moves.size(); ++i) {
      const auto& wi = t.white_ball(i);
      const auto& next = t.black_ball(i + 1);
      Magnitude lhs = matrix_dot(next.center - wi.center, grad).norm();
      Rational bound = (1 - p.beta) * wi.radius * (gn.is_zero() ? Rational(0) : k_power(2, gn.exp));
      CHECK((lhs.is_zero() || k_power(2, lhs.exp) <= bound));
    }
  }
}

TEST_CASE("certification") {
  auto f = Field::prime(2);
  auto cfg = config(1, 1, 2);
  SeriesMatrix a(f, 1, 1);
  a(0, 0) = cf_eval({Poly::constant(f, 0), Poly::x(f), Poly::x(f), Poly::x(f), Poly::x(f), Poly::x(f), Poly::x(f)});
  auto cert = certify_bad(a, cfg, 2);
  CHECK(cert.K_exp == -21);
  CHECK(cert.min_margin_exp == -1 + 21);
  SeriesMatrix r(f, 1, 1);
  r(0, 0) = S("1/(X^3 + X + 1)", f);
  CHECK_NOTHROW(certify_bad(r, cfg, 2));
  CHECK_THROWS_AS(certify_bad(r, cfg, 3), CounterexampleFound);

  GameParams p(Rational(1, 4), Rational(1, 2), 2);
  // a limit point decided to be 0 fails for q = 1 whatever the unknown digits are
  ShrinkInPlace s;
  auto zero = play(s, s, {SeriesMatrix(f, 1, 1), Rational(1)}, p, StopRule{std::nullopt, 30});
  auto zl = limit_point(zero, 40);
  CHECK_THROWS_AS(certify_bad(zl.center, cfg, 2, zl.known_below()), CounterexampleFound);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    WhiteStrategy w(cfg);
    BlackRandom b(seed);
    auto t = play(w, b, {SeriesMatrix(f, 1, 1), Rational(1)}, p, StopRule{std::nullopt, 48});
    auto lp = limit_point(t, 60);
    auto c = certify_bad(lp.center, cfg, 4, lp.known_below());
    CHECK(c.min_margin_exp > 0);
  }
}

TEST_CASE("minor inequalities hold with calibrated constants") {
  auto f = Field::prime(2);
  GameParams p(Rational(1, 4), Rational(1, 2), 2);
  for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {2, 1}, {1, 2}}) {
    auto cfg = config(m, n, 2);
    auto cal = calibrate(cfg, f, 1000, 5);
    cfg.K4 = cal.K4;
    cfg.K5 = cal.K5;
    cfg.K7 = cal.K7;
    CHECK(check_minor_variation(cfg, p, f, 100, 1).violations == 0);
    auto fin = check_minor_stability(cfg, p, f, 100, 2);
    CHECK(fin.checked == 100);
    CHECK(fin.violations == 0);
    CHECK(check_phi_homogeneity(cfg, f, 100, 3).violations == 0);
    CHECK(check_gradient_bound(cfg, f, 30, 4).violations == 0);
  }
}
