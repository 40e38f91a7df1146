#include "doctest.h"
#include "fqdio/errors.hpp"
#include "fqdio/field.hpp"
#include "fqdio/game.hpp"
#include "gen.hpp"

#include <set>
#include <sstream>

using namespace fqdio;

namespace {

SeriesMatrix M(const char* t, const FieldRef& f) { return parse_matrix(t, f); }

FormalBall ball(const char* c, const char* r, const FieldRef& f) { return {M(c, f), parse_rational(r)}; }

/// Random point of psi(b): centre plus arbitrary digits at exponents <= f.
SeriesMatrix sample_in(std::mt19937_64& g, const FormalBall& b, int depth) {
  SeriesMatrix x = b.center;
  long f = b.effective_exp();
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      std::vector<Elem> d(static_cast<std::size_t>(depth));
      for (auto& e : d) e = testgen::elem(g, *x.field());
      x(i, j) = x(i, j) + LaurentSeries::from_digits(x.field(), f, d);
    }
  return x;
}

class FixedRadiusWhite : public Strategy {
 public:
  FormalBall propose(const GameTranscript& t) override { return {t.last().center, t.last().radius}; }
  std::string name() const override { return "bad"; }
};

/// Follows one random stream for the first `switch_at` moves, then another.
class SwitchingRandom : public Strategy {
 public:
  SwitchingRandom(std::uint64_t a, std::uint64_t b, std::size_t switch_at) : a_(a), b_(b), at_(switch_at) {}
  FormalBall propose(const GameTranscript& t) override {
    return t.moves.size() <= at_ ? a_.propose(t) : b_.propose(t);
  }
  std::string name() const override { return "switching"; }

 private:
  BlackRandom a_, b_;
  std::size_t at_;
};

}  // namespace

TEST_CASE("formal containment examples") {
  auto f = Field::prime(2);
  CHECK(formal_contains(ball("X + 1", "1/2", f), ball("X + 1", "1", f)));
  CHECK_FALSE(formal_contains(ball("X^-1", "1", f), ball("0", "1", f)));
  CHECK(formal_contains(ball("X^-1", "1/2", f), ball("0", "1", f)));
  CHECK_FALSE(formal_contains(ball("X^-1", "3/4", f), ball("0", "1", f)));
}

TEST_CASE("canonical form examples") {
  auto f = Field::prime(2);
  auto c = canonicalize(ball("X + X^-1 + X^-3", "7/10", f));
  CHECK(c.radius == Rational(1, 2));
  CHECK(c.center == M("X", f));
  auto e = canonicalize(ball("1 + X^-2", "1/8", f));
  CHECK(e.radius == Rational(1, 8));
  CHECK(e.center == M("1 + X^-2", f));
  CHECK(canonicalize(c) == canonicalize(canonicalize(c)));
}

TEST_CASE("balls with the same image have the same canonical form") {
  auto f = Field::prime(2);
  std::vector<Rational> radii{1, Rational(3, 4), Rational(1, 2), Rational(1, 3), Rational(1, 4)};
  std::vector<FormalBall> balls;
  for (unsigned bits = 0; bits < 64; ++bits) {
    std::vector<Elem> d(6);
    for (int i = 0; i < 6; ++i) d[i] = (bits >> i) & 1;
    SeriesMatrix c(f, 1, 1);
    c(0, 0) = LaurentSeries::from_digits(f, 1, d);
    for (const auto& r : radii) balls.push_back({c, r});
  }
  // psi-image as the set of grid points (exponents 1..-5) inside the ball
  std::vector<SeriesMatrix> grid;
  for (unsigned bits = 0; bits < 128; ++bits) {
    std::vector<Elem> d(7);
    for (int i = 0; i < 7; ++i) d[i] = (bits >> i) & 1;
    SeriesMatrix x(f, 1, 1);
    x(0, 0) = LaurentSeries::from_digits(f, 1, d);
    grid.push_back(x);
  }
  std::vector<std::vector<bool>> image;
  for (const auto& b : balls) {
    std::vector<bool> in;
    for (const auto& x : grid) in.push_back(ball_contains_point(b, x));
    image.push_back(in);
  }
  for (std::size_t i = 0; i < balls.size(); i += 3)
    for (std::size_t j = 0; j < balls.size(); j += 5)
      CHECK((image[i] == image[j]) == (canonicalize(balls[i]) == canonicalize(balls[j])));
}

TEST_CASE("move validation examples") {
  auto f = Field::prime(2);
  auto prev = ball("X", "1", f);
  CHECK(validate_move(prev, ball("X", "1/4", f), Rational(1, 4)));
  CHECK_FALSE(validate_move(prev, ball("X + 1", "1/4", f), Rational(1, 4)));
  CHECK(validate_move(prev, ball("X + X^-1", "1/4", f), Rational(1, 4)));
  CHECK_FALSE(validate_move(prev, ball("X", "1/8", f), Rational(1, 4)));
}

TEST_CASE("shrink in place keeps the centre") {
  auto f = Field::prime(3);
  ShrinkInPlace s;
  GameParams p(Rational(1, 3), Rational(1, 2), 3);
  auto b1 = ball("X + 2*X^-1", "1", f);
  auto t = play(s, s, b1, p, StopRule{std::nullopt, 12});
  REQUIRE(t.moves.size() == 13);
  CHECK_FALSE(t.forfeit);
  Rational r = 1;
  for (std::size_t i = 1; i <= 6; ++i, r /= 6) {
    CHECK(t.black_ball(i).center == b1.center);
    CHECK(t.black_ball(i).radius == r);
  }
  auto lp = limit_point(t, 3);
  CHECK(lp.center == b1.center);
}

TEST_CASE("radius stop rule arithmetic") {
  auto f = Field::prime(2);
  ShrinkInPlace s;
  GameParams p(Rational(1, 2), Rational(1, 2), 2);
  auto t = play(s, s, ball("0", "1", f), p, StopRule{Rational(1, 1000000), std::nullopt});
  CHECK(t.moves.size() - 1 == 20);
  CHECK(t.last().radius == Rational(1, 1 << 20));
}

TEST_CASE("illegal proposals forfeit") {
  auto f = Field::prime(2);
  FixedRadiusWhite w;
  ShrinkInPlace b;
  GameParams p(Rational(1, 4), Rational(1, 2), 2);
  auto t = play(w, b, ball("1", "1", f), p, StopRule{std::nullopt, 10});
  REQUIRE(t.forfeit);
  CHECK(t.forfeit->first == Player::White);
  CHECK(t.forfeit->second == 1);
  CHECK_FALSE(t.moves.back().legal);
  CHECK(replay_check(t) == 1);
}

TEST_CASE("limit point depth") {
  auto f = Field::prime(2);
  ShrinkInPlace s;
  GameParams p(Rational(1, 2), Rational(1, 2), 2);
  auto t = play(s, s, ball("X^-2", "1", f), p, StopRule{std::nullopt, 6});
  CHECK(t.last().effective_exp() == -6);
  CHECK_NOTHROW(limit_point(t, 5));
  try {
    limit_point(t, 6);
    FAIL("expected InsufficientDepth");
  } catch (const InsufficientDepth& e) {
    CHECK(e.required_moves() == 7);
  }
}

TEST_CASE("limit prefixes agree while the plays agree") {
  auto f = Field::prime(2);
  GameParams p(Rational(1, 4), Rational(1, 2), 2);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    BlackRandom w1(seed), w2(seed);
    SwitchingRandom b1(seed * 7, seed * 7 + 1, 10), b2(seed * 7, seed * 7 + 2, 10);
    auto start = ball("0", "1", f);
    auto t1 = play(w1, b1, start, p, StopRule{std::nullopt, 30});
    auto t2 = play(w2, b2, start, p, StopRule{std::nullopt, 30});
    for (std::size_t i = 0; i <= 10; ++i) CHECK(t1.moves[i].ball == t2.moves[i].ball);
    long prec = -t1.moves[10].ball.effective_exp() - 1;
    GameTranscript head = t1;
    head.moves.resize(11);
    auto lp = limit_point(head, prec);
    CHECK(limit_point(t1, prec).center == lp.center);
    CHECK(limit_point(t2, prec).center == lp.center);
  }
}

TEST_CASE("game laws on random plays") {
  std::mt19937_64 g(99);
  for (unsigned k : {2u, 3u, 4u}) {
    auto f = k == 4 ? Field::extension(2, 2) : Field::prime(k);
    for (int trial = 0; trial < 30; ++trial) {
      std::size_t m = 1 + g() % 2, n = 1 + g() % 2;
      Rational alpha(1 + g() % 3, 4 + g() % 4), beta(1 + g() % 3, 4 + g() % 4);
      GameParams p(alpha, beta, k);
      SeriesMatrix c(f, m, n);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = testgen::series(g, f, false).chop(-4);
      BlackRandom w(g()), b(g());
      auto t = play(w, b, {c, Rational(1)}, p, StopRule{std::nullopt, 16});
      REQUIRE_FALSE(t.forfeit);
      CHECK(replay_check(t) == -1);
      for (std::size_t i = 1; 2 * i < t.moves.size(); ++i) {
        CHECK(t.black_ball(i + 1).radius == alpha * beta * t.black_ball(i).radius);
        for (int s = 0; s < 4; ++s) {
          auto x = sample_in(g, t.black_ball(i + 1), 5);
          CHECK(ball_contains_point(t.white_ball(i), x));
          CHECK(ball_contains_point(t.black_ball(i), x));
        }
      }
      // any two balls: nested or disjoint images
      for (int s = 0; s < 10; ++s) {
        const auto& a = t.moves[g() % t.moves.size()].ball;
        const auto& b2 = t.moves[g() % t.moves.size()].ball;
        const auto& small = a.effective_exp() <= b2.effective_exp() ? a : b2;
        const auto& big = a.effective_exp() <= b2.effective_exp() ? b2 : a;
        std::set<bool> verdicts;
        for (int r = 0; r < 6; ++r) verdicts.insert(ball_contains_point(big, sample_in(g, small, 4)));
        CHECK(verdicts.size() == 1);
      }
      auto cb = canonicalize(t.last());
      CHECK(canonicalize(cb) == cb);
      for (int r = 0; r < 4; ++r) {
        auto x = sample_in(g, t.last(), 4);
        CHECK(ball_contains_point(cb, x));
      }
    }
  }
}

TEST_CASE("gamma is positive below 1/(k+1)") {
  std::mt19937_64 g(5);
  for (unsigned k : {2u, 3u, 4u, 5u, 7u}) {
    for (int i = 0; i < 200; ++i) {
      BigInt den = 1 + g() % 1000;
      Rational alpha(BigInt(1 + g() % 1000), den * (k + 1) + 1);
      if (alpha >= Rational(1, k + 1)) continue;
      Rational beta(BigInt(1 + g() % 999), 1000);
      CHECK(GameParams(alpha, beta, k).gamma() > 0);
    }
    CHECK(GameParams(Rational(1, k + 1), Rational(1, 1000), k).gamma() > 0);
  }
}

TEST_CASE("transcript round trip") {
  auto f = Field::extension(3, 2);
  GameParams p(Rational(1, 5), Rational(2, 3), 9);
  BlackRandom w(3), b(4);
  SeriesMatrix c(f, 2, 1);
  auto t = play(w, b, {c, Rational(1)}, p, StopRule{std::nullopt, 9});
  std::istringstream in(transcript_to_jsonl(t, R"({"seed": 4})"));
  auto back = transcript_from_jsonl(in);
  REQUIRE(back.moves.size() == t.moves.size());
  for (std::size_t i = 0; i < t.moves.size(); ++i) CHECK(back.moves[i].ball == t.moves[i].ball);
  CHECK(replay_check(back) == -1);
  CHECK(back.params.alpha == p.alpha);
  std::istringstream bad("{\"type\":\"header\"");
  CHECK_THROWS_AS(transcript_from_jsonl(bad), SyntaxError);
}
