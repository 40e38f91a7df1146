#include "fqdio/game.hpp"

#include "fqdio/approx.hpp"
#include "fqdio/errors.hpp"
#include "fqdio/enumerate.hpp"
#include "fqdio/field.hpp"

#include <istream>
#include <json.hpp>
#include <ostream>
#include <stdexcept>

namespace fqdio {

namespace {

unsigned field_size(const SeriesMatrix& c) { return c.field()->k(); }

bool finite_support(const SeriesMatrix& c) {
  for (const auto& e : c.entries())
    if (!e.has_finite_support()) return false;
  return true;
}

std::string radius_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace

long FormalBall::effective_exp() const { return floor_log_k(radius, field_size(center)); }

Rational sup_distance(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("ball dimensions differ");
  Magnitude d;
  for (std::size_t i = 0; i < a.entries().size(); ++i) d = max(d, (a.entries()[i] - b.entries()[i]).norm());
  return d.is_zero() ? Rational(0) : k_power(field_size(a), d.exp);
}

bool formal_contains(const FormalBall& inner, const FormalBall& outer) {
  return inner.radius + sup_distance(inner.center, outer.center) <= outer.radius;
}

FormalBall canonicalize(const FormalBall& b) {
  long f = b.effective_exp();
  SeriesMatrix c = b.center;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) = c(i, j).chop(f + 1);
  return {c, k_power(field_size(c), f)};
}

bool validate_move(const FormalBall& prev, const FormalBall& next, const Rational& ratio) {
  if (next.center.rows() != prev.center.rows() || next.center.cols() != prev.center.cols()) return false;
  if (!finite_support(next.center)) return false;
  if (next.radius != ratio * prev.radius) return false;
  return formal_contains(next, prev);
}

bool ball_contains_point(const FormalBall& b, const SeriesMatrix& x) {
  return sup_distance(x, b.center) <= b.radius;
}

GameParams::GameParams(Rational a, Rational b, unsigned field_size) : alpha(a), beta(b), k(field_size) {
  if (a <= 0 || a >= 1 || b <= 0 || b >= 1) throw std::invalid_argument("alpha and beta must lie in (0,1)");
}

Rational GameParams::gamma() const {
  Rational inv_k(1, k);
  return inv_k + alpha * beta - (inv_k + 1) * alpha;
}

const char* player_name(Player p) { return p == Player::White ? "white" : "black"; }

std::size_t GameTranscript::legal_moves() const {
  std::size_t c = 0;
  for (const auto& mv : moves)
    if (mv.legal) ++c;
  return c;
}

SeriesMatrix MoveGrid::center(const std::vector<Elem>& offset) const {
  SeriesMatrix c = prev.center;
  long per = digits_per_entry();
  if (offset.size() != entries * static_cast<std::size_t>(per)) throw std::invalid_argument("offset length");
  if (per == 0) return c;
  for (std::size_t e = 0; e < entries; ++e) {
    std::vector<Elem> d(offset.begin() + e * per, offset.begin() + (e + 1) * per);
    c(e / c.cols(), e % c.cols()) =
        c(e / c.cols(), e % c.cols()) + LaurentSeries::from_digits(c.field(), slack_exp, d);
  }
  return c;
}

MoveGrid move_grid(const GameTranscript& t) {
  MoveGrid g;
  g.prev = t.last();
  Rational ratio = t.to_move() == Player::White ? t.params.alpha : t.params.beta;
  g.new_radius = ratio * g.prev.radius;
  g.slack_exp = floor_log_k(g.prev.radius - g.new_radius, t.params.k);
  g.low_exp = floor_log_k(g.new_radius, t.params.k);
  g.entries = t.m * t.n;
  return g;
}

GameTranscript play(Strategy& white, Strategy& black, const FormalBall& b1, const GameParams& params,
                    const StopRule& stop) {
  if (!stop.radius_below && !stop.max_moves) throw std::invalid_argument("stop rule needs a radius or a move count");
  if (params.k != field_size(b1.center)) throw std::invalid_argument("game parameters and field disagree");
  if (b1.radius <= 0 || !finite_support(b1.center)) throw std::invalid_argument("invalid initial ball");
  GameTranscript t;
  t.params = params;
  t.m = b1.center.rows();
  t.n = b1.center.cols();
  t.field = b1.center.field();
  t.moves.push_back({Player::Black, b1, true});
  for (;;) {
    if (stop.radius_below && t.last().radius < *stop.radius_below) break;
    if (stop.max_moves && t.moves.size() - 1 >= *stop.max_moves) break;
    Player who = t.to_move();
    FormalBall next = (who == Player::White ? white : black).propose(t);
    Rational ratio = who == Player::White ? params.alpha : params.beta;
    bool ok = validate_move(t.last(), next, ratio);
    t.moves.push_back({who, std::move(next), ok});
    if (!ok) {
      t.forfeit = std::make_pair(who, t.moves.size() - 1);
      break;
    }
  }
  return t;
}

std::size_t moves_for_precision(const GameTranscript& t, long precision) {
  Rational r = t.moves.front().ball.radius;
  std::size_t moves = 0;
  while (floor_log_k(r, t.params.k) >= -precision) {
    r *= moves % 2 == 0 ? t.params.alpha : t.params.beta;
    ++moves;
  }
  return moves;
}

LimitPoint limit_point(const GameTranscript& t, long precision) {
  std::size_t last = t.moves.size();
  while (last > 0 && !t.moves[last - 1].legal) --last;
  if (last == 0) throw InsufficientDepth(static_cast<long>(moves_for_precision(t, precision)));
  const FormalBall& b = t.moves[last - 1].ball;
  if (b.effective_exp() >= -precision) throw InsufficientDepth(static_cast<long>(moves_for_precision(t, precision)));
  LimitPoint lp;
  lp.precision = precision;
  lp.center = b.center;
  for (std::size_t i = 0; i < lp.center.rows(); ++i)
    for (std::size_t j = 0; j < lp.center.cols(); ++j) lp.center(i, j) = lp.center(i, j).chop(-precision);
  return lp;
}

FormalBall ShrinkInPlace::propose(const GameTranscript& t) {
  Rational ratio = t.to_move() == Player::White ? t.params.alpha : t.params.beta;
  return {t.last().center, ratio * t.last().radius};
}

FormalBall BlackRandom::propose(const GameTranscript& t) {
  MoveGrid g = move_grid(t);
  std::vector<Elem> off(g.entries * g.digits_per_entry());
  for (auto& d : off) d = static_cast<Elem>(rng_() % t.params.k);
  return {g.center(off), g.new_radius};
}

FormalBall BlackGreedy::propose(const GameTranscript& t) {
  MoveGrid g = move_grid(t);
  std::size_t len = g.entries * g.digits_per_entry();
  std::uint64_t total = span_size(t.params.k, len);
  std::vector<std::vector<Elem>> cands;
  if (total <= max_candidates_) {
    std::vector<Elem> off(len, 0);
    for (std::uint64_t c = 0; c < total; ++c) {
      cands.push_back(off);
      for (std::size_t i = 0; i < len; ++i) {
        if (++off[i] < t.params.k) break;
        off[i] = 0;
      }
    }
  } else {
    std::mt19937_64 rng(t.moves.size());
    for (std::size_t c = 0; c < max_candidates_; ++c) {
      std::vector<Elem> off(len);
      for (auto& d : off) d = static_cast<Elem>(rng() % t.params.k);
      cands.push_back(std::move(off));
    }
  }
  SeriesMatrix best;
  Magnitude best_score;
  bool have = false;
  for (const auto& off : cands) {
    SeriesMatrix c = g.center(off);
    Magnitude s = badness_constant(c, height_exp_).constant;
    if (!have || s < best_score) {
      best = c;
      best_score = s;
      have = true;
    }
  }
  return {best, g.new_radius};
}

FormalBall StreamStrategy::propose(const GameTranscript& t) {
  MoveGrid g = move_grid(t);
  if (prompt_)
    *prompt_ << "move " << t.moves.size() << " (" << player_name(t.to_move()) << "), radius "
             << to_string(g.new_radius) << ", current centre " << format_matrix(t.last().center) << "\n> "
             << std::flush;
  std::string line;
  if (!std::getline(in_, line)) throw Error("move input ended");
  if (line.find_first_not_of(" \t\r") == std::string::npos) return {t.last().center, g.new_radius};
  return {parse_matrix(line, t.field), g.new_radius};
}

std::string transcript_to_jsonl(const GameTranscript& t, const std::string& header_extra_json) {
  using nlohmann::json;
  json head = json::parse(header_extra_json);
  head["type"] = "header";
  head["field"] = t.field->spec_string();
  head["m"] = t.m;
  head["n"] = t.n;
  head["alpha"] = to_string(t.params.alpha);
  head["beta"] = to_string(t.params.beta);
  std::string out = head.dump() + "\n";
  for (const auto& mv : t.moves) {
    json c = json::array();
    for (std::size_t i = 0; i < mv.ball.center.rows(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < mv.ball.center.cols(); ++j) row.push_back(format_series(mv.ball.center(i, j)));
      c.push_back(row);
    }
    json line = {{"player", player_name(mv.player)}, {"center", c}, {"radius", radius_string(mv.ball.radius)}};
    if (!mv.legal) line["legal"] = false;
    out += line.dump() + "\n";
  }
  return out;
}

GameTranscript transcript_from_jsonl(std::istream& in) {
  using nlohmann::json;
  GameTranscript t;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SyntaxError("transcript line " + std::to_string(lineno) + ": " + e.what(), 0);
    }
    if (!header) {
      if (j.value("type", "") != "header") throw SyntaxError("transcript must start with a header", 0);
      t.field = Field::parse(j.at("field").get<std::string>());
      t.m = j.at("m").get<std::size_t>();
      t.n = j.at("n").get<std::size_t>();
      t.params = GameParams(parse_rational(j.at("alpha").get<std::string>()),
                            parse_rational(j.at("beta").get<std::string>()), t.field->k());
      header = true;
      continue;
    }
    Move mv;
    std::string who = j.at("player").get<std::string>();
    if (who != "white" && who != "black") throw SyntaxError("unknown player '" + who + "'", 0);
    mv.player = who == "white" ? Player::White : Player::Black;
    const json& c = j.at("center");
    SeriesMatrix center(t.field, t.m, t.n);
    if (c.size() != t.m) throw SyntaxError("centre has wrong number of rows", 0);
    for (std::size_t r = 0; r < t.m; ++r) {
      if (c[r].size() != t.n) throw SyntaxError("centre has wrong number of columns", 0);
      for (std::size_t s = 0; s < t.n; ++s) center(r, s) = parse_series(c[r][s].get<std::string>(), t.field);
    }
    mv.ball = {center, parse_rational(j.at("radius").get<std::string>())};
    mv.legal = j.value("legal", true);
    t.moves.push_back(std::move(mv));
    if (!t.moves.back().legal) t.forfeit = std::make_pair(t.moves.back().player, t.moves.size() - 1);
  }
  if (!header) throw SyntaxError("empty transcript", 0);
  if (t.moves.empty()) throw SyntaxError("transcript has no initial ball", 0);
  return t;
}

long replay_check(const GameTranscript& t) {
  for (std::size_t i = 0; i < t.moves.size(); ++i) {
    Player expect = i % 2 == 1 ? Player::White : Player::Black;
    if (t.moves[i].player != expect) return static_cast<long>(i);
    if (i == 0) continue;
    Rational ratio = expect == Player::White ? t.params.alpha : t.params.beta;
    if (!validate_move(t.moves[i - 1].ball, t.moves[i].ball, ratio)) return static_cast<long>(i);
  }
  return -1;
}

}  // namespace fqdio
