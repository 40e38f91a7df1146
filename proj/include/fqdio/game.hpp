#pragma once

#include "fqdio/rational.hpp"
#include "fqdio/series.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fqdio {

/// Element of Omega: a centre in L^{mn} (finite-support entries) and a radius.
struct FormalBall {
  SeriesMatrix center;
  Rational radius;

  /// floor(log_k radius): psi(B) = {x : ||x - c|| <= k^f}.
  long effective_exp() const;
  bool operator==(const FormalBall& o) const { return center == o.center && radius == o.radius; }
};

/// ||a - b||_inf as an exact rational (0 or a power of k).
Rational sup_distance(const SeriesMatrix& a, const SeriesMatrix& b);

/// rho_in + ||c_in - c_out|| <= rho_out.
bool formal_contains(const FormalBall& inner, const FormalBall& outer);
/// Radius k^f and centre without coefficients at exponents <= f.
FormalBall canonicalize(const FormalBall& b);
/// rho(next) = ratio rho(prev) and next formally inside prev.
bool validate_move(const FormalBall& prev, const FormalBall& next, const Rational& ratio);
/// Whether x lies in psi(b).
bool ball_contains_point(const FormalBall& b, const SeriesMatrix& x);

struct GameParams {
  Rational alpha, beta;
  unsigned k = 2;
  GameParams() = default;
  GameParams(Rational a, Rational b, unsigned field_size);
  Rational gamma() const;
};

enum class Player { White, Black };
const char* player_name(Player p);

struct Move {
  Player player;
  FormalBall ball;
  bool legal = true;
};

/// moves[0] is Black's B_1; then W_1, B_2, W_2, ...
struct GameTranscript {
  GameParams params;
  std::size_t m = 1, n = 1;
  FieldRef field;
  std::vector<Move> moves;
  /// Set when a player proposed an illegal ball; that move is recorded with
  /// legal = false and the game ends.
  std::optional<std::pair<Player, std::size_t>> forfeit;

  Player to_move() const { return moves.size() % 2 == 1 ? Player::White : Player::Black; }
  const FormalBall& last() const { return moves.back().ball; }
  /// Black's i-th ball B_i (1-based) and White's W_i.
  const FormalBall& black_ball(std::size_t i) const { return moves.at(2 * (i - 1)).ball; }
  const FormalBall& white_ball(std::size_t i) const { return moves.at(2 * i - 1).ball; }
  std::size_t legal_moves() const;
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  /// Proposes the next ball given the full history.
  virtual FormalBall propose(const GameTranscript& t) = 0;
  virtual std::string name() const = 0;
};

struct StopRule {
  std::optional<Rational> radius_below;  // stop once the last radius is below
  std::optional<std::size_t> max_moves;  // moves after B_1
};

GameTranscript play(Strategy& white, Strategy& black, const FormalBall& b1, const GameParams& params,
                    const StopRule& stop);

/// Legal-move geometry for the player to move: candidate centres differ
/// from the current centre in coefficients at exponents slack_exp down to
/// the new effective exponent.
struct MoveGrid {
  FormalBall prev;
  Rational new_radius;
  long slack_exp = 0;  // offsets of norm <= k^slack_exp keep the move legal
  long low_exp = 0;    // lowest exponent worth changing
  std::size_t entries = 0;
  long digits_per_entry() const { return slack_exp >= low_exp ? slack_exp - low_exp + 1 : 0; }
  /// Centre from prev.center plus offset digits (entries * digits_per_entry, entry-major, high first).
  SeriesMatrix center(const std::vector<Elem>& offset) const;
};
MoveGrid move_grid(const GameTranscript& t);

struct LimitPoint {
  SeriesMatrix center;  // exact; coefficients at exponents >= -precision are final
  long precision = 0;
  /// Entries as series known down to X^-precision (zero-prefix entries stay exact zero-free form).
  long known_below() const { return -precision; }
};

/// Moves needed (from B_1) before coefficients down to X^-precision are final.
std::size_t moves_for_precision(const GameTranscript& t, long precision);
LimitPoint limit_point(const GameTranscript& t, long precision);

/// Both players keep the centre and shrink.
class ShrinkInPlace : public Strategy {
 public:
  FormalBall propose(const GameTranscript& t) override;
  std::string name() const override { return "shrink"; }
};

/// Uniformly random legal grid centre, deterministic in the seed.
class BlackRandom : public Strategy {
 public:
  explicit BlackRandom(std::uint64_t seed) : rng_(seed) {}
  FormalBall propose(const GameTranscript& t) override;
  std::string name() const override { return "black-random"; }

 private:
  std::mt19937_64 rng_;
};

/// Picks the grid centre whose badness over small heights is smallest.
class BlackGreedy : public Strategy {
 public:
  explicit BlackGreedy(long height_exp = 2, std::size_t max_candidates = 4096)
      : height_exp_(height_exp), max_candidates_(max_candidates) {}
  FormalBall propose(const GameTranscript& t) override;
  std::string name() const override { return "black-greedy"; }

 private:
  long height_exp_;
  std::size_t max_candidates_;
};

/// Reads one centre per move (matrix syntax) from a stream.
class StreamStrategy : public Strategy {
 public:
  StreamStrategy(std::istream& in, std::ostream* prompt) : in_(in), prompt_(prompt) {}
  FormalBall propose(const GameTranscript& t) override;
  std::string name() const override { return "black-stdin"; }

 private:
  std::istream& in_;
  std::ostream* prompt_;
};

/// JSON lines: a header object followed by one object per move.
std::string transcript_to_jsonl(const GameTranscript& t, const std::string& header_extra_json = "{}");
GameTranscript transcript_from_jsonl(std::istream& in);
/// Re-checks every recorded move; returns the index of the first illegal one or -1.
long replay_check(const GameTranscript& t);

}  // namespace fqdio
