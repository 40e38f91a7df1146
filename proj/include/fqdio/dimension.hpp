#pragma once

#include "fqdio/game.hpp"
#include "fqdio/magnitude.hpp"
#include "fqdio/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace fqdio {

/// Disjoint balls of radius beta inside the open unit ball I^{mn}.
struct PackingCount {
  Rational beta;
  long i = 0;                // k^{i-1} <= beta < k^i
  long coarse_count_exp = 0;  // (k^{-i-1})^{mn}
  long max_count_exp = 0;    // k^{(j-1)mn} for beta = k^-j
  Rational coarse_count;      // fractional when i = 0
  BigInt max_count;
};

PackingCount packing_count(const Rational& beta, std::size_t m, std::size_t n, unsigned k);

/// Every ball of radius ratio * rho(w) formally inside w, one per canonical form.
std::vector<FormalBall> packing_in(const FormalBall& w, const Rational& ratio);
/// The maximal packing of I^{mn} by balls of radius beta.
std::vector<FormalBall> packing_centers(const Rational& beta, std::size_t m, std::size_t n, FieldRef f);

/// Whether psi(a) and psi(b) meet.
bool balls_intersect(const FormalBall& a, const FormalBall& b);

struct DimBound {
  std::optional<Rational> exact;  // when alpha*beta is a power of k
  double value = 0;
  long log_count_exp = 0;         // log_k N(beta)
};

/// log N(beta) / |log alpha beta| with N the maximal packing count.
DimBound dim_lower_bound(const Rational& alpha, const Rational& beta, std::size_t m, std::size_t n, unsigned k);

/// Base-N expansion 0.l_1 l_2 ... over the Black moves after B_1.
Rational digit_map(const GameTranscript& t, const std::vector<std::size_t>& labels, std::size_t branching);

struct CoverEntry {
  FormalBall ball;
  long j = 0;
};

/// j = floor(log(2 rho) / log(alpha beta)), i.e. the largest j with (alpha beta)^j >= 2 rho.
CoverEntry cover_entry(const FormalBall& ball, const Rational& alpha, const Rational& beta);

/// sum rho^s. Radii that are k-powers are kept as exact exponents e*s.
struct SLength {
  unsigned k = 2;
  std::map<Rational, BigInt> terms;  // exponent of k -> multiplicity
  double other = 0;                  // radii off the k-power lattice
  bool symbolic() const { return other == 0; }
  /// Exact value when every exponent is an integer.
  std::optional<Rational> exact() const;
  double approx() const;
};

SLength cover_s_length(const std::vector<CoverEntry>& cover, const Rational& s);

struct BoxCountRow {
  long resolution = 0;  // cells of side k^-resolution
  BigInt cells_total, cells_surviving;
  double empirical_dim = 0;  // log_k(surviving) / resolution
};

/// Counts cells of I^{mn} at resolutions 1..t on which every q with
/// 0 < ||q|| <= cap satisfies ||q||^m <qA>^n >= K. A cell survives only when
/// the digits above its resolution decide all those inequalities.
std::vector<BoxCountRow> box_count_bad(Magnitude K, long cap_exp, long t, std::size_t m, std::size_t n, FieldRef f,
                                       unsigned threads = 1, std::uint64_t budget = std::uint64_t(1) << 32);

}  // namespace fqdio
