#pragma once

#include "fqdio/series.hpp"

#include <climits>
#include <cstdint>
#include <vector>

namespace fqdio {

inline constexpr std::uint64_t kDefaultSearchBudget = std::uint64_t(1) << 26;

struct HatMatrices {
  SeriesMatrix hat;       // [[A, I_m], [I_n, 0]]
  SeriesMatrix hat_star;  // [[A^T, I_n], [I_m, 0]]
};

HatMatrices build_hat(const SeriesMatrix& a);

struct ApproxWitness {
  std::vector<Poly> q;
  Magnitude height, dist, score;
};

/// Evaluates ||q||^m <qA>^n for an m x n matrix A.
ApproxWitness evaluate_witness(const SeriesMatrix& a, const std::vector<Poly>& q);

struct BadnessResult {
  Magnitude constant;
  ApproxWitness witness;
  std::uint64_t enumerated = 0;
};

/// min over nonzero q in F[X]^m with ||q|| <= k^height_exp of ||q||^m <qA>^n.
/// Heights are visited in increasing order, stopping early once the minimum
/// reaches zero. With known_below set, every entry counts as known only from
/// that exponent up.
BadnessResult badness_constant(const SeriesMatrix& a, long height_exp, std::uint64_t budget = kDefaultSearchBudget,
                               long known_below = LONG_MIN);

/// Guaranteed exponent g: some nonzero q with ||q|| <= k^t has <qA> <= k^-g.
long dirichlet_exponent(std::size_t m, std::size_t n, long t);
/// Exponent constant c0 with dirichlet_exponent(1, 1, t) = t + c0.
inline constexpr long kDirichletC0 = 1;

/// Finds q with 0 < ||q|| <= k^t and <qA> <= k^-dirichlet_exponent(m, n, t)
/// by solving for q whose products have vanishing leading fractional digits.
ApproxWitness dirichlet_witness(const SeriesMatrix& a, long t);

struct ContinuedFraction {
  std::vector<Poly> a;  // a_0, a_1, ...
  bool terminated = false;
  bool precision_exhausted = false;
};

/// Expands up to max_terms partial quotients (a_0 included). Rational input
/// runs the Euclidean algorithm; truncated input stops with
/// PrecisionExhausted (carrying the number of terms produced) unless
/// allow_partial is set.
ContinuedFraction cf_expand(const LaurentSeries& x, int max_terms, bool allow_partial = false);
/// Inverse of cf_expand for a finite expansion.
LaurentSeries cf_eval(const std::vector<Poly>& a);

struct Convergent {
  Poly p, q;
};
std::vector<Convergent> cf_convergents(const ContinuedFraction& cf);

struct CfBadness {
  bool bounded = false;  // expansion reached the requested depth
  int max_deg = 0;       // max deg a_i over 1 <= i <= reached depth
  int reached = 0;
};
CfBadness is_bad_cf(const LaurentSeries& x, int depth);

}  // namespace fqdio
