#pragma once

#include "fqdio/approx.hpp"
#include "fqdio/game.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fqdio {

/// k-type: (q_1..q_m, p) against the columns of A-hat. h-type: (q_1..q_n, p)
/// against the first m columns of A-hat-star.
enum class DangerKind { KType, HType };
enum class WhiteMode { Literal, Avoidance };

const char* kind_name(DangerKind k);

struct StrategyConfig {
  std::size_t m = 1, n = 1;
  unsigned k = 2;
  long r_exp = 2;      // R = k^r_exp
  long sigma_exp = 0;  // ||A|| <= k^sigma_exp on B_1
  Rational rho1 = 1;
  // Existence-only constants of the construction, calibrated empirically.
  Rational K4 = 1, K5 = Rational(1, 32), K7 = Rational(1, 128);
  WhiteMode mode = WhiteMode::Avoidance;
  long avoid_height_exp = 4;
  std::size_t max_candidates = 4096;
  std::uint64_t danger_budget = std::uint64_t(1) << 22;

  long delta_exp() const;       // delta = k^delta_exp = R^{-m(m+n)^2}
  long delta_star_exp() const;  // R^{-n(m+n)^2}
  Rational tau() const { return Rational(static_cast<long>(m), static_cast<long>(m + n)); }
  /// Exponent of K = delta^{m+n} R^{-n^2-mn} / k.
  long certify_exp() const;
};

/// Move indices (into the transcript) of B_{k_i} and B_{h_i} for every level reached.
struct Markers {
  std::vector<std::size_t> k_moves, h_moves;
};
Markers schedule_markers(const GameTranscript& t, const StrategyConfig& cfg);
/// Radius thresholds as exponents of k: rho < k^e.
long k_marker_exp(const StrategyConfig& cfg, long i);
long h_marker_exp(const StrategyConfig& cfg, long i);

/// Strict bounds ||q'|| < k^height and ||q . col|| < k^dist (rational exponents).
struct InequalityWindow {
  Rational height, dist;
};
InequalityWindow inequality_window(DangerKind kind, long i, const StrategyConfig& cfg);
bool check_inequalities(const SeriesMatrix& a, const std::vector<Poly>& q, long i, DangerKind kind,
                        const StrategyConfig& cfg);

struct DangerReport {
  long level = 0;
  DangerKind kind = DangerKind::KType;
  std::vector<std::vector<Poly>> solutions;
  std::size_t rank = 0;
  long max_degree = -1;  // degree window searched for q' (-1: empty)
};
DangerReport danger_set(const FormalBall& b, long i, DangerKind kind, const StrategyConfig& cfg, long height_cap_exp,
                        std::uint64_t budget = std::uint64_t(1) << 22);

struct SubspaceBasis {
  std::vector<SeriesVec> y;
};
/// Ultrametric orthonormal basis of the span (full pivoting on the largest entry).
SubspaceBasis orthonormal_basis(const std::vector<SeriesVec>& vectors);
SubspaceBasis orthonormal_basis(const std::vector<std::vector<Poly>>& vectors);
/// ||y_i|| = 1 and ||sum t_i y_i|| = max ||t_i|| on random scalars.
bool is_orthonormal(const SubspaceBasis& b, std::mt19937_64& g, int trials);

/// Matrix (y_h . col_l) for the columns the kind pairs against.
SeriesMatrix pairing_matrix(const SeriesMatrix& a, const SubspaceBasis& b, DangerKind kind = DangerKind::HType);

struct MinorVector {
  long v = 0;
  std::vector<LaurentSeries> entries;
  Magnitude norm() const;
};
MinorVector minors(const SeriesMatrix& a, const SubspaceBasis& b, long v, DangerKind kind = DangerKind::HType);
/// Leading v x v determinant.
LaurentSeries leading_det(const SeriesMatrix& a, const SubspaceBasis& b, long v, DangerKind kind = DangerKind::HType);
/// D_v(A + E_ij) - D_v(A), row-major over (i, j).
SeriesVec discrete_gradient(const SeriesMatrix& a, const SubspaceBasis& b, long v,
                            DangerKind kind = DangerKind::HType);
/// ||(sum_h (-1)^{h+1} d_h y_h) . z|| with d_h the minors of the first v-1
/// columns without row h.
Magnitude phi(const SeriesVec& z, const SeriesMatrix& a, const SubspaceBasis& b, long v,
              DangerKind kind = DangerKind::HType);
/// max over A in psi(ball) of ||M_v(A)||, exact (M_v is multilinear in the entries).
Magnitude minors_sup(const FormalBall& ball, const SubspaceBasis& b, long v, DangerKind kind = DangerKind::HType);
/// sum_ij x_ij g_ij.
LaurentSeries matrix_dot(const SeriesMatrix& x, const SeriesVec& g);

/// Constants of the finite game derived from K4, K5, K7 and the game parameters.
struct DerivedConstants {
  Rational gamma, epsilon;
  std::vector<Rational> mu;  // mu_0 .. mu_m
  std::vector<Rational> K6;  // K6_1 .. K6_m at index v
  long t0 = 1;
};
DerivedConstants derive_constants(const StrategyConfig& cfg, const GameParams& p);
/// Least t with (alpha beta)^t <= gamma / 2.
long anchor_rounds(const GameParams& p);

class WhiteStrategy : public Strategy {
 public:
  explicit WhiteStrategy(StrategyConfig cfg) : cfg_(std::move(cfg)) {}
  FormalBall propose(const GameTranscript& t) override;
  std::string name() const override { return cfg_.mode == WhiteMode::Literal ? "white-literal" : "white-avoid"; }
  /// Number of literal-mode moves that fell back to a concentric shrink.
  std::size_t fallbacks() const { return fallbacks_; }

 private:
  FormalBall literal_move(const GameTranscript& t);
  FormalBall avoid_move(const GameTranscript& t);

  StrategyConfig cfg_;
  SeriesVec anchor_;
  long countdown_ = 0;
  std::size_t anchor_stage_ = static_cast<std::size_t>(-1);
  std::size_t fallbacks_ = 0;
};

struct Certificate {
  long K_exp = 0, cap_exp = 0;
  long min_margin_exp = 0;  // log_k of min score / K
  std::uint64_t witnesses_checked = 0;
  ApproxWitness worst;
};
/// Checks ||q||^m <qA>^n > K for all 0 < ||q|| <= k^cap_exp, where
/// K = delta^{m+n} R^{-n^2-mn} / k. Throws CounterexampleFound.
Certificate certify_bad(const SeriesMatrix& point, const StrategyConfig& cfg, long cap_exp,
                        long known_below = LONG_MIN);

/// A random orthonormal basis, ball and minor level.
struct MinorInstance {
  SubspaceBasis basis;
  FormalBall ball;
  long v = 1;
};
MinorInstance sample_minor_instance(std::mt19937_64& g, const StrategyConfig& cfg, FieldRef f);
/// Uniform point of psi(ball) with `depth` random digits below the effective exponent.
SeriesMatrix sample_point(std::mt19937_64& g, const FormalBall& ball, int depth);
/// Random sub-ball with radius below `radius_bound`, formally inside `outer`.
FormalBall sample_subball(std::mt19937_64& g, const FormalBall& outer, const Rational& radius_bound);

struct Calibration {
  Rational K4, K5, K7;
  std::size_t samples = 0, k4_used = 0, k5_used = 0, k7_used = 0;
  std::size_t k7_zero_det = 0;  // samples with D_v(A) = 0 but (A - C).grad D_v(A) nonzero
  std::uint64_t seed = 0;
};
Calibration calibrate(const StrategyConfig& cfg, FieldRef f, std::size_t samples, std::uint64_t seed);

struct InequalityCheck {
  std::size_t checked = 0, skipped = 0, violations = 0;
};
InequalityCheck check_minor_variation(const StrategyConfig& cfg, const GameParams& p, FieldRef f, std::size_t samples,
                            std::uint64_t seed);
InequalityCheck check_minor_stability(const StrategyConfig& cfg, const GameParams& p, FieldRef f, std::size_t samples,
                         std::uint64_t seed);
InequalityCheck check_phi_homogeneity(const StrategyConfig& cfg, FieldRef f, std::size_t samples, std::uint64_t seed);
InequalityCheck check_gradient_bound(const StrategyConfig& cfg, FieldRef f, std::size_t samples, std::uint64_t seed);

}  // namespace fqdio
