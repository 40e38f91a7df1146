#pragma once

#include "fqdio/rational.hpp"
#include "fqdio/series.hpp"

#include <vector>

namespace fqdio {

/// {x : ||(xA)_j|| < k^bounds[j] for all j} for an invertible matrix A with
/// exact entries.
class Parallelepiped {
 public:
  Parallelepiped(SeriesMatrix a, std::vector<long> bound_exps);
  static Parallelepiped unit(const SeriesMatrix& a) { return {a, std::vector<long>(a.cols(), 0)}; }

  std::size_t dim() const { return a_.rows(); }
  const SeriesMatrix& matrix() const { return a_; }
  const std::vector<long>& bounds() const { return e_; }
  const FieldRef& field() const { return a_.field(); }

  /// F_A(x) = max_j ||(xA)_j|| / c_j.
  Magnitude distance(const SeriesVec& x) const;
  Magnitude distance(const std::vector<Poly>& x) const;
  /// Exponent of mu(P_A(1)) = prod c_j / ||det A||.
  long measure_exp() const;
  Rational measure() const;
  /// The same body with bounds folded into the matrix: A diag(X^-e), unit bounds.
  Parallelepiped canonical() const;
  /// Body whose distance function is sup_x ||x.y|| / F_A(x).
  Parallelepiped polar() const;
  bool same_body(const Parallelepiped& o) const { return canonical().a_ == o.canonical().a_; }

 private:
  SeriesMatrix a_;
  std::vector<long> e_;
  long det_exp_;
};

struct SuccessiveMinima {
  std::vector<long> lambda_exps;           // nondecreasing
  std::vector<std::vector<Poly>> witnesses;  // F_A(witnesses[j]) = k^lambda_exps[j]
  int degree_bound = 0;
};

/// Degree bound on lattice vectors that always suffices for a certified
/// result, derived from the product law and ||A^-1||.
int minima_degree_bound(const Parallelepiped& p);

/// Exact successive minima over F[X]^d. Lattice vectors with coordinate
/// degrees <= degree_bound are searched level by level; the result is
/// certified by the product law lambda_1...lambda_d mu(P_A(1)) = 1, and
/// SearchIncomplete carries a sufficient bound otherwise.
SuccessiveMinima successive_minima(const Parallelepiped& p, int degree_bound);
/// successive_minima with minima_degree_bound.
SuccessiveMinima successive_minima(const Parallelepiped& p);

/// P = {y : ||y . colhat*_l(C)|| < R^-n(1+i) (l <= m), ||y_l'|| < R^m(1+i) (l' <= n)}
/// for an m x n matrix C and R = k^r_exp.
Parallelepiped structured_body(const SeriesMatrix& c, long r_exp, long level);
/// P* = {x : ||x . colhat_l'(C)|| < R^-m(1+i) (l' <= n), ||x_l|| < R^n(1+i) (l <= m)}.
Parallelepiped structured_polar_body(const SeriesMatrix& c, long r_exp, long level);
/// Coordinates of structured_polar_body corresponding to polar(structured_body):
/// (u, w) with u of length n maps to (w, -u).
SeriesVec structured_polar_map(const SeriesVec& y, std::size_t n);

struct DualityReport {
  SuccessiveMinima lambda, sigma;
  std::vector<long> products;  // lambda_j sigma_{d+1-j} exponents
  bool holds = false;          // lambda_m sigma_{n+1} = 1
};

DualityReport check_duality(const Parallelepiped& p, std::size_t m, std::size_t n, int degree_bound = -1);

}  // namespace fqdio
