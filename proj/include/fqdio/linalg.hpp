#pragma once

#include "fqdio/series.hpp"

#include <vector>

namespace fqdio {

using ElemMatrix = std::vector<std::vector<Elem>>;

/// Row-reduces in place; returns the rank.
std::size_t row_reduce(const Field& f, ElemMatrix& a, std::vector<std::size_t>* pivots = nullptr);
/// Basis of {x : a x = 0} over F_k for an r x c matrix.
std::vector<std::vector<Elem>> kernel(const Field& f, ElemMatrix a, std::size_t cols);

/// Rank over F_k(X) of a list of polynomial row vectors.
std::size_t rank(const std::vector<std::vector<Poly>>& rows);
/// Rank over F_k((X^-1)) of exact series rows.
std::size_t rank(const std::vector<SeriesVec>& rows);

/// Determinant of a square matrix. Exact entries give an exact result;
/// truncated entries go through cofactor expansion (sizes up to 5).
LaurentSeries det(const SeriesMatrix& a);
/// Inverse of a square matrix with exact entries.
SeriesMatrix inverse(const SeriesMatrix& a);

std::vector<std::vector<RatFunc>> to_ratfunc(const SeriesMatrix& a);
SeriesMatrix from_ratfunc(const FieldRef& f, const std::vector<std::vector<RatFunc>>& a);

}  // namespace fqdio
