#pragma once

#include "fqdio/errors.hpp"
#include "fqdio/field.hpp"

#include <cstdint>
#include <limits>
#include <type_traits>
#include <vector>

namespace fqdio {

/// k^count, saturating at UINT64_MAX.
inline std::uint64_t span_size(unsigned k, std::size_t count) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < count; ++i) {
    if (n > std::numeric_limits<std::uint64_t>::max() / k) return std::numeric_limits<std::uint64_t>::max();
    n *= k;
  }
  return n;
}

/// Walks through all F_k-combinations of `count` generators in a modular
/// Gray order. Starting from the zero combination, each call step(i, s)
/// means "add basis(s) times generator i"; every combination is reached
/// exactly once, k^count - 1 steps in total.
template <class Step>
void gray_walk(const Field& f, std::size_t count, Step&& step) {
  const unsigned p = f.p(), r = f.r();
  const std::size_t digits = count * r;
  std::vector<unsigned> c(digits, 0);
  for (;;) {
    std::size_t j = 0;
    while (j < digits && c[j] == p - 1) c[j++] = 0;
    if (j == digits) return;
    ++c[j];
    if constexpr (std::is_same_v<decltype(step(j / r, j % r)), bool>) {
      if (!step(j / r, static_cast<unsigned>(j % r))) return;
    } else {
      step(j / r, static_cast<unsigned>(j % r));
    }
  }
}

/// Tracks the current coefficient of each generator during a gray_walk.
struct GrayState {
  const Field& f;
  std::vector<Elem> coeff;
  GrayState(const Field& field, std::size_t count) : f(field), coeff(count, 0) {}
  void apply(std::size_t i, unsigned s) { coeff[i] = f.add(coeff[i], f.basis(s)); }
};

inline void check_budget(unsigned k, std::size_t count, std::uint64_t budget) {
  std::uint64_t need = span_size(k, count);
  if (need > budget) throw SearchBudgetExceeded(need, budget);
}

}  // namespace fqdio
