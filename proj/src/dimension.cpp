#include "fqdio/dimension.hpp"

#include "fqdio/approx.hpp"
#include "fqdio/enumerate.hpp"
#include "fqdio/errors.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace fqdio {

namespace {

void check_unit_open(const Rational& x, const char* what) {
  if (x <= 0 || x >= 1) throw std::invalid_argument(std::string(what) + " must lie in (0, 1)");
}

std::uint64_t ipow(std::uint64_t b, long e) {
  std::uint64_t r = 1;
  for (long i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

PackingCount packing_count(const Rational& beta, std::size_t m, std::size_t n, unsigned k) {
  check_unit_open(beta, "beta");
  const long mn = static_cast<long>(m * n);
  PackingCount pc;
  pc.beta = beta;
  const long g = floor_log_k(beta, k);
  pc.i = g + 1;
  pc.coarse_count_exp = (-pc.i - 1) * mn;
  pc.max_count_exp = std::max(0L, floor_log_k(1 - beta, k) - g) * mn;
  pc.coarse_count = k_power(k, pc.coarse_count_exp);
  pc.max_count = boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(pc.max_count_exp));
  return pc;
}

std::vector<FormalBall> packing_in(const FormalBall& w, const Rational& ratio) {
  check_unit_open(ratio, "ratio");
  const FieldRef& f = w.center.field();
  const unsigned k = f->k();
  const Rational inner = ratio * w.radius;
  const long g = floor_log_k(inner, k);
  const long hi = floor_log_k(w.radius - inner, k);
  const long digits = std::max(0L, hi - g);
  const std::size_t rows = w.center.rows(), cols = w.center.cols(), entries = rows * cols;
  const long total = digits * static_cast<long>(entries);
  if (static_cast<double>(total) * std::log2(double(k)) > 24)
    throw SearchBudgetExceeded(total * std::log2(double(k)) > 62 ? UINT64_MAX : ipow(k, total), std::uint64_t(1) << 24);
  std::vector<FormalBall> out;
  const std::uint64_t count = ipow(k, total);
  out.reserve(count);
  std::vector<Elem> d(static_cast<std::size_t>(digits));
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    SeriesMatrix c = w.center;
    std::uint64_t x = idx;
    for (std::size_t e = 0; e < entries; ++e) {
      for (auto& v : d) {
        v = static_cast<Elem>(x % k);
        x /= k;
      }
      if (digits > 0) c(e / cols, e % cols) = c(e / cols, e % cols) + LaurentSeries::from_digits(f, hi, d);
    }
    out.push_back({std::move(c), inner});
  }
  return out;
}

std::vector<FormalBall> packing_centers(const Rational& beta, std::size_t m, std::size_t n, FieldRef f) {
  return packing_in({SeriesMatrix(std::move(f), m, n), Rational(1)}, beta);
}

bool balls_intersect(const FormalBall& a, const FormalBall& b) {
  const unsigned k = a.center.field()->k();
  return sup_distance(a.center, b.center) <= k_power(k, std::max(a.effective_exp(), b.effective_exp()));
}

DimBound dim_lower_bound(const Rational& alpha, const Rational& beta, std::size_t m, std::size_t n, unsigned k) {
  check_unit_open(alpha, "alpha");
  auto pc = packing_count(beta, m, n, k);
  DimBound d;
  d.log_count_exp = pc.max_count_exp;
  const Rational ab = alpha * beta;
  long e = 0;
  if (is_k_power(ab, k, &e)) d.exact = Rational(pc.max_count_exp, -e);
  d.value = d.exact ? to_double(*d.exact)
                    : static_cast<double>(pc.max_count_exp) * std::log(double(k)) / -std::log(to_double(ab));
  return d;
}

Rational digit_map(const GameTranscript& t, const std::vector<std::size_t>& labels, std::size_t branching) {
  if (branching == 0) throw std::invalid_argument("branching must be positive");
  std::size_t depth = 0;
  for (std::size_t i = 1; i < t.moves.size(); ++i)
    if (t.moves[i].player == Player::Black) ++depth;
  depth = std::min(depth, labels.size());
  Rational v = 0, scale = 1;
  for (std::size_t l = 0; l < depth; ++l) {
    if (labels[l] >= branching)
      throw BranchOutOfRange("branch " + std::to_string(labels[l]) + " at depth " + std::to_string(l + 1) +
                             " with " + std::to_string(branching) + " branches");
    scale /= branching;
    v += scale * labels[l];
  }
  return v;
}

CoverEntry cover_entry(const FormalBall& ball, const Rational& alpha, const Rational& beta) {
  const Rational x = alpha * beta, target = 2 * ball.radius;
  check_unit_open(x, "alpha beta");
  long j = 0;
  Rational p = 1;
  if (target <= 1) {
    while (p * x >= target) {
      p *= x;
      ++j;
    }
  } else {
    while (p < target) {
      p /= x;
      --j;
    }
  }
  return {ball, j};
}

std::optional<Rational> SLength::exact() const {
  if (!symbolic()) return std::nullopt;
  Rational s = 0;
  for (const auto& [e, c] : terms) {
    if (denominator(e) != 1) return std::nullopt;
    s += Rational(c) * k_power(k, static_cast<long>(numerator(e)));
  }
  return s;
}

double SLength::approx() const {
  double s = other;
  for (const auto& [e, c] : terms) s += c.convert_to<double>() * std::pow(double(k), to_double(e));
  return s;
}

SLength cover_s_length(const std::vector<CoverEntry>& cover, const Rational& s) {
  if (s < 0) throw std::invalid_argument("s must be nonnegative");
  SLength out;
  if (!cover.empty()) out.k = cover.front().ball.center.field()->k();
  for (const auto& c : cover) {
    long e = 0;
    if (is_k_power(c.ball.radius, out.k, &e)) out.terms[Rational(e) * s] += 1;
    else out.other += std::pow(to_double(c.ball.radius), to_double(s));
  }
  return out;
}

std::vector<BoxCountRow> box_count_bad(Magnitude K, long cap_exp, long t, std::size_t m, std::size_t n, FieldRef f,
                                       unsigned threads, std::uint64_t budget) {
  if (cap_exp < 0) throw std::invalid_argument("height cap below 1");
  if (t < 1) throw std::invalid_argument("resolution must be positive");
  const unsigned k = f->k();
  const std::size_t entries = m * n;
  const std::uint64_t per_cell = span_size(k, m * static_cast<std::size_t>(cap_exp + 1)) * (cap_exp + 1);
  std::uint64_t need = 0;
  for (long r = 1; r <= t; ++r) {
    long digits = r * static_cast<long>(entries);
    if (digits * std::log2(double(k)) > 62) throw SearchBudgetExceeded(UINT64_MAX, budget);
    need += ipow(k, digits) * (K.is_zero() ? 1 : per_cell);
    if (need > budget) throw SearchBudgetExceeded(need, budget);
  }
  threads = std::max(1u, threads);
  std::vector<BoxCountRow> rows;
  for (long r = 1; r <= t; ++r) {
    const std::uint64_t cells = ipow(k, r * static_cast<long>(entries));
    std::atomic<std::uint64_t> alive{0};
    auto work = [&](std::uint64_t lo, std::uint64_t hi) {
      std::uint64_t local = 0;
      std::vector<Elem> d(static_cast<std::size_t>(r));
      for (std::uint64_t idx = lo; idx < hi; ++idx) {
        if (K.is_zero()) {
          ++local;
          continue;
        }
        SeriesMatrix a(f, m, n);
        std::uint64_t x = idx;
        for (std::size_t e = 0; e < entries; ++e) {
          for (auto& v : d) {
            v = static_cast<Elem>(x % k);
            x /= k;
          }
          a(e / n, e % n) = LaurentSeries::from_digits(f, -1, d);
        }
        try {
          if (badness_constant(a, cap_exp, per_cell, -r).constant >= K) ++local;
        } catch (const PrecisionExhausted&) {
        }
      }
      alive += local;
    };
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (cells + threads - 1) / threads;
    for (unsigned i = 0; i < threads; ++i) {
      std::uint64_t lo = i * chunk, hi = std::min(cells, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
    BoxCountRow row;
    row.resolution = r;
    row.cells_total = cells;
    row.cells_surviving = alive.load();
    row.empirical_dim = alive ? std::log(double(alive.load())) / (static_cast<double>(r) * std::log(double(k))) : 0;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fqdio
