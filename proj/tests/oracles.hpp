#pragma once

// Independent reference computations used by the unit tests. None of these
// call into the library routine they check.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include <cachenet/rational.hpp>

namespace oracle {

using cachenet::Rational;

inline std::int64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t out = 1;
  for (int t = 1; t <= k; ++t) out = out * (n - k + t) / t;
  return out;
}

/// Adjacency straight from the connectivity rule: receiver i hears
/// transmitter j iff j - i in [0, L-1] (mod K for circular networks).
inline bool connected(int K, int L, bool circular, int i, int j) {
  if (circular) return ((j - i) % K + K) % K < L;
  return j >= i && j <= i + L - 1;
}

/// Optimal NDT of the placement LP via its dual. With one equality and one
/// inequality, the dual optimum is the lower convex envelope of the points
/// (cache_r/size_r, cost_r/size_r), read off at mu (slack lets any point with
/// abscissa <= mu stand alone).
inline Rational lp_value(int L, const Rational& mu) {
  struct P {
    Rational x, y;
  };
  std::vector<P> pts;
  for (int r = 0; r <= L; ++r) {
    Rational size = L * choose(L, r);
    Rational cache = r == 0 ? 0 : L * choose(L - 1, r - 1);
    Rational cost = r == L ? 0 : L * choose(L - 1, r) + choose(L - 1, r + 1);
    pts.push_back({cache / size, cost / size});
  }
  std::optional<Rational> best;
  auto offer = [&](const Rational& v) {
    if (!best || v < *best) best = v;
  };
  for (const auto& p : pts)
    if (p.x <= mu) offer(p.y);
  for (const auto& p : pts) {
    for (const auto& q : pts) {
      if (p.x < mu && mu < q.x) offer(p.y + (q.y - p.y) * (mu - p.x) / (q.x - p.x));
    }
  }
  return *best;
}

/// Rank over GF(p) by plain row reduction on a row-major copy.
inline std::size_t rank_mod(std::vector<std::vector<std::int64_t>> rows, std::int64_t p) {
  auto inv = [p](std::int64_t a) {
    std::int64_t result = 1, e = p - 2;
    a %= p;
    while (e) {
      if (e & 1) result = result * a % p;
      a = a * a % p;
      e >>= 1;
    }
    return result;
  };
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] % p == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    std::int64_t f = inv(rows[rank][c]);
    for (auto& v : rows[rank]) v = v * f % p;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == rank || rows[k][c] == 0) continue;
      std::int64_t m = rows[k][c];
      for (std::size_t t = 0; t < cols; ++t) rows[k][t] = ((rows[k][t] - m * rows[rank][t]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

}  // namespace oracle
