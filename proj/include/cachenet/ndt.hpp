#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "placement.hpp"
#include "rational.hpp"

namespace cachenet::ndt {

using cachenet::to_string;
using placement::SplittingRatios;

/// c_r = L C(L-1,r) + C(L-1,r+1): delivery time of group r per unit of a_r.
inline std::int64_t group_cost(int L, int r) {
  if (L < 1 || r < 0 || r > L - 1)
    throw Error(ErrorCode::invalid_level, "group level r=" + std::to_string(r) + " outside [0, " + std::to_string(L - 1) + "]");
  return L * binomial(L - 1, r) + binomial(L - 1, r + 1);
}

/// Coefficients of the placement LP. The defaults are the scheme's; tests
/// substitute perturbed ones to check that the acceptance battery notices.
struct SchemeCoefficients {
  std::function<std::int64_t(int L, int r)> cost = [](int L, int r) { return r == L ? 0 : group_cost(L, r); };
  std::function<std::int64_t(int L, int r)> size = [](int L, int r) { return L * binomial(L, r); };
  std::function<std::int64_t(int L, int r)> cache = [](int L, int r) { return r == 0 ? 0 : L * binomial(L - 1, r - 1); };
};

struct NdtSolution {
  int L = 1;
  Rational mu_r;
  Rational mu_t;
  SplittingRatios ratios;
  Rational tau_ub;
  Rational tau_lb;
  std::optional<Rational> gap;  // empty when both bounds are zero (mu_R = 1)
  std::vector<std::string> binding_constraints;
  std::vector<std::string> warnings;
};

inline Rational lower_bound(const Rational& mu_r) { return 1 - mu_r; }

namespace detail {

inline std::vector<int> support(const std::vector<Rational>& x) {
  std::vector<int> out;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] != 0) out.push_back(static_cast<int>(k));
  }
  return out;
}

}  // namespace detail

/// Minimizes sum_r c_r a_r subject to the file-size equality and the
/// receiver-cache inequality, exactly. Two constraint rows means every vertex
/// of {a_0..a_L, slack} has at most two nonzero coordinates, so the vertices
/// are enumerated pairwise. Ties go to the lexicographically smallest support.
inline NdtSolution optimize(int L, Rational mu_r, Rational mu_t = 1, const SchemeCoefficients& coeffs = {}) {
  if (L < 1) throw Error(ErrorCode::invalid_connectivity, "L must be positive");
  NdtSolution sol;
  sol.L = L;
  if (mu_r < 0) throw Error(ErrorCode::out_of_region, "mu_R " + to_string(mu_r) + " is negative");
  if (mu_r > 1) {
    sol.warnings.push_back("mu_R " + to_string(mu_r) + " clamped to 1");
    mu_r = 1;
  }
  if (mu_t > 1) {
    sol.warnings.push_back("mu_T " + to_string(mu_t) + " clamped to 1");
    mu_t = 1;
  }
  if (mu_t < Rational(1, L))
    throw Error(ErrorCode::out_of_region, "mu_T " + to_string(mu_t) + " below 1/L = 1/" + std::to_string(L));
  sol.mu_r = mu_r;
  sol.mu_t = mu_t;

  const int vars = L + 2;  // a_0..a_L, slack
  std::vector<Rational> cost(vars), size_row(vars), cache_row(vars);
  for (int r = 0; r <= L; ++r) {
    cost[r] = coeffs.cost(L, r);
    size_row[r] = coeffs.size(L, r);
    cache_row[r] = coeffs.cache(L, r);
  }
  cache_row[L + 1] = 1;

  std::optional<std::vector<Rational>> best;
  Rational best_cost;
  std::vector<int> best_support;
  for (int p = 0; p < vars; ++p) {
    for (int q = p + 1; q < vars; ++q) {
      Rational det = size_row[p] * cache_row[q] - size_row[q] * cache_row[p];
      if (det == 0) continue;
      Rational xp = (cache_row[q] - size_row[q] * mu_r) / det;
      Rational xq = (size_row[p] * mu_r - cache_row[p]) / det;
      if (xp < 0 || xq < 0) continue;
      std::vector<Rational> x(vars);
      x[p] = xp;
      x[q] = xq;
      Rational value = cost[p] * xp + cost[q] * xq;
      auto sup = detail::support(x);
      if (!best || value < best_cost || (value == best_cost && sup < best_support)) {
        best = std::move(x);
        best_cost = value;
        best_support = std::move(sup);
      }
    }
  }
  if (!best) throw Error(ErrorCode::infeasible, "no feasible splitting for L=" + std::to_string(L) + " mu_R=" + to_string(mu_r));

  sol.ratios.a.assign(best->begin(), best->begin() + L + 1);
  sol.tau_ub = best_cost;
  sol.tau_lb = lower_bound(mu_r);
  if (sol.tau_lb > 0) sol.gap = sol.tau_ub / sol.tau_lb;
  sol.binding_constraints.push_back("file-size");
  if ((*best)[L + 1] == 0) sol.binding_constraints.push_back("receiver-cache");
  return sol;
}

/// Upper bound over the ratio of achievable to lower-bound NDT; empty when
/// mu_R = 1, where both are zero.
inline std::optional<Rational> gap(int L, const Rational& mu_r) { return optimize(L, mu_r).gap; }

/// Piecewise closed form of the achievable NDT for L = 3.
inline Rational closed_form_L3(const Rational& mu_r) {
  if (mu_r < 0 || mu_r > 1) throw Error(ErrorCode::out_of_region, "mu_R outside [0, 1]");
  if (mu_r < Rational(1, 3)) return Rational(5, 3) - Rational(8, 3) * mu_r;
  if (mu_r < Rational(2, 3)) return Rational(11, 9) - Rational(4, 3) * mu_r;
  return 1 - mu_r;
}

struct IntegerPoint {
  SplittingRatios ratios;
  Rational mu_r;
  Rational tau;
};

/// Single-ratio placement at mu_R = l/L: a_l = 1/(L C(L,l)); NDT is
/// (1 - 1/L + 1/(1 + L mu_R)) (1 - mu_R).
inline IntegerPoint integer_point(int L, int l) {
  if (L < 1 || l < 0 || l > L)
    throw Error(ErrorCode::invalid_argument, "integer point l=" + std::to_string(l) + " outside [0, " + std::to_string(L) + "]");
  IntegerPoint out;
  out.ratios.a.assign(L + 1, Rational(0));
  out.ratios.a[l] = Rational(1, L * binomial(L, l));
  out.mu_r = Rational(l, L);
  out.tau = (1 - Rational(1, L) + 1 / (1 + L * out.mu_r)) * (1 - out.mu_r);
  return out;
}

/// mu_R = k/(points-1) for k = 0..points-1 (just 0 when points == 1).
inline std::vector<Rational> mu_grid(int points) {
  if (points < 1) throw Error(ErrorCode::invalid_argument, "need at least one grid point");
  std::vector<Rational> out;
  for (int k = 0; k < points; ++k) out.push_back(points == 1 ? Rational(0) : Rational(k, points - 1));
  return out;
}

inline std::vector<NdtSolution> sweep(int L, int points, const Rational& mu_t = 1) {
  std::vector<NdtSolution> out;
  for (const auto& mu : mu_grid(points)) out.push_back(optimize(L, mu, mu_t));
  return out;
}

}  // namespace cachenet::ndt
