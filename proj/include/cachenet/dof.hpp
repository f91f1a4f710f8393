#pragma once

#include <string>

#include "error.hpp"
#include "rational.hpp"

namespace cachenet::alignment {

inline void check_level(int L, int r) {
  if (L < 1 || r < 0 || r > L - 1)
    throw Error(ErrorCode::invalid_level,
                "group level r=" + std::to_string(r) + " outside [0, " + std::to_string(L - 1) + "]");
}

/// Number of interference channels per message set, (K+L-1)(L-r-1); also the
/// exponent of n in the symbol-extension length.
inline int extension_exponent(int K, int L, int r) { return (K + L - 1) * (L - r - 1); }

inline Integer desired_columns(int K, int L, int r, int n) {
  return binomial(L - 1, r) * L * ipow(Integer(n), extension_exponent(K, L, r));
}

inline Integer interference_columns(int K, int L, int r, int n) {
  return binomial(L - 1, r + 1) * ipow(Integer(n + 1), extension_exponent(K, L, r));
}

/// T_n = L C(L-1,r) n^E + C(L-1,r+1) (n+1)^E.
inline Integer symbol_extension(int K, int L, int r, int n) {
  check_level(L, r);
  if (n < 1) throw Error(ErrorCode::invalid_argument, "construction depth n must be >= 1");
  return desired_columns(K, L, r, n) + interference_columns(K, L, r, n);
}

/// Per-user DoF reached with depth n: desired dimensions over T_n.
inline Rational dof_finite(int K, int L, int r, int n) {
  return Rational(desired_columns(K, L, r, n), symbol_extension(K, L, r, n));
}

/// Limit of dof_finite as n grows: L(r+1) / (L(r+1) + L - r - 1).
inline Rational dof_limit(int L, int r) {
  check_level(L, r);
  return Rational(L * (r + 1), L * (r + 1) + L - r - 1);
}

}  // namespace cachenet::alignment
