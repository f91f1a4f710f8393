#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace cachenet {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// "num/den" with a positive denominator; zero is "0/1".
inline std::string to_string(const Rational& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

/// Accepts "num/den" or a bare integer "num".
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    if (s.empty()) throw Error(ErrorCode::invalid_argument, "bad rational '" + std::string(text) + "'");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) throw Error(ErrorCode::invalid_argument, "bad rational '" + std::string(text) + "'");
    for (std::size_t k = start; k < s.size(); ++k) {
      if (s[k] < '0' || s[k] > '9')
        throw Error(ErrorCode::invalid_argument, "bad rational '" + std::string(text) + "'");
    }
    return Integer(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  Integer num = parse_int(text.substr(0, slash));
  Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorCode::invalid_argument, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// C(n, k), zero outside 0 <= k <= n.
inline std::int64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t result = 1;
  for (int t = 1; t <= k; ++t) result = result * (n - k + t) / t;
  return result;
}

inline Integer ipow(const Integer& base, unsigned exp) {
  Integer result = 1;
  for (unsigned k = 0; k < exp; ++k) result *= base;
  return result;
}

}  // namespace cachenet
