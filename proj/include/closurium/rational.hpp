#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

#include "closurium/errors.hpp"

namespace closurium {

// Exact rational arithmetic for Markov rows and thresholds. Closure tests of
// the form p <= row-sum must never go through floating point.
using rational = boost::rational<long long>;

// Accepts "num/den" or a bare integer. Whitespace is not allowed.
inline rational parse_rational(const std::string& text) {
  auto parse_int = [&](const std::string& s) -> long long {
    if (s.empty()) throw validation_error("empty rational component in '" + text + "'");
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw validation_error("bad rational '" + text + "'");
    }
    if (pos != s.size()) throw validation_error("bad rational '" + text + "'");
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string::npos) return rational(parse_int(text));
  long long num = parse_int(text.substr(0, slash));
  long long den = parse_int(text.substr(slash + 1));
  if (den == 0) throw validation_error("zero denominator in '" + text + "'");
  return rational(num, den);
}

inline std::string to_string(const rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

} // namespace closurium
