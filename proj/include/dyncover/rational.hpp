// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact rational arithmetic used throughout the solver core.  All set-function
// values, costs, and move-legality checks are carried out over arbitrary
// precision rationals; floating point appears only in potentials, reported
// metrics, and bound constants that involve transcendental quantities.

#ifndef DYNCOVER_RATIONAL_HPP_
#define DYNCOVER_RATIONAL_HPP_

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <stdexcept>
#include <string>

namespace dyncover {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Fixed rational stand-ins for e and e^2, used when a trade-off parameter is
// requested by token.  Both sit within 1e-18 below the true constant, so
// exact comparisons against them are stable and reproducible.
inline const Rat& rat_e() {
  static const Rat value{BigInt("2718281828459045235"),
                         BigInt("1000000000000000000")};
  return value;
}

inline const Rat& rat_e2() {
  static const Rat value{BigInt("7389056098930650227"),
                         BigInt("1000000000000000000")};
  return value;
}

// Lossy conversion for reporting and potential evaluation.
inline double to_double(const Rat& value) { return value.convert_to<double>(); }

// Canonical "p/q" (or plain integer) rendering, stable across platforms.
inline std::string to_string(const Rat& value) { return value.str(); }

// Parses "p/q", plain integers, and decimal strings such as "-3.25" into an
// exact rational.  Throws std::invalid_argument on malformed input.
inline Rat parse_rational(const std::string& text) {
  const auto fail = [&text]() -> Rat {
    throw std::invalid_argument("malformed rational: '" + text + "'");
  };
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    digits.push_back(text[i++]);
  }
  if (digits.empty()) return fail();
  if (i == text.size()) {
    Rat r{BigInt(digits)};
    return negative ? -r : r;
  }
  if (text[i] == '/') {
    std::string denom = text.substr(i + 1);
    if (denom.empty()) return fail();
    for (char c : denom) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return fail();
    }
    BigInt q{denom};
    if (q == 0) return fail();
    Rat r{BigInt(digits), q};
    return negative ? -r : r;
  }
  if (text[i] == '.') {
    ++i;
    std::string frac;
    while (i < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[i]))) {
      frac.push_back(text[i++]);
    }
    if (i != text.size() || frac.empty()) return fail();
    BigInt scale = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
    Rat r{BigInt(digits) * scale + BigInt(frac), scale};
    return negative ? -r : r;
  }
  return fail();
}

// Parses a trade-off parameter: the tokens "e" and "e2" map to rat_e() and
// rat_e2(); anything else goes through parse_rational.
inline Rat parse_gamma(const std::string& text) {
  if (text == "e") return rat_e();
  if (text == "e2") return rat_e2();
  return parse_rational(text);
}

}  // namespace dyncover

#endif  // DYNCOVER_RATIONAL_HPP_
