/*
 * Copyright (c) 2025 the unweigh developers.
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

namespace unweigh {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/** Malformed input text (DIMACS structure, weight syntax, ...). */
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** External counter failure; carries the child's exit code and output. */
struct backend_error : std::runtime_error {
  backend_error(const std::string& what, int exit_code_, std::string output_)
      : std::runtime_error(what), exit_code(exit_code_), output(std::move(output_)) {}
  int exit_code;
  std::string output;
};

/** Projection set too large for the built-in exact counter. */
struct cap_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline BigInt pow2(int m) { return BigInt(1) << m; }

/** Smallest m with x <= 2^m, for x >= 1. Integer-only; never a float log. */
inline int ceil_log2(const BigInt& x) {
  if (x <= 0) throw std::domain_error("ceil_log2: argument must be positive");
  if (x == 1) return 0;
  return static_cast<int>(boost::multiprecision::msb(BigInt(x - 1))) + 1;
}

/** Canonical rational from a possibly sign-denormal pair. */
inline Rational make_rational(BigInt num, BigInt den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(std::move(num), std::move(den));
}

inline BigInt pow10(long k) {
  BigInt r = 1;
  for (long i = 0; i < k; ++i) r *= 10;
  return r;
}

/**
 * Exact scientific rendering of a rational, e.g. 5/6 -> "8.33333333333333e-01".
 * Digits are extracted with integer arithmetic only; the last digit is
 * rounded half up.
 */
inline std::string to_scientific(const Rational& v, int significant = 15) {
  if (significant < 1) throw std::domain_error("to_scientific: need significant >= 1");
  if (v == 0) return "0";
  BigInt n = boost::multiprecision::abs(numerator(v));
  BigInt d = denominator(v);
  auto digits10 = [](const BigInt& x) { return static_cast<long>(x.str().size()); };
  // 10^e <= n/d < 10^{e+1}; bracket by digit counts, then adjust.
  long e = digits10(n) - digits10(d);
  auto at_least = [&](long exp) {  // n/d >= 10^exp
    if (exp >= 0) return n >= d * pow10(exp);
    return n * pow10(-exp) >= d;
  };
  while (!at_least(e)) --e;
  while (at_least(e + 1)) ++e;
  long k = significant - 1 - e;
  BigInt num = n, den = d;
  if (k >= 0)
    num *= pow10(k);
  else
    den *= pow10(-k);
  BigInt mant = (2 * num + den) / (2 * den);
  if (digits10(mant) > significant) {  // 9.99... rounded up a decade
    mant /= 10;
    ++e;
  }
  std::string digits = mant.str();
  std::string out;
  if (v < 0) out += '-';
  out += digits.substr(0, 1);
  if (significant > 1) {
    out += '.';
    out += digits.substr(1);
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "e%+03ld", e);
  out += buf;
  return out;
}

/**
 * Exact plain-decimal rendering when the denominator divides a power of ten
 * (e.g. 4/5 -> "0.8"); falls back to scientific notation otherwise.
 */
inline std::string to_decimal(const Rational& v) {
  BigInt n = numerator(v);
  BigInt d = denominator(v);
  if (d == 1) return n.str();
  BigInt rest = d;
  long a = 0, b = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++a;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++b;
  }
  if (rest != 1) return to_scientific(v);
  long k = a > b ? a : b;
  BigInt scaled = boost::multiprecision::abs(n) * pow10(k) / d;
  std::string digits = scaled.str();
  if (static_cast<long>(digits.size()) <= k)
    digits.insert(0, k + 1 - digits.size(), '0');
  digits.insert(digits.size() - k, ".");
  while (digits.back() == '0') digits.pop_back();
  if (digits.back() == '.') digits.pop_back();
  return (n < 0 ? "-" : "") + digits;
}

}  // namespace unweigh
