/*
 * Copyright (c) 2025 the unweigh developers.
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <unweigh/common.hpp>

#include <string>
#include <string_view>

namespace unweigh {

/**
 * Parses a weight literal: integer ("2"), fraction ("4/25") or decimal
 * ("0.16"). The result is exact; decimals are scaled by the matching power
 * of ten, never converted through floating point.
 */
inline Rational parse_weight(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw parse_error("malformed weight '" + std::string(text) + "'");
  };
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) return fail();
  auto all_digits = [](std::string_view t) {
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail();
    BigInt d{std::string(den)};
    if (d == 0)
      throw parse_error("weight '" + std::string(text) + "': denominator is zero");
    value = make_rational(BigInt{std::string(num)}, std::move(d));
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view intpart = s.substr(0, dot);
    std::string_view fracpart = s.substr(dot + 1);
    if (!intpart.empty() && !all_digits(intpart)) return fail();
    if (!fracpart.empty() && !all_digits(fracpart)) return fail();
    if (intpart.empty() && fracpart.empty()) return fail();
    BigInt scaled = intpart.empty() ? BigInt(0) : BigInt{std::string(intpart)};
    for (char c : fracpart) scaled = scaled * 10 + (c - '0');
    value = make_rational(std::move(scaled), pow10(static_cast<long>(fracpart.size())));
  } else {
    if (!all_digits(s)) return fail();
    value = Rational(BigInt{std::string(s)});
  }
  return negative ? -value : value;
}

/**
 * A raw numerator/denominator pair. Unlike Rational it is *not* reduced on
 * construction; mediant walks need the unreduced representation.
 */
struct Fraction {
  BigInt num;
  BigInt den;
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

inline Rational value_of(const Fraction& f) { return make_rational(f.num, f.den); }

inline Fraction mediant(const Fraction& lo, const Fraction& hi) {
  return {lo.num + hi.num, lo.den + hi.den};
}

/**
 * Fresh variables needed to encode weight p/q: ceil(max(log2 p, log2(q-p))),
 * with ceil(log2 1) = 0. Requires 0 < p < q.
 */
inline int bits_required(const BigInt& p, const BigInt& q) {
  if (p <= 0 || p >= q)
    throw std::domain_error("bits_required: need 0 < p < q");
  int a = ceil_log2(p);
  int b = ceil_log2(q - p);
  return a > b ? a : b;
}

/** True iff a/b is irreducible with a <= 2^m and b-a <= 2^m. */
inline bool is_mbit_fraction(const Fraction& f, int m) {
  if (m < 0) throw std::domain_error("is_mbit_fraction: m must be non-negative");
  if (f.den < 1 || f.num < 0 || f.num > f.den) return false;
  if (boost::multiprecision::gcd(f.num, f.den) != 1) return false;
  const BigInt bound = pow2(m);
  return f.num <= bound && f.den - f.num <= bound;
}

/**
 * Nearest m-bit fraction to p/q in [0,1]: a Stern-Brocot mediant walk from
 * (0/1, 1/1). Every mediant is irreducible, so if the walk reaches p/q
 * within the bit bounds, p/q reduced is itself m-bit and is returned.
 * Otherwise the first out-of-bounds mediant pins the answer to one of the
 * two enclosing endpoints; ties prefer the smaller denominator, then the
 * smaller value. Endpoints 0/1 and 1/1 are returned for p = 0 and p = q.
 */
inline Fraction nearest_mbit_fraction(const BigInt& p, const BigInt& q, int m) {
  if (q < 1 || p < 0 || p > q)
    throw std::domain_error("nearest_mbit_fraction: need 0 <= p <= q, q >= 1");
  if (m < 0) throw std::domain_error("nearest_mbit_fraction: m must be non-negative");
  if (p == 0) return {0, 1};
  if (p == q) return {1, 1};

  const BigInt bound = pow2(m);
  Fraction lo{0, 1};
  Fraction hi{1, 1};
  for (;;) {
    Fraction mid = mediant(lo, hi);
    if (mid.num > bound || mid.den - mid.num > bound) break;
    const BigInt lhs = mid.num * q;
    const BigInt rhs = p * mid.den;
    if (lhs == rhs) {
      BigInt g = boost::multiprecision::gcd(p, q);
      return {p / g, q / g};
    }
    if (lhs < rhs)
      lo = mid;
    else
      hi = mid;
  }
  // |p/q - a/b| compared via cross-multiplication against the common
  // denominator q*lo.den*hi.den.
  const BigInt d_lo = boost::multiprecision::abs(p * lo.den - lo.num * q) * hi.den;
  const BigInt d_hi = boost::multiprecision::abs(p * hi.den - hi.num * q) * lo.den;
  if (d_lo != d_hi) return d_lo < d_hi ? lo : hi;
  if (lo.den != hi.den) return lo.den < hi.den ? lo : hi;
  return lo;  // same distance, same denominator: lo is the smaller value
}

}  // namespace unweigh
