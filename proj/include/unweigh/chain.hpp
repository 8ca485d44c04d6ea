/*
 * Copyright (c) 2025 the unweigh developers.
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <unweigh/common.hpp>
#include <unweigh/formula.hpp>

#include <vector>

namespace unweigh {

/**
 * A formula over m fresh variables a_1..a_m with exactly k models,
 * 1 <= k <= 2^m: write k in m bits c_1..c_m (c_m least significant) and
 * connect a_j to the tail with OR where c_j = 1, AND where c_j = 0,
 * truncating at the last set bit t. k = 2^m needs m+1 bits and is encoded
 * as the empty (tautological) formula instead.
 */
class ChainFormula {
 public:
  ChainFormula(BigInt k, int m, int first_var)
      : k_(std::move(k)), m_(m), first_var_(first_var) {
    if (m_ < 0) throw std::domain_error("chain: m must be non-negative");
    if (first_var_ < 1) throw std::domain_error("chain: first_var must be >= 1");
    if (k_ < 1 || k_ > pow2(m_))
      throw std::domain_error("chain: need 1 <= k <= 2^m");
    tautology_ = k_ == pow2(m_);
    t_ = tautology_ ? 0 : m_ - static_cast<int>(boost::multiprecision::lsb(k_));
  }

  const BigInt& k() const { return k_; }
  int m() const { return m_; }
  int first_var() const { return first_var_; }
  bool tautology() const { return tautology_; }

  /** Index of the last set bit; bits c_{t+1}..c_m are all zero. */
  int t() const { return t_; }

  /** The variable playing a_j, 1 <= j <= m. */
  int var(int j) const { return first_var_ + j - 1; }

  /** Bit c_j of k, 1 <= j <= m (c_m least significant). Chains only. */
  bool bit(int j) const {
    return boost::multiprecision::bit_test(k_, static_cast<unsigned>(m_ - j));
  }

 private:
  BigInt k_;
  int m_;
  int first_var_;
  bool tautology_;
  int t_;
};

inline ChainFormula build_chain(BigInt k, int m, int first_var) {
  return ChainFormula(std::move(k), m, first_var);
}

/**
 * CNF of (guard -> chain): distributing the guard into the chain's own CNF.
 * Reading the chain outside-in, OR-connected a_j accumulate into a prefix
 * of alternatives; each AND-connected a_j closes one clause containing the
 * negated guard, the prefix, and a_j. The walk stops at a_t, which closes
 * the final clause. A tautological chain contributes no clauses, making
 * the implication vacuous.
 */
inline std::vector<Clause> guarded_cnf(const ChainFormula& chain, Literal guard) {
  std::vector<Clause> out;
  if (chain.tautology()) return out;
  Clause prefix{negate(guard)};
  for (int j = 1; j < chain.t(); ++j) {
    if (chain.bit(j)) {
      prefix.push_back({chain.var(j), true});
    } else {
      Clause c = prefix;
      c.push_back({chain.var(j), true});
      out.push_back(std::move(c));
    }
  }
  prefix.push_back({chain.var(chain.t()), true});
  out.push_back(std::move(prefix));
  return out;
}

}  // namespace unweigh
