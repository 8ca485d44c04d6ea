/*
 * Copyright (c) 2025 the unweigh developers.
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <unweigh/count.hpp>
#include <unweigh/reduce.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace unweigh::selftest {

struct SuiteResult {
  std::string name;
  long checks = 0;
  long failures = 0;
  std::string counterexample;  // first failure only
};

namespace detail {

/** Truth-table clause evaluation, independent of the DPLL engine. */
inline bool eval_clauses(const std::vector<Clause>& clauses, unsigned long long mask) {
  for (const Clause& c : clauses) {
    bool sat = false;
    for (Literal l : c) {
      bool val = (mask >> (l.var - 1)) & 1u;
      if (val == l.positive) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

/** Projected model count over all 2^num_vars assignments. */
inline BigInt brute_projected_count(int num_vars, const std::vector<Clause>& clauses,
                                    const std::vector<int>& projection) {
  std::vector<char> seen(1ull << projection.size(), 0);
  for (unsigned long long mask = 0; mask < (1ull << num_vars); ++mask) {
    if (!eval_clauses(clauses, mask)) continue;
    unsigned long long key = 0;
    for (size_t i = 0; i < projection.size(); ++i)
      key |= ((mask >> (projection[i] - 1)) & 1u) << i;
    seen[key] = 1;
  }
  BigInt n = 0;
  for (char s : seen) n += s;
  return n;
}

/** Weighted count over all full assignments, projected per the formula. */
inline Rational brute_weighted_count(const WeightedFormula& f) {
  std::vector<char> seen(1ull << f.sampling_set.size(), 0);
  for (unsigned long long mask = 0; mask < (1ull << f.num_vars); ++mask) {
    if (!eval_clauses(f.clauses, mask)) continue;
    unsigned long long key = 0;
    for (size_t i = 0; i < f.sampling_set.size(); ++i)
      key |= ((mask >> (f.sampling_set[i] - 1)) & 1u) << i;
    seen[key] = 1;
  }
  Rational total = 0;
  for (unsigned long long key = 0; key < seen.size(); ++key) {
    if (!seen[key]) continue;
    Rational w = 1;
    for (size_t i = 0; i < f.sampling_set.size(); ++i) {
      auto it = f.weights.find(f.sampling_set[i]);
      if (it == f.weights.end()) continue;
      w *= (key >> i) & 1u ? it->second.pos : it->second.neg;
    }
    total += w;
  }
  return total;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  int uniform(int lo, int hi) {  // inclusive
    return static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1)) + lo;
  }
};

/** Random instance small enough to brute-force. */
inline WeightedFormula random_instance(Rng& rng, int max_vars, int max_fresh_total) {
  WeightedFormula f;
  f.num_vars = rng.uniform(1, max_vars);
  int num_clauses = rng.uniform(1, 20);
  for (int i = 0; i < num_clauses; ++i) {
    Clause c;
    int len = rng.uniform(1, 3);
    for (int j = 0; j < len; ++j)
      c.push_back({rng.uniform(1, f.num_vars), rng.uniform(0, 1) == 1});
    f.clauses.push_back(c);
  }
  int proj = rng.uniform(1, std::min(f.num_vars, 6));
  std::vector<int> vars(f.num_vars);
  for (int v = 1; v <= f.num_vars; ++v) vars[v - 1] = v;
  for (int i = 0; i < proj; ++i)
    std::swap(vars[i], vars[rng.uniform(i, f.num_vars - 1)]);
  vars.resize(proj);
  std::sort(vars.begin(), vars.end());
  f.sampling_set = vars;
  int fresh_budget = max_fresh_total - proj;
  for (int v : f.sampling_set) {
    if (rng.uniform(0, 3) == 0) continue;  // leave some variables unweighted
    int q = rng.uniform(2, 16);
    int p = rng.uniform(1, q - 1);
    BigInt g = boost::multiprecision::gcd(BigInt(p), BigInt(q));
    int m = bits_required(BigInt(p) / g, BigInt(q) / g);
    if (m > fresh_budget) continue;
    fresh_budget -= m;
    Rational w = make_rational(p, q);
    f.weights.emplace(v, WeightPair{w, 1 - w});
  }
  return f;
}

}  // namespace detail

/** Chains over m variables have exactly k models; guards are vacuous when false. */
inline SuiteResult chain_count_suite() {
  SuiteResult res;
  res.name = "chain-count";
  for (int m = 0; m <= 8; ++m) {
    for (BigInt k = 1; k <= pow2(m); ++k) {
      ++res.checks;
      ChainFormula chain = build_chain(k, m, 2);
      auto clauses = guarded_cnf(chain, Literal{1, true});
      // count over guard var 1 (fixed true) and chain vars 2..m+1
      BigInt got = 0;
      for (unsigned long long mask = 0; mask < (1ull << m); ++mask)
        if (detail::eval_clauses(clauses, (mask << 1) | 1u)) ++got;
      if (got != k && res.failures++ == 0) {
        std::ostringstream os;
        os << "guarded chain k=" << k << " m=" << m << ": counted " << got;
        res.counterexample = os.str();
      }
      if (m <= 5) {
        ++res.checks;
        BigInt vac = 0;
        for (unsigned long long mask = 0; mask < (1ull << m); ++mask)
          if (detail::eval_clauses(clauses, mask << 1)) ++vac;
        if (vac != pow2(m) && res.failures++ == 0) {
          std::ostringstream os;
          os << "false guard k=" << k << " m=" << m << ": counted " << vac
             << ", want " << pow2(m);
          res.counterexample = os.str();
        }
      }
    }
  }
  return res;
}

/** nearest_mbit_fraction returns a best fraction per brute enumeration. */
inline SuiteResult farey_suite(std::uint64_t seed) {
  SuiteResult res;
  res.name = "farey-nearest";
  detail::Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  auto check = [&](long long p, long long q, int m) {
    ++res.checks;
    Fraction got = nearest_mbit_fraction(BigInt(p), BigInt(q), m);
    if (p != 0 && p != q && !is_mbit_fraction(got, m)) {
      if (res.failures++ == 0)
        res.counterexample = "result for " + std::to_string(p) + "/" + std::to_string(q) +
                             " m=" + std::to_string(m) + " is not an m-bit fraction";
      return;
    }
    // distance comparison: |p/q - a/b| via cross-multiplication
    auto dist_num = [&](long long a, long long b) {  // |p*b - a*q|, scaled by b below
      long long d = p * b - a * q;
      return d < 0 ? -d : d;
    };
    long long bound = 1ll << m;
    long long best_num = -1, best_den = 1;
    for (long long b = 1; b <= 2 * bound; ++b) {
      for (long long a = std::max(0ll, b - bound); a <= std::min(b, bound); ++a) {
        if (std::gcd(a, b) != 1) continue;
        if (best_num < 0 ||
            dist_num(a, b) * best_den < dist_num(best_num, best_den) * b) {
          best_num = a;
          best_den = b;
        }
      }
    }
    BigInt got_dist = boost::multiprecision::abs(BigInt(p) * got.den - got.num * BigInt(q)) *
                      BigInt(best_den);
    BigInt best_dist = BigInt(dist_num(best_num, best_den)) * got.den;
    if (got_dist != best_dist && res.failures++ == 0) {
      std::ostringstream os;
      os << "nearest to " << p << "/" << q << " with m=" << m << ": got " << got.num
         << "/" << got.den << ", brute force found " << best_num << "/" << best_den;
      res.counterexample = os.str();
    }
  };
  for (int m = 0; m <= 3; ++m)
    for (long long q = 1; q <= 40; ++q)
      for (long long p = 0; p <= q; ++p) check(p, q, m);
  for (int i = 0; i < 300; ++i) {
    long long q = rng.uniform(1, 1000);
    long long p = rng.uniform(0, static_cast<int>(q));
    check(p, q, rng.uniform(0, 6));
  }
  return res;
}

/** Reduction + exact projected count reproduces the weighted count exactly. */
inline SuiteResult reduction_suite(std::uint64_t seed) {
  SuiteResult res;
  res.name = "reduction-exact";
  detail::Rng rng(seed ^ 0x517cc1b727220a95ull);
  for (int i = 0; i < 120; ++i) {
    ++res.checks;
    WeightedFormula f = detail::random_instance(rng, 8, 14);
    Reduction r = reduce(f);
    BigInt raw = exact_projected_count(r.reduced.num_vars, r.reduced.clauses,
                                       r.projection_set);
    Rational got = make_rational(raw, r.c_w);
    Rational want = detail::brute_weighted_count(f);
    int fresh = 0;
    for (const auto& row : r.per_var) fresh += row.m;
    bool var_accounting = r.reduced.num_vars == f.num_vars + fresh &&
                          fresh == r.total_fresh;
    if ((got != want || !var_accounting) && res.failures++ == 0) {
      std::ostringstream os;
      os << "instance " << i << ": reduction gives " << got << ", brute force " << want;
      res.counterexample = os.str() + "\n" + emit(f);
    }
  }
  return res;
}

/** Adjusted counts stay within the certified factor 1 + gamma. */
inline SuiteResult gamma_suite(std::uint64_t seed) {
  SuiteResult res;
  res.name = "gamma-sound";
  detail::Rng rng(seed ^ 0x2545f4914f6cdd1dull);
  for (int i = 0; i < 60; ++i) {
    WeightedFormula f = detail::random_instance(rng, 6, 12);
    Rational w_true = detail::brute_weighted_count(f);
    auto within = [&](const Rational& w_adj, const Rational& gamma) {
      Rational blow = 1 + gamma;
      return w_true <= blow * w_adj && w_adj <= blow * w_true;
    };
    for (int bits = 1; bits <= 3; ++bits) {
      ++res.checks;
      DyadicAdjustment adj = dyadic_adjust(f, bits);
      Rational w_adj = detail::brute_weighted_count(adj.adjusted);
      if (!within(w_adj, adj.gamma) && res.failures++ == 0) {
        std::ostringstream os;
        os << "dyadic bits=" << bits << ": true " << w_true << ", adjusted " << w_adj
           << ", gamma " << adj.gamma;
        res.counterexample = os.str() + "\n" + emit(f);
      }
    }
    for (int budget = 1; budget <= 3; ++budget) {
      ++res.checks;
      BudgetAdjustment adj = budget_adjust(f, budget);
      if (adj.gamma.unbounded) continue;  // nothing certified, nothing to check
      Rational w_adj = detail::brute_weighted_count(adj.adjusted);
      if (!within(w_adj, adj.gamma.value) && res.failures++ == 0) {
        std::ostringstream os;
        os << "budget m=" << budget << ": true " << w_true << ", adjusted " << w_adj
           << ", gamma " << adj.gamma.value;
        res.counterexample = os.str() + "\n" + emit(f);
      }
    }
  }
  return res;
}

inline std::vector<SuiteResult> run_all(std::uint64_t seed) {
  return {chain_count_suite(), farey_suite(seed), reduction_suite(seed),
          gamma_suite(seed)};
}

}  // namespace unweigh::selftest
