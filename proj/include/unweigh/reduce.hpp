/*
 * Copyright (c) 2025 the unweigh developers.
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <unweigh/chain.hpp>
#include <unweigh/formula.hpp>
#include <unweigh/rational.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace unweigh {

/** Bookkeeping for one weighted variable (weight p/q, m fresh variables). */
struct VarReduction {
  int var = 0;
  BigInt p;
  BigInt q;
  int m = 0;
  int fresh_first = 0;  // fresh block [fresh_first, fresh_last];
  int fresh_last = 0;   // fresh_last = fresh_first - 1 encodes an empty block
};

/**
 * An unweighted projected instance equivalent to a weighted one: the
 * weighted count of the source equals (projected model count) / c_w.
 */
struct Reduction {
  WeightedFormula reduced;  // weight map empty; sampling set = projection_set
  std::vector<int> projection_set;
  BigInt c_w = 1;
  std::vector<VarReduction> per_var;
  int total_fresh = 0;
};

/**
 * Weight-elimination: every weighted variable x with W(x) = p/q gets one
 * fresh block of m = bits_required(p, q) variables carrying two chains,
 * (x -> chain of p models) and (-x -> chain of q-p models). Both chains
 * share the block, so each original model fans out into exactly p (resp.
 * q-p) extended ones and the projected count comes out scaled by q.
 * Requires normalized weights.
 */
inline Reduction reduce(const WeightedFormula& f) {
  validate(f);
  if (!is_normalized(f))
    throw std::invalid_argument("reduce requires normalized weights (0 < w < 1, pair sums to 1)");

  Reduction r;
  r.reduced.clauses = f.clauses;
  int next = f.num_vars + 1;
  for (const auto& [v, w] : f.weights) {
    const BigInt& p = numerator(w.pos);
    const BigInt& q = denominator(w.pos);
    const int m = bits_required(p, q);
    VarReduction row{v, p, q, m, next, next + m - 1};
    ChainFormula pos_chain = build_chain(p, m, next);
    ChainFormula neg_chain = build_chain(q - p, m, next);
    for (Clause& c : guarded_cnf(pos_chain, Literal{v, true}))
      r.reduced.clauses.push_back(std::move(c));
    for (Clause& c : guarded_cnf(neg_chain, Literal{v, false}))
      r.reduced.clauses.push_back(std::move(c));
    r.c_w *= q;
    r.total_fresh += m;
    next += m;
    r.per_var.push_back(std::move(row));
  }
  r.reduced.num_vars = next - 1;
  r.projection_set = f.sampling_set;
  for (const VarReduction& row : r.per_var)
    for (int y = row.fresh_first; y <= row.fresh_last; ++y)
      r.projection_set.push_back(y);
  // original sampling set is sorted and fresh blocks ascend beyond num_vars
  r.reduced.sampling_set = r.projection_set;
  validate(r.reduced);
  return r;
}

/**
 * Multiplicative distortion bound: gamma such that the true weighted count
 * lies within a factor 1+gamma of the adjusted one. `unbounded` marks
 * adjustments that moved some weight to 0 or 1.
 */
struct GammaBound {
  bool unbounded = false;
  Rational value;  // meaningful iff !unbounded
};

inline Rational ratio_factor(const Rational& w, const Rational& w_adj) {
  Rational a = w / w_adj;
  Rational b = w_adj / w;
  return a > b ? a : b;
}

/** gamma = (prod_i rho_i) - 1 over per-variable worst-case ratios. */
inline Rational gamma_from_rhos(const std::vector<Rational>& rhos) {
  Rational prod = 1;
  for (const Rational& r : rhos) prod *= r;
  return prod - 1;
}

struct DyadicAdjustment {
  WeightedFormula adjusted;
  Rational gamma;
  int bits = 0;
};

/**
 * Rounds every weight to the nearest j/2^bits with 1 <= j <= 2^bits - 1
 * (ties round up), the scheme used by counters that only accept dyadic
 * weights. Requires normalized weights and bits >= 1. The returned gamma
 * is always finite since j never reaches 0 or 2^bits.
 */
inline DyadicAdjustment dyadic_adjust(const WeightedFormula& f, int bits) {
  validate(f);
  if (!is_normalized(f))
    throw std::invalid_argument("dyadic_adjust requires normalized weights");
  if (bits < 1) throw std::domain_error("dyadic_adjust: bits must be >= 1");

  DyadicAdjustment out;
  out.adjusted = f;
  out.bits = bits;
  const BigInt two = pow2(bits);
  std::vector<Rational> rhos;
  for (auto& [v, w] : out.adjusted.weights) {
    (void)v;
    const BigInt& p = numerator(w.pos);
    const BigInt& q = denominator(w.pos);
    BigInt j = (2 * p * two + q) / (2 * q);  // round(p/q * 2^bits), half up
    if (j < 1) j = 1;
    if (j > two - 1) j = two - 1;
    WeightPair adj{make_rational(j, two), make_rational(two - j, two)};
    rhos.push_back(std::max(ratio_factor(w.pos, adj.pos), ratio_factor(w.neg, adj.neg)));
    w = adj;
  }
  out.gamma = gamma_from_rhos(rhos);
  return out;
}

struct BudgetAdjustment {
  WeightedFormula adjusted;  // normalized; 0/1 outcomes folded to unit clauses
  GammaBound gamma;
};

/**
 * Replaces every weight with its nearest m-bit fraction so the subsequent
 * reduction spends at most m_budget fresh variables per weighted variable.
 * A weight pushed to 0 or 1 is folded into a unit clause via normalize()
 * and makes gamma unbounded. Requires normalized weights.
 */
inline BudgetAdjustment budget_adjust(const WeightedFormula& f, int m_budget) {
  validate(f);
  if (!is_normalized(f))
    throw std::invalid_argument("budget_adjust requires normalized weights");
  if (m_budget < 0) throw std::domain_error("budget_adjust: budget must be >= 0");

  BudgetAdjustment out;
  out.adjusted = f;
  std::vector<Rational> rhos;
  for (auto& [v, w] : out.adjusted.weights) {
    (void)v;
    Fraction near =
        nearest_mbit_fraction(numerator(w.pos), denominator(w.pos), m_budget);
    if (near.num == 0 || near.num == near.den) {
      out.gamma.unbounded = true;
      w = near.num == 0 ? WeightPair{Rational(0), Rational(1)}
                        : WeightPair{Rational(1), Rational(0)};
      continue;
    }
    WeightPair adj{value_of(near), 1 - value_of(near)};
    rhos.push_back(std::max(ratio_factor(w.pos, adj.pos), ratio_factor(w.neg, adj.neg)));
    w = adj;
  }
  if (!out.gamma.unbounded) out.gamma.value = gamma_from_rhos(rhos);
  out.adjusted = normalize(out.adjusted);
  return out;
}

/** budget_adjust followed by reduce on the surviving weights. */
struct BudgetReduction {
  Reduction reduction;
  GammaBound gamma;
};

inline BudgetReduction budget_reduce(const WeightedFormula& f, int m_budget) {
  BudgetAdjustment adj = budget_adjust(f, m_budget);
  return {reduce(adj.adjusted), adj.gamma};
}

/**
 * Epsilon of the end-to-end estimate when a (1+eps)-approximate counter
 * runs on a gamma-adjusted instance: eps*gamma + gamma + eps.
 */
inline Rational combined_error(const Rational& eps, const Rational& gamma) {
  if (eps < 0 || gamma < 0)
    throw std::domain_error("combined_error: eps and gamma must be non-negative");
  return eps * gamma + gamma + eps;
}

enum class ReductionMode { exact, dyadic, budget };

inline const char* to_string(ReductionMode m) {
  switch (m) {
    case ReductionMode::exact: return "exact";
    case ReductionMode::dyadic: return "dyadic";
    case ReductionMode::budget: return "budget";
  }
  return "exact";
}

/**
 * Machine-readable sidecar describing a reduction. c_w, p and q are decimal
 * strings so arbitrary-precision values survive JSON. gamma is a fraction
 * string, the string "unbounded", or null when no adjustment happened.
 */
inline nlohmann::json reduction_metadata(const Reduction& r, ReductionMode mode,
                                         const std::optional<GammaBound>& gamma) {
  nlohmann::json meta;
  meta["mode"] = to_string(mode);
  meta["c_w"] = r.c_w.str();
  meta["total_fresh"] = r.total_fresh;
  meta["projection_set"] = r.projection_set;
  meta["per_var"] = nlohmann::json::array();
  for (const VarReduction& row : r.per_var) {
    meta["per_var"].push_back({{"var", row.var},
                               {"p", row.p.str()},
                               {"q", row.q.str()},
                               {"m", row.m},
                               {"fresh_first", row.fresh_first},
                               {"fresh_last", row.fresh_last}});
  }
  if (!gamma) {
    meta["gamma"] = nullptr;
  } else if (gamma->unbounded) {
    meta["gamma"] = "unbounded";
  } else {
    std::ostringstream os;
    os << gamma->value;
    meta["gamma"] = os.str();
  }
  return meta;
}

}  // namespace unweigh
