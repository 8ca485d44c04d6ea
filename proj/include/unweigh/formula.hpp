/*
 * Copyright (c) 2025 the unweigh developers.
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <unweigh/common.hpp>
#include <unweigh/rational.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace unweigh {

struct Literal {
  int var = 0;  // >= 1
  bool positive = true;
  friend bool operator==(const Literal&, const Literal&) = default;
};

inline Literal negate(Literal l) { return {l.var, !l.positive}; }
inline int to_dimacs(Literal l) { return l.positive ? l.var : -l.var; }

using Clause = std::vector<Literal>;

/** Weight pair of a variable; pos + neg need not be 1 until normalized. */
struct WeightPair {
  Rational pos;
  Rational neg;
  friend bool operator==(const WeightPair&, const WeightPair&) = default;
};

/**
 * A CNF formula with a sampling (projection) set and per-variable weights.
 * Weighted variables always lie inside the sampling set; the sampling set
 * is kept sorted and duplicate-free. Instances are plain data: construct,
 * then treat as immutable.
 */
struct WeightedFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;
  std::vector<int> sampling_set;
  std::map<int, WeightPair> weights;
  friend bool operator==(const WeightedFormula&, const WeightedFormula&) = default;
};

/** Structural invariants; throws parse_error on violation. */
inline void validate(const WeightedFormula& f) {
  if (f.num_vars < 0) throw parse_error("negative variable count");
  for (const Clause& c : f.clauses) {
    if (c.empty()) throw parse_error("empty clause");
    for (Literal l : c)
      if (l.var < 1 || l.var > f.num_vars)
        throw parse_error("literal variable " + std::to_string(l.var) + " out of range");
  }
  int prev = 0;
  for (int v : f.sampling_set) {
    if (v < 1 || v > f.num_vars)
      throw parse_error("sampling-set variable " + std::to_string(v) + " out of range");
    if (v <= prev) throw parse_error("sampling set not sorted and duplicate-free");
    prev = v;
  }
  for (const auto& [v, w] : f.weights) {
    if (!std::binary_search(f.sampling_set.begin(), f.sampling_set.end(), v))
      throw parse_error("weight on variable " + std::to_string(v) +
                        " outside the sampling set");
    if (w.pos < 0 || w.neg < 0)
      throw parse_error("negative weight on variable " + std::to_string(v));
  }
}

namespace detail {

inline bool parse_int(std::string_view tok, long long& out) {
  if (tok.empty()) return false;
  size_t i = 0;
  bool neg = false;
  if (tok[0] == '-' || tok[0] == '+') {
    neg = tok[0] == '-';
    i = 1;
  }
  if (i == tok.size()) return false;
  long long v = 0;
  for (; i < tok.size(); ++i) {
    if (tok[i] < '0' || tok[i] > '9') return false;
    v = v * 10 + (tok[i] - '0');
    if (v > 1'000'000'000'000LL) return false;
  }
  out = neg ? -v : v;
  return true;
}

inline std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

/**
 * Parses weighted DIMACS. Accepts `c ind ... 0` sampling-set lines,
 * `c p weight <lit> <w> 0` weight lines and the legacy `w <var> <w>` form
 * (the two weight syntaxes must not be mixed). A variable weighted in only
 * one polarity gets the complement 1-w for the other. With no `c ind` line
 * the sampling set is every variable. A mismatch between the declared and
 * actual clause count is tolerated; structural damage is not.
 */
inline WeightedFormula parse(std::string_view text) {
  WeightedFormula f;
  bool have_header = false;
  bool saw_ind = false;
  bool saw_cpw = false;
  bool saw_legacy = false;
  std::set<int> ind_vars;
  std::map<int, std::pair<std::optional<Rational>, std::optional<Rational>>> given;
  Clause current;
  bool in_clause = false;
  long line_no = 0;

  auto at = [&](const std::string& msg) {
    return parse_error("line " + std::to_string(line_no) + ": " + msg);
  };

  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto toks = detail::tokenize(line);
    if (toks.empty()) continue;

    if (toks[0] == "c") {
      if (toks.size() >= 2 && toks[1] == "ind") {
        saw_ind = true;
        if (toks.size() < 3 || toks.back() != "0")
          throw at("'c ind' line not terminated by 0");
        for (size_t i = 2; i + 1 < toks.size(); ++i) {
          long long v;
          if (!detail::parse_int(toks[i], v) || v <= 0)
            throw at("bad sampling-set entry '" + std::string(toks[i]) + "'");
          ind_vars.insert(static_cast<int>(v));
        }
      } else if (toks.size() >= 3 && toks[1] == "p" && toks[2] == "weight") {
        saw_cpw = true;
        if (toks.size() != 6 || toks[5] != "0")
          throw at("'c p weight' line needs <lit> <weight> 0");
        long long lit;
        if (!detail::parse_int(toks[3], lit) || lit == 0)
          throw at("bad weight literal '" + std::string(toks[3]) + "'");
        Rational w = parse_weight(toks[4]);
        auto& slot = given[static_cast<int>(lit > 0 ? lit : -lit)];
        auto& side = lit > 0 ? slot.first : slot.second;
        if (side)
          throw at("duplicate weight for literal " + std::to_string(lit));
        side = w;
      }
      // any other comment: ignored
    } else if (toks[0] == "p") {
      if (have_header) throw at("duplicate 'p cnf' header");
      long long n, m;
      if (toks.size() != 4 || toks[1] != "cnf" || !detail::parse_int(toks[2], n) ||
          !detail::parse_int(toks[3], m) || n < 0 || m < 0)
        throw at("malformed header");
      f.num_vars = static_cast<int>(n);
      have_header = true;
    } else if (toks[0] == "w") {
      saw_legacy = true;
      if (toks.size() != 3) throw at("'w' line needs <var> <weight>");
      long long v;
      if (!detail::parse_int(toks[1], v) || v <= 0)
        throw at("bad weight variable '" + std::string(toks[1]) + "'");
      auto& slot = given[static_cast<int>(v)];
      if (slot.first) throw at("duplicate weight for variable " + std::to_string(v));
      slot.first = parse_weight(toks[2]);
    } else {
      if (!have_header) throw at("clause before 'p cnf' header");
      for (auto tok : toks) {
        long long lit;
        if (!detail::parse_int(tok, lit))
          throw at("bad clause token '" + std::string(tok) + "'");
        if (lit == 0) {
          if (current.empty()) throw at("empty clause");
          f.clauses.push_back(current);
          current.clear();
          in_clause = false;
        } else {
          long long v = lit > 0 ? lit : -lit;
          if (v > f.num_vars)
            throw at("literal " + std::to_string(lit) + " out of range");
          current.push_back({static_cast<int>(v), lit > 0});
          in_clause = true;
        }
      }
    }
  }

  if (!have_header) throw parse_error("missing 'p cnf' header");
  if (in_clause || !current.empty()) throw parse_error("unterminated clause at end of input");
  if (saw_cpw && saw_legacy)
    throw parse_error("mixed 'c p weight' and legacy 'w' weight lines");

  if (saw_ind) {
    f.sampling_set.assign(ind_vars.begin(), ind_vars.end());
  } else {
    f.sampling_set.resize(f.num_vars);
    for (int v = 1; v <= f.num_vars; ++v) f.sampling_set[v - 1] = v;
  }

  for (auto& [v, slot] : given) {
    if (v > f.num_vars)
      throw parse_error("weight on variable " + std::to_string(v) + " out of range");
    WeightPair w;
    if (slot.first && slot.second) {
      w = {*slot.first, *slot.second};
      if (w.pos < 0 || w.neg < 0)
        throw parse_error("negative weight on variable " + std::to_string(v));
    } else {
      const Rational& one_side = slot.first ? *slot.first : *slot.second;
      if (one_side < 0 || one_side > 1)
        throw parse_error("single-polarity weight on variable " + std::to_string(v) +
                          " must lie in [0,1]");
      Rational other = Rational(1) - one_side;
      w = slot.first ? WeightPair{one_side, other} : WeightPair{other, one_side};
    }
    f.weights.emplace(v, std::move(w));
  }

  validate(f);
  return f;
}

/**
 * Rescales every weight pair to sum to 1. A variable whose scaled positive
 * weight comes out 1 (resp. 0) is forced by a fresh unit clause (x) (resp.
 * (-x)) and dropped from the weight map. A pair summing to zero has no
 * consistent scaling and is an error. Idempotent.
 */
inline WeightedFormula normalize(const WeightedFormula& f) {
  WeightedFormula out = f;
  std::vector<int> drop;
  for (auto& [v, w] : out.weights) {
    Rational sum = w.pos + w.neg;
    if (sum == 0)
      throw std::domain_error("variable " + std::to_string(v) +
                              ": weight pair sums to zero");
    w.pos /= sum;
    w.neg /= sum;
    if (w.pos == 1) {
      out.clauses.push_back({Literal{v, true}});
      drop.push_back(v);
    } else if (w.pos == 0) {
      out.clauses.push_back({Literal{v, false}});
      drop.push_back(v);
    }
  }
  for (int v : drop) out.weights.erase(v);
  return out;
}

/** True iff every weight pair is interior (0 < pos < 1) and sums to 1. */
inline bool is_normalized(const WeightedFormula& f) {
  for (const auto& [v, w] : f.weights) {
    (void)v;
    if (w.pos <= 0 || w.pos >= 1 || w.pos + w.neg != 1) return false;
  }
  return true;
}

/**
 * Serializes to DIMACS: header, `c ind` lines (at most 10 variables per
 * line), optionally `c p weight` lines (both polarities, reduced
 * fractions), then the clauses. Emission is deterministic, so equal
 * formulas serialize byte-identically.
 */
inline std::string emit(const WeightedFormula& f, bool include_weights = true) {
  std::ostringstream os;
  os << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (size_t i = 0; i < f.sampling_set.size(); i += 10) {
    os << "c ind";
    for (size_t j = i; j < f.sampling_set.size() && j < i + 10; ++j)
      os << ' ' << f.sampling_set[j];
    os << " 0\n";
  }
  if (include_weights) {
    for (const auto& [v, w] : f.weights) {
      os << "c p weight " << v << ' ' << w.pos << " 0\n";
      os << "c p weight -" << v << ' ' << w.neg << " 0\n";
    }
  }
  for (const Clause& c : f.clauses) {
    for (Literal l : c) os << to_dimacs(l) << ' ';
    os << "0\n";
  }
  return os.str();
}

}  // namespace unweigh
