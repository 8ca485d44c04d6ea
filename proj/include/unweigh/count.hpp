/*
 * Copyright (c) 2025 the unweigh developers.
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <unweigh/formula.hpp>
#include <unweigh/reduce.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace unweigh {

/**
 * Plain DPLL (unit propagation, chronological backtracking) for desk-scale
 * instances. Branching is deterministic: lowest-indexed unassigned
 * occurring variable, false before true. One instance is single-threaded;
 * concurrent callers make their own.
 */
class DpllSolver {
 public:
  DpllSolver(int num_vars, const std::vector<Clause>& clauses) {
    if (num_vars < 0) throw std::domain_error("solver: negative variable count");
    assign_.assign(static_cast<size_t>(num_vars) + 1, 0);
    std::vector<char> occurs(static_cast<size_t>(num_vars) + 1, 0);
    clauses_.reserve(clauses.size());
    for (const Clause& c : clauses) {
      std::vector<int> lits;
      lits.reserve(c.size());
      for (Literal l : c) {
        if (l.var < 1 || l.var > num_vars)
          throw std::domain_error("solver: literal out of range");
        lits.push_back(to_dimacs(l));
        occurs[l.var] = 1;
      }
      clauses_.push_back(std::move(lits));
    }
    for (int v = 1; v <= num_vars; ++v)
      if (occurs[v]) branch_vars_.push_back(v);
  }

  /** Satisfiability under the given partial assignment. */
  bool satisfiable(const std::vector<std::pair<int, bool>>& fixed) {
    std::fill(assign_.begin(), assign_.end(), 0);
    trail_.clear();
    for (auto [v, val] : fixed) {
      signed char want = val ? 1 : -1;
      if (assign_[v] == -want) return false;
      assign_[v] = want;
    }
    return search();
  }

 private:
  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& cl : clauses_) {
        int unassigned = 0;
        int last = 0;
        bool satisfied = false;
        for (int lit : cl) {
          int v = lit > 0 ? lit : -lit;
          signed char a = assign_[v];
          if (a == 0) {
            ++unassigned;
            last = lit;
          } else if ((a > 0) == (lit > 0)) {
            satisfied = true;
            break;
          }
        }
        if (satisfied) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          int v = last > 0 ? last : -last;
          assign_[v] = last > 0 ? 1 : -1;
          trail_.push_back(v);
          changed = true;
        }
      }
    }
    return true;
  }

  void undo_to(size_t mark) {
    while (trail_.size() > mark) {
      assign_[trail_.back()] = 0;
      trail_.pop_back();
    }
  }

  bool search() {
    size_t mark = trail_.size();
    if (!propagate()) {
      undo_to(mark);
      return false;
    }
    int branch = 0;
    for (int v : branch_vars_) {
      if (assign_[v] == 0) {
        branch = v;
        break;
      }
    }
    // no unassigned occurring variable + no conflict: every clause is
    // satisfied (a fully assigned unsatisfied clause would have conflicted)
    if (branch == 0) return true;
    for (signed char val : {static_cast<signed char>(-1), static_cast<signed char>(1)}) {
      size_t mark2 = trail_.size();
      assign_[branch] = val;
      trail_.push_back(branch);
      if (search()) return true;
      undo_to(mark2);
    }
    undo_to(mark);
    return false;
  }

  std::vector<std::vector<int>> clauses_;
  std::vector<signed char> assign_;
  std::vector<int> trail_;
  std::vector<int> branch_vars_;
};

inline bool dpll_sat(int num_vars, const std::vector<Clause>& clauses,
                     const std::vector<std::pair<int, bool>>& fixed = {}) {
  DpllSolver solver(num_vars, clauses);
  return solver.satisfiable(fixed);
}

inline constexpr int kDefaultProjectionCap = 24;

/**
 * |R_F restricted to the projection set|, by enumerating the projection
 * cube and SAT-checking each point. Exponential in |projection|, hence the
 * cap; anything larger belongs on an external counter.
 */
inline BigInt exact_projected_count(int num_vars, const std::vector<Clause>& clauses,
                                    const std::vector<int>& projection,
                                    int cap = kDefaultProjectionCap) {
  const int k = static_cast<int>(projection.size());
  if (k > cap || k >= 63)
    throw cap_exceeded("projection set has " + std::to_string(k) +
                       " variables, above the exact-backend cap of " +
                       std::to_string(cap) + "; use an external counter");
  DpllSolver solver(num_vars, clauses);
  std::vector<std::pair<int, bool>> fixed(k);
  unsigned long long count = 0;
  const unsigned long long points = 1ull << k;
  for (unsigned long long mask = 0; mask < points; ++mask) {
    for (int i = 0; i < k; ++i)
      fixed[i] = {projection[i], (mask >> i) & 1u};
    if (solver.satisfiable(fixed)) ++count;
  }
  return BigInt(count);
}

/**
 * Weighted count by direct enumeration of the sampling set: sum of
 * prod_i W(x_i -> sigma) over satisfiable projections sigma. Same cap
 * story as exact_projected_count. Requires normalized weights.
 */
inline Rational exact_weighted_count(const WeightedFormula& f,
                                     int cap = kDefaultProjectionCap) {
  validate(f);
  if (!is_normalized(f))
    throw std::invalid_argument("exact_weighted_count requires normalized weights");
  const int k = static_cast<int>(f.sampling_set.size());
  if (k > cap || k >= 63)
    throw cap_exceeded("sampling set has " + std::to_string(k) +
                       " variables, above the exact-backend cap of " +
                       std::to_string(cap) + "; use an external counter");
  DpllSolver solver(f.num_vars, f.clauses);
  // factor[i] = weights of sampling var i (1/1 when unweighted)
  std::vector<std::pair<Rational, Rational>> factor(k, {Rational(1), Rational(1)});
  for (int i = 0; i < k; ++i) {
    auto it = f.weights.find(f.sampling_set[i]);
    if (it != f.weights.end()) factor[i] = {it->second.pos, it->second.neg};
  }
  std::vector<std::pair<int, bool>> fixed(k);
  Rational total = 0;
  const unsigned long long points = 1ull << k;
  for (unsigned long long mask = 0; mask < points; ++mask) {
    for (int i = 0; i < k; ++i)
      fixed[i] = {f.sampling_set[i], (mask >> i) & 1u};
    if (!solver.satisfiable(fixed)) continue;
    Rational w = 1;
    for (int i = 0; i < k; ++i)
      w *= (mask >> i) & 1u ? factor[i].first : factor[i].second;
    total += w;
  }
  return total;
}

/** How to run an external projected model counter. */
struct CounterProfile {
  std::string command_template;  // must contain {file}; {epsilon},{delta} optional
  std::string output_pattern;    // "s-mc" or "mult-pow2"
  int timeout_seconds = 0;       // 0 = none
};

namespace detail {

inline std::string substitute_all(std::string s, const std::string& key,
                                  const std::string& value) {
  size_t pos = 0;
  while ((pos = s.find(key, pos)) != std::string::npos) {
    s.replace(pos, key.size(), value);
    pos += value.size();
  }
  return s;
}

inline std::string shell_single_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  out += "'";
  return out;
}

inline bool decimal_token(std::string_view t) {
  if (t.empty()) return false;
  for (char c : t)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace detail

/**
 * Runs a counter via the shell, captures stdout+stderr and extracts the
 * count. "s-mc" matches competition-style `s mc <N>` lines; "mult-pow2"
 * matches `Number of solutions is: <a> x 2^<b>`. With a timeout the
 * command is wrapped in coreutils `timeout` (exit 124 = timed out).
 */
inline BigInt run_external_counter(const std::string& file, const Rational& epsilon,
                                   const Rational& delta, const CounterProfile& profile) {
  if (profile.command_template.find("{file}") == std::string::npos)
    throw std::invalid_argument("counter command template must contain {file}");
  if (profile.output_pattern != "s-mc" && profile.output_pattern != "mult-pow2")
    throw std::invalid_argument("unknown counter output pattern '" +
                                profile.output_pattern + "'");
  std::string cmd = profile.command_template;
  cmd = detail::substitute_all(cmd, "{file}", file);
  cmd = detail::substitute_all(cmd, "{epsilon}", to_decimal(epsilon));
  cmd = detail::substitute_all(cmd, "{delta}", to_decimal(delta));
  std::string full = cmd;
  if (profile.timeout_seconds > 0)
    full = "timeout " + std::to_string(profile.timeout_seconds) + " sh -c " +
           detail::shell_single_quote(cmd);
  full += " 2>&1";

  FILE* pipe = popen(full.c_str(), "r");
  if (!pipe) throw backend_error("failed to start counter: " + full, -1, "");
  std::string output;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (profile.timeout_seconds > 0 && code == 124)
    throw backend_error("counter timed out after " +
                            std::to_string(profile.timeout_seconds) + "s",
                        code, output);
  if (code != 0)
    throw backend_error("counter exited with code " + std::to_string(code), code,
                        output);

  size_t pos = 0;
  while (pos <= output.size()) {
    size_t nl = output.find('\n', pos);
    std::string_view line(output.data() + pos,
                          (nl == std::string::npos ? output.size() : nl) - pos);
    pos = nl == std::string::npos ? output.size() + 1 : nl + 1;
    auto toks = unweigh::detail::tokenize(line);
    if (profile.output_pattern == "s-mc") {
      if (toks.size() == 3 && toks[0] == "s" && toks[1] == "mc" &&
          detail::decimal_token(toks[2]))
        return BigInt{std::string(toks[2])};
    } else {
      // Number of solutions is: <a> x 2^<b>
      if (toks.size() == 7 && toks[0] == "Number" && toks[1] == "of" &&
          toks[2] == "solutions" && toks[3] == "is:" && detail::decimal_token(toks[4]) &&
          toks[5] == "x" && toks[6].substr(0, 2) == "2^" &&
          detail::decimal_token(toks[6].substr(2))) {
        long long shift;
        if (!unweigh::detail::parse_int(toks[6].substr(2), shift) || shift > 1'000'000)
          throw backend_error("unreasonable exponent in counter output", code, output);
        return BigInt{std::string(toks[4])} << static_cast<unsigned>(shift);
      }
    }
  }
  throw backend_error("could not find a count in the counter output (pattern '" +
                          profile.output_pattern + "')",
                      code, output);
}

enum class Backend { exact, external };

/** One weighted-count query, end to end. */
struct CountResult {
  Rational value;    // raw_count / c_w
  Rational epsilon;  // 0 for the exact backend
  Rational delta;    // 0 for the exact backend
  std::string backend;
  BigInt raw_count;
  BigInt c_w;
};

namespace detail {

inline std::string fresh_temp_cnf() {
  static std::atomic<unsigned> seq{0};
  auto dir = std::filesystem::temp_directory_path();
  std::string name = "unweigh-" + std::to_string(::getpid()) + "-" +
                     std::to_string(seq.fetch_add(1)) + ".cnf";
  return (dir / name).string();
}

}  // namespace detail

/**
 * Reduces a normalized weighted formula and counts the result. The exact
 * backend enumerates in-process (cap applies); the external backend writes
 * the reduced instance to a temp file and runs the profiled counter. Either
 * way the estimate is raw/c_w; the (epsilon, delta) guarantee is whatever
 * the counter provides, (0, 0) for exact.
 */
inline CountResult integrate(const WeightedFormula& f, const Rational& epsilon,
                             const Rational& delta, Backend backend,
                             const CounterProfile* profile = nullptr,
                             int cap = kDefaultProjectionCap) {
  Reduction r = reduce(f);
  CountResult out;
  out.c_w = r.c_w;
  if (backend == Backend::exact) {
    out.raw_count =
        exact_projected_count(r.reduced.num_vars, r.reduced.clauses, r.projection_set, cap);
    out.epsilon = 0;
    out.delta = 0;
    out.backend = "exact";
  } else {
    if (!profile) throw std::invalid_argument("external backend requires a counter profile");
    if (epsilon < 0 || delta < 0 || delta >= 1)
      throw std::domain_error("need epsilon >= 0 and 0 <= delta < 1");
    std::string path = detail::fresh_temp_cnf();
    {
      std::ofstream os(path);
      if (!os) throw backend_error("cannot write temp instance " + path, -1, "");
      os << emit(r.reduced, false);
    }
    try {
      out.raw_count = run_external_counter(path, epsilon, delta, *profile);
    } catch (const backend_error&) {
      // keep the temp file for inspection
      throw;
    }
    std::error_code ec;
    std::filesystem::remove(path, ec);
    out.epsilon = epsilon;
    out.delta = delta;
    out.backend = "external";
  }
  out.value = make_rational(out.raw_count, out.c_w);
  return out;
}

}  // namespace unweigh
