/*
 * Copyright (c) 2025 the unweigh developers.
 * SPDX-License-Identifier: MIT
 *
 * Command-line front end: compiles weighted CNF counting instances into
 * unweighted projected ones, adjusts weights to dyadic or bit-budgeted
 * fractions with a certified error factor, and runs counts end to end.
 */
#include <unweigh/unweigh.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  if (is.bad()) throw io_error("read failure on '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw io_error("cannot write '" + path + "'");
  os << content;
  os.flush();
  if (!os) throw io_error("short write to '" + path + "'");
}

std::string frac(const unweigh::Rational& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string frac_sci(const unweigh::Rational& v) {
  return frac(v) + " (" + unweigh::to_scientific(v) + ")";
}

struct Options {
  std::string input;
  std::string output;
  std::string mode = "exact";
  int bits = 0;        // 0 = unset
  int budget = -1;     // -1 = unset
  std::string epsilon = "0.8";
  std::string delta = "0.2";
  std::string backend = "exact";
  std::string counter_cmd;
  std::string counter_pattern = "s-mc";
  int timeout = 0;
  int cap = unweigh::kDefaultProjectionCap;
  std::uint64_t seed = 1;
};

int require_bits(const Options& opt) {
  if (opt.bits < 1)
    throw std::invalid_argument("--mode dyadic requires --bits <n> with n >= 1");
  return opt.bits;
}

int require_budget(const Options& opt) {
  if (opt.budget < 0)
    throw std::invalid_argument("--mode budget requires --budget <m> with m >= 0");
  return opt.budget;
}

std::string gamma_str(const unweigh::GammaBound& g) {
  return g.unbounded ? "unbounded" : frac_sci(g.value);
}

int cmd_reduce(const Options& opt) {
  unweigh::WeightedFormula f = unweigh::normalize(unweigh::parse(read_file(opt.input)));
  unweigh::Reduction r;
  std::optional<unweigh::GammaBound> gamma;
  unweigh::ReductionMode mode;
  if (opt.mode == "exact") {
    mode = unweigh::ReductionMode::exact;
    r = unweigh::reduce(f);
  } else if (opt.mode == "dyadic") {
    mode = unweigh::ReductionMode::dyadic;
    unweigh::DyadicAdjustment adj = unweigh::dyadic_adjust(f, require_bits(opt));
    gamma = unweigh::GammaBound{false, adj.gamma};
    r = unweigh::reduce(adj.adjusted);
  } else {
    mode = unweigh::ReductionMode::budget;
    unweigh::BudgetReduction br = unweigh::budget_reduce(f, require_budget(opt));
    gamma = br.gamma;
    r = std::move(br.reduction);
  }
  write_file(opt.output, unweigh::emit(r.reduced, false));
  std::string meta_path = opt.output + ".meta.json";
  write_file(meta_path, unweigh::reduction_metadata(r, mode, gamma).dump(2) + "\n");
  std::cout << "mode: " << unweigh::to_string(mode) << '\n';
  std::cout << "c_w: " << r.c_w << '\n';
  std::cout << "fresh_variables: " << r.total_fresh << '\n';
  if (gamma) std::cout << "gamma: " << gamma_str(*gamma) << '\n';
  std::cout << "instance: " << opt.output << '\n';
  std::cout << "metadata: " << meta_path << '\n';
  return 0;
}

int cmd_approx_weights(const Options& opt) {
  unweigh::WeightedFormula f = unweigh::normalize(unweigh::parse(read_file(opt.input)));
  unweigh::WeightedFormula adjusted;
  unweigh::GammaBound gamma;
  if (opt.mode == "dyadic") {
    unweigh::DyadicAdjustment adj = unweigh::dyadic_adjust(f, require_bits(opt));
    adjusted = std::move(adj.adjusted);
    gamma = {false, adj.gamma};
  } else if (opt.mode == "budget") {
    unweigh::BudgetAdjustment adj = unweigh::budget_adjust(f, require_budget(opt));
    adjusted = std::move(adj.adjusted);
    gamma = adj.gamma;
  } else {
    throw std::invalid_argument("approx-weights needs --mode dyadic or --mode budget");
  }
  for (const auto& [v, w] : f.weights) {
    unweigh::Rational neww;
    auto it = adjusted.weights.find(v);
    if (it != adjusted.weights.end()) {
      neww = it->second.pos;
    } else {
      // driven to 0 or 1 and folded into a unit clause
      neww = unweigh::nearest_mbit_fraction(numerator(w.pos), denominator(w.pos),
                                            opt.budget)
                     .num == 0
                 ? 0
                 : 1;
      std::cerr << "warning: variable " << v << ": weight " << frac(w.pos)
                << " adjusted to " << neww << "; replaced by a unit clause\n";
    }
    std::cout << "var " << v << ": " << frac(w.pos) << " -> " << frac(neww)
              << "  distance " << frac(boost::multiprecision::abs(w.pos - neww))
              << '\n';
  }
  std::cout << "gamma: " << gamma_str(gamma) << '\n';
  write_file(opt.output, unweigh::emit(adjusted, true));
  std::cout << "output: " << opt.output << '\n';
  return 0;
}

int cmd_count(const Options& opt) {
  unweigh::WeightedFormula f = unweigh::normalize(unweigh::parse(read_file(opt.input)));
  unweigh::Rational eps = unweigh::parse_weight(opt.epsilon);
  unweigh::Rational delta = unweigh::parse_weight(opt.delta);
  unweigh::Backend backend =
      opt.backend == "external" ? unweigh::Backend::external : unweigh::Backend::exact;
  unweigh::CounterProfile profile{opt.counter_cmd, opt.counter_pattern, opt.timeout};
  if (backend == unweigh::Backend::external && profile.command_template.empty())
    throw std::invalid_argument(
        "external backend needs --counter-cmd or the DEWEIGHT_COUNTER variable");
  auto t0 = std::chrono::steady_clock::now();
  unweigh::CountResult res = unweigh::integrate(
      f, eps, delta, backend, backend == unweigh::Backend::external ? &profile : nullptr,
      opt.cap);
  std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
  unweigh::Rational blow = 1 + res.epsilon;
  std::cout << "c_w: " << res.c_w << '\n';
  std::cout << "raw_count: " << res.raw_count << '\n';
  std::cout << "estimate: " << frac_sci(res.value) << '\n';
  std::cout << "interval: [" << frac(res.value / blow) << ", " << frac(res.value * blow)
            << "]\n";
  std::cout << "epsilon: " << unweigh::to_decimal(res.epsilon) << '\n';
  std::cout << "delta: " << unweigh::to_decimal(res.delta) << '\n';
  std::cout << "backend: " << res.backend << '\n';
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", elapsed.count());
  std::cout << "time: " << buf << "s\n";
  return 0;
}

int cmd_gamma(const Options& opt) {
  unweigh::WeightedFormula f = unweigh::normalize(unweigh::parse(read_file(opt.input)));
  unweigh::Rational eps = unweigh::parse_weight(opt.epsilon);
  unweigh::GammaBound gamma;
  if (opt.mode == "dyadic") {
    gamma = {false, unweigh::dyadic_adjust(f, require_bits(opt)).gamma};
    std::cout << "mode: dyadic\nbits: " << opt.bits << '\n';
  } else if (opt.mode == "budget") {
    gamma = unweigh::budget_adjust(f, require_budget(opt)).gamma;
    std::cout << "mode: budget\nbudget: " << opt.budget << '\n';
  } else {
    throw std::invalid_argument("gamma needs --mode dyadic or --mode budget");
  }
  std::cout << "epsilon: " << unweigh::to_decimal(eps) << '\n';
  if (gamma.unbounded) {
    std::cout << "gamma: unbounded\ncombined_error: unbounded\n";
  } else {
    std::cout << "gamma: " << frac_sci(gamma.value) << '\n';
    std::cout << "combined_error: " << frac_sci(unweigh::combined_error(eps, gamma.value))
              << '\n';
  }
  return 0;
}

int cmd_selftest(const Options& opt) {
  std::cout << "seed: " << opt.seed << '\n';
  bool ok = true;
  for (const auto& suite : unweigh::selftest::run_all(opt.seed)) {
    if (suite.failures == 0) {
      std::cout << suite.name << ": " << suite.checks << "/" << suite.checks << " ok\n";
    } else {
      ok = false;
      std::cout << suite.name << ": " << suite.failures << " of " << suite.checks
                << " checks FAILED\n";
      std::cout << "counterexample: " << suite.counterexample << '\n';
    }
  }
  std::cout << (ok ? "selftest passed\n" : "selftest FAILED\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "unweigh: turns weighted model-counting instances into unweighted projected "
      "ones, with exact or certified-error weight handling"};
  app.require_subcommand(1);
  Options opt;

  auto add_mode = [&](CLI::App* sub, bool with_exact) {
    auto vals = with_exact ? std::vector<std::string>{"exact", "dyadic", "budget"}
                           : std::vector<std::string>{"dyadic", "budget"};
    sub->add_option("--mode", opt.mode, "weight handling")
        ->check(CLI::IsMember(vals));
    sub->add_option("--bits", opt.bits, "dyadic denominator is 2^bits");
    sub->add_option("--budget", opt.budget, "max fresh variables per weighted variable");
  };

  CLI::App* reduce = app.add_subcommand(
      "reduce", "compile a weighted instance to an unweighted projected one");
  reduce->add_option("input", opt.input, "weighted DIMACS file")->required();
  reduce->add_option("-o,--output", opt.output, "unweighted DIMACS destination")
      ->required();
  add_mode(reduce, true);

  CLI::App* approx = app.add_subcommand(
      "approx-weights", "rewrite weights as dyadic or bit-budgeted fractions");
  approx->add_option("input", opt.input, "weighted DIMACS file")->required();
  approx->add_option("-o,--output", opt.output, "adjusted weighted DIMACS destination")
      ->required();
  add_mode(approx, false);

  CLI::App* count =
      app.add_subcommand("count", "reduce, count, and report the weighted count");
  count->add_option("input", opt.input, "weighted DIMACS file")->required();
  count->add_option("--backend", opt.backend, "counting backend")
      ->check(CLI::IsMember({"exact", "external"}));
  count->add_option("--epsilon", opt.epsilon, "tolerance passed to the counter");
  count->add_option("--delta", opt.delta, "confidence passed to the counter");
  count->add_option("--counter-cmd", opt.counter_cmd,
                    "external counter template; {file} {epsilon} {delta} substituted")
      ->envname("DEWEIGHT_COUNTER");
  count->add_option("--counter-pattern", opt.counter_pattern, "counter output dialect")
      ->check(CLI::IsMember({"s-mc", "mult-pow2"}));
  count->add_option("--timeout", opt.timeout, "counter wall-clock limit in seconds");
  count->add_option("--cap", opt.cap, "projected-variable limit for the exact backend")
      ->check(CLI::Range(1, 62));

  CLI::App* gamma = app.add_subcommand(
      "gamma", "certified error factor of a weight adjustment, no counting");
  gamma->add_option("input", opt.input, "weighted DIMACS file")->required();
  add_mode(gamma, false);
  gamma->add_option("--epsilon", opt.epsilon, "counter tolerance for the combined error");

  CLI::App* selftest =
      app.add_subcommand("selftest", "run the built-in property suites");
  selftest->add_option("--seed", opt.seed, "RNG seed for the randomized suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (reduce->parsed()) return cmd_reduce(opt);
    if (approx->parsed()) return cmd_approx_weights(opt);
    if (count->parsed()) return cmd_count(opt);
    if (gamma->parsed()) return cmd_gamma(opt);
    if (selftest->parsed()) return cmd_selftest(opt);
  } catch (const unweigh::cap_exceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  } catch (const unweigh::backend_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (!e.output.empty()) std::cerr << "counter output:\n" << e.output;
    return 4;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const unweigh::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
