#include <unweigh/chain.hpp>

#include <catch2/catch_amalgamated.hpp>

using unweigh::BigInt;
using unweigh::Clause;
using unweigh::Literal;

namespace {

bool eval(const std::vector<Clause>& clauses, unsigned long long mask) {
  for (const Clause& c : clauses) {
    bool sat = false;
    for (Literal l : c)
      if ((((mask >> (l.var - 1)) & 1u) != 0) == l.positive) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

// models of the guarded chain with guard var 1 fixed, over chain vars 2..m+1
BigInt count_models(const std::vector<Clause>& clauses, int m, bool guard_value) {
  BigInt n = 0;
  for (unsigned long long mask = 0; mask < (1ull << m); ++mask)
    if (eval(clauses, (mask << 1) | (guard_value ? 1u : 0u))) ++n;
  return n;
}

}  // namespace

TEST_CASE("chain construction validates its arguments") {
  CHECK_THROWS_AS(unweigh::build_chain(0, 3, 1), std::domain_error);
  CHECK_THROWS_AS(unweigh::build_chain(9, 3, 1), std::domain_error);
  CHECK_THROWS_AS(unweigh::build_chain(1, -1, 1), std::domain_error);
  CHECK_THROWS_AS(unweigh::build_chain(1, 0, 0), std::domain_error);
}

TEST_CASE("chain bit layout: k = 10, m = 4") {
  unweigh::ChainFormula chain = unweigh::build_chain(10, 4, 2);
  REQUIRE_FALSE(chain.tautology());
  CHECK(chain.t() == 3);
  CHECK(chain.bit(1));
  CHECK_FALSE(chain.bit(2));
  CHECK(chain.bit(3));
  CHECK_FALSE(chain.bit(4));
  CHECK(chain.var(1) == 2);
  CHECK(chain.var(4) == 5);
}

TEST_CASE("guarded CNF of k = 10, m = 4 under a positive guard") {
  auto clauses = unweigh::guarded_cnf(unweigh::build_chain(10, 4, 2), Literal{1, true});
  std::vector<Clause> want = {
      {{1, false}, {2, true}, {3, true}},
      {{1, false}, {2, true}, {4, true}},
  };
  CHECK(clauses == want);
}

TEST_CASE("guarded CNF of k = 1, m = 4 under a negative guard") {
  auto clauses = unweigh::guarded_cnf(unweigh::build_chain(1, 4, 2), Literal{1, false});
  std::vector<Clause> want = {
      {{1, true}, {2, true}},
      {{1, true}, {3, true}},
      {{1, true}, {4, true}},
      {{1, true}, {5, true}},
  };
  CHECK(clauses == want);
}

TEST_CASE("k = 2^m chains are tautological") {
  CHECK(unweigh::build_chain(1, 0, 5).tautology());
  CHECK(unweigh::build_chain(8, 3, 2).tautology());
  CHECK(unweigh::guarded_cnf(unweigh::build_chain(8, 3, 2), Literal{1, true}).empty());
  CHECK_FALSE(unweigh::build_chain(7, 3, 2).tautology());
}

TEST_CASE("a chain over m variables has exactly k models, all m <= 7") {
  for (int m = 0; m <= 7; ++m) {
    for (BigInt k = 1; k <= unweigh::pow2(m); ++k) {
      auto clauses = unweigh::guarded_cnf(unweigh::build_chain(k, m, 2), Literal{1, true});
      INFO("k=" << k << " m=" << m);
      REQUIRE(count_models(clauses, m, true) == k);
      // a false guard makes the implication vacuous
      REQUIRE(count_models(clauses, m, false) == unweigh::pow2(m));
    }
  }
}
