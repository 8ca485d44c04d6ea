#include <unweigh/formula.hpp>

#include <catch2/catch_amalgamated.hpp>

using unweigh::Clause;
using unweigh::Literal;
using unweigh::Rational;
using unweigh::WeightedFormula;
using unweigh::WeightPair;

TEST_CASE("parse a weighted instance with sampling set") {
  const char* text =
      "c a comment\n"
      "p cnf 4 2\n"
      "c ind 1 2 0\n"
      "c p weight 1 2/3 0\n"
      "c p weight -1 1/3 0\n"
      "c p weight 2 0.5 0\n"
      "1 2 0\n"
      "-3 4 0\n";
  WeightedFormula f = unweigh::parse(text);
  CHECK(f.num_vars == 4);
  REQUIRE(f.clauses.size() == 2);
  CHECK(f.clauses[0] == Clause{{1, true}, {2, true}});
  CHECK(f.clauses[1] == Clause{{3, false}, {4, true}});
  CHECK(f.sampling_set == std::vector<int>{1, 2});
  REQUIRE(f.weights.size() == 2);
  CHECK(f.weights.at(1) == WeightPair{Rational(2, 3), Rational(1, 3)});
  // single polarity: the other side defaults to 1 - w
  CHECK(f.weights.at(2) == WeightPair{Rational(1, 2), Rational(1, 2)});
}

TEST_CASE("parse fills in defaults") {
  WeightedFormula f = unweigh::parse("p cnf 3 0\n");
  CHECK(f.num_vars == 3);
  CHECK(f.clauses.empty());
  CHECK(f.sampling_set == std::vector<int>{1, 2, 3});
  CHECK(f.weights.empty());
}

TEST_CASE("parse accepts legacy w lines") {
  WeightedFormula f = unweigh::parse(
      "p cnf 2 1\n"
      "w 1 0.3\n"
      "1 -2 0\n");
  CHECK(f.weights.at(1) == WeightPair{Rational(3, 10), Rational(7, 10)});
}

TEST_CASE("parse handles clauses spanning lines and stray blanks") {
  WeightedFormula f = unweigh::parse(
      "p cnf 3 1\n"
      "\n"
      "1 2\n"
      "3 0\n");
  REQUIRE(f.clauses.size() == 1);
  CHECK(f.clauses[0].size() == 3);
}

TEST_CASE("parse tolerates a clause-count mismatch") {
  WeightedFormula f = unweigh::parse("p cnf 2 5\n1 0\n");
  CHECK(f.clauses.size() == 1);
}

TEST_CASE("parse rejects structural damage") {
  using unweigh::parse_error;
  CHECK_THROWS_AS(unweigh::parse(""), parse_error);
  CHECK_THROWS_AS(unweigh::parse("1 0\np cnf 2 1\n"), parse_error);
  CHECK_THROWS_AS(unweigh::parse("p cnf 2 1\np cnf 2 1\n"), parse_error);
  CHECK_THROWS_AS(unweigh::parse("p cnf 2 1\n0\n"), parse_error);        // empty clause
  CHECK_THROWS_AS(unweigh::parse("p cnf 2 1\n1 2\n"), parse_error);      // unterminated
  CHECK_THROWS_AS(unweigh::parse("p cnf 2 1\n1 3 0\n"), parse_error);    // out of range
  CHECK_THROWS_AS(unweigh::parse("p cnf 2 1\n1 x 0\n"), parse_error);    // bad token
  CHECK_THROWS_AS(unweigh::parse("p cnf 2 0\nc ind 1 2\n"), parse_error);  // no 0
  CHECK_THROWS_AS(unweigh::parse("p cnf 2 0\nc ind 0\nc ind x 0\n"), parse_error);
  CHECK_THROWS_AS(unweigh::parse("p cnf 2 0\nc p weight 1 0.5\n"), parse_error);
  CHECK_THROWS_AS(
      unweigh::parse("p cnf 2 0\nc p weight 1 0.5 0\nw 2 0.5\n"),
      parse_error);  // mixed syntaxes
  CHECK_THROWS_AS(
      unweigh::parse("p cnf 2 0\nc p weight 1 0.5 0\nc p weight 1 0.6 0\n"),
      parse_error);  // duplicate
  CHECK_THROWS_AS(unweigh::parse("p cnf 2 0\nc p weight 1 1.5 0\n"),
                  parse_error);  // single-sided weight above 1
  CHECK_THROWS_AS(unweigh::parse("p cnf 2 0\nc p weight 3 0.5 0\n"),
                  parse_error);  // out of range
  CHECK_THROWS_AS(unweigh::parse("p cnf 3 0\nc ind 1 0\nc p weight 2 0.5 0\n"),
                  parse_error);  // weight outside the sampling set
  CHECK_THROWS_AS(
      unweigh::parse("p cnf 2 0\nc p weight 1 2/3 0\nc p weight -1 -1/3 0\n"),
      parse_error);  // negative weight
}

TEST_CASE("normalize rescales pairs and folds 0/1 weights into unit clauses") {
  WeightedFormula f = unweigh::parse(
      "p cnf 3 1\n"
      "c p weight 1 2/3 0\n"
      "c p weight -1 1/2 0\n"
      "c p weight 2 1 0\n"
      "c p weight 3 0 0\n"
      "1 2 0\n");
  WeightedFormula n = unweigh::normalize(f);
  REQUIRE(n.weights.size() == 1);
  CHECK(n.weights.at(1) == WeightPair{Rational(4, 7), Rational(3, 7)});
  REQUIRE(n.clauses.size() == 3);
  CHECK(n.clauses[1] == Clause{{2, true}});
  CHECK(n.clauses[2] == Clause{{3, false}});
  CHECK(unweigh::is_normalized(n));
  CHECK(unweigh::normalize(n) == n);
  CHECK_FALSE(unweigh::is_normalized(f));
}

TEST_CASE("normalize rejects a zero-sum weight pair") {
  WeightedFormula f = unweigh::parse(
      "p cnf 1 0\n"
      "c p weight 1 0 0\n"
      "c p weight -1 0 0\n");
  CHECK_THROWS_AS(unweigh::normalize(f), std::domain_error);
}

TEST_CASE("emit produces the frozen layout") {
  WeightedFormula f = unweigh::parse(
      "p cnf 3 2\n"
      "c ind 1 3 0\n"
      "c p weight 1 2/3 0\n"
      "c p weight -1 1/3 0\n"
      "1 -2 0\n"
      "3 0\n");
  CHECK(unweigh::emit(f) ==
        "p cnf 3 2\n"
        "c ind 1 3 0\n"
        "c p weight 1 2/3 0\n"
        "c p weight -1 1/3 0\n"
        "1 -2 0\n"
        "3 0\n");
  CHECK(unweigh::emit(f, false) ==
        "p cnf 3 2\n"
        "c ind 1 3 0\n"
        "1 -2 0\n"
        "3 0\n");
}

TEST_CASE("emit splits long sampling sets at ten variables per line") {
  WeightedFormula f;
  f.num_vars = 23;
  for (int v = 1; v <= 23; ++v) f.sampling_set.push_back(v);
  std::string text = unweigh::emit(f);
  CHECK(text.find("c ind 1 2 3 4 5 6 7 8 9 10 0\n") != std::string::npos);
  CHECK(text.find("c ind 11 12 13 14 15 16 17 18 19 20 0\n") != std::string::npos);
  CHECK(text.find("c ind 21 22 23 0\n") != std::string::npos);
}

TEST_CASE("emit and parse round-trip") {
  WeightedFormula f = unweigh::parse(
      "p cnf 5 3\n"
      "c ind 1 2 4 0\n"
      "c p weight 2 4/25 0\n"
      "c p weight -2 21/25 0\n"
      "1 -2 0\n"
      "4 5 0\n"
      "-1 -4 0\n");
  std::string text = unweigh::emit(f);
  WeightedFormula g = unweigh::parse(text);
  CHECK(g == f);
  // emission is deterministic, so a second trip is byte-identical
  CHECK(unweigh::emit(g) == text);
}

TEST_CASE("validate catches inconsistent hand-built formulas") {
  WeightedFormula f;
  f.num_vars = 2;
  f.sampling_set = {1};
  f.weights.emplace(2, WeightPair{Rational(1, 2), Rational(1, 2)});
  CHECK_THROWS_AS(unweigh::validate(f), unweigh::parse_error);
  f.weights.clear();
  f.clauses.push_back({});
  CHECK_THROWS_AS(unweigh::validate(f), unweigh::parse_error);
  f.clauses = {{{3, true}}};
  CHECK_THROWS_AS(unweigh::validate(f), unweigh::parse_error);
}
