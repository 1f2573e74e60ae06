#include <doctest.h>

#include "corpus_fix.hpp"
#include "strew/engine.hpp"

using namespace strew;
using testutil::corpus;
using testutil::term;
using testutil::var_of;

TEST_CASE("reduce: size over rows, identity base case") {
  Module& m = corpus().get("15PUZZLE");
  Engine eng(m);
  TermRef r = eng.reduce(term(m, "size(1 b 2 3)"));
  CHECK(r == term(m, "4"));
  CHECK(m.sig.sort(r->sort).name == "NzNat");
  CHECK(eng.reduce(term(m, "size(nil)")) == term(m, "0"));
  CHECK(eng.reduce(term(m, "size(b)")) == term(m, "1"));
  CHECK(eng.rewrites() > 0);
}

TEST_CASE("reduce: builtin arithmetic, comparisons, equality") {
  Module& m = corpus().get("QUEENS");
  Engine eng(m);
  CHECK(eng.reduce(term(m, "2 + 3")) == term(m, "5"));
  CHECK(eng.reduce(term(m, "2 + 3 + 4 + 5")) == term(m, "14"));
  CHECK(eng.reduce(term(m, "(2 + 9) quo 2")) == term(m, "5"));
  CHECK(eng.reduce(term(m, "2 < 3")) == eng.true_term());
  CHECK(eng.reduce(term(m, "3 <= 2")) == eng.false_term());
  CHECK(eng.reduce(term(m, "size(1 5 8) == 8")) == eng.false_term());
  CHECK(eng.reduce(term(m, "size(1 5 8 6 3 7 2 4) == 8")) == eng.true_term());
  CHECK(eng.reduce(term(m, "1 =/= 2")) == eng.true_term());
}

TEST_CASE("reduce: integer subtraction and negation") {
  Module& m = corpus().get("15PUZZLE-STRATS");  // imports INT
  Engine eng(m);
  CHECK(eng.reduce(term(m, "3 - 5")) == term(m, "-2"));
  CHECK(eng.reduce(term(m, "- 4 + 1")) == term(m, "-3"));
  CHECK(eng.reduce(term(m, "-7 quo 2")) == term(m, "-3"));  // truncation
  CHECK(eng.reduce(term(m, "0 - 3 < 1")) == eng.true_term());
}

TEST_CASE("reduce: short-circuit booleans leave junk unevaluated") {
  Module& m = corpus().get("QUEENS");
  Engine eng(m);
  // 1 quo 0 has no normal form beyond itself; the lazy connectives must not
  // need it
  CHECK(eng.reduce(term(m, "false and-then 1 quo 0 < 1")) == eng.false_term());
  CHECK(eng.reduce(term(m, "true or-else 1 quo 0 < 1")) == eng.true_term());
  CHECK(eng.reduce(term(m, "true and-then 2 < 3")) == eng.true_term());
  CHECK(eng.reduce(term(m, "false and 1 quo 0 < 1")) == eng.false_term());
  CHECK(eng.reduce(term(m, "true or 1 quo 0 < 1")) == eng.true_term());
  CHECK(eng.reduce(term(m, "not false")) == eng.true_term());
  TermRef stuck = eng.reduce(term(m, "1 quo 0 < 1"));
  CHECK(stuck != eng.true_term());
  CHECK(stuck != eng.false_term());
}

TEST_CASE("reduce: if_then_else_fi picks the branch lazily") {
  Module& m = corpus().get("BLACKBOARD-STRAT");
  Engine eng(m);
  CHECK(eng.reduce(term(m, "if 1 < 2 then 3 else 1 quo 0 fi")) ==
        term(m, "3"));
  CHECK(eng.reduce(term(m, "max(8 7 4 3 2 1)")) == term(m, "8"));
  CHECK(eng.reduce(term(m, "min(8 7 4 3 2 1)")) == term(m, "1"));
  CHECK(eng.reduce(term(m, "remove(7, 8 7 4)")) == term(m, "8 4"));
  CHECK(eng.reduce(term(m, "max(remove(8, 8 7 4))")) == term(m, "7"));
}

TEST_CASE("reduce: queens validity walks the list from the near column") {
  Module& m = corpus().get("QUEENS");
  Engine eng(m);
  CHECK(eng.reduce(term(m, "isValid(1 5, 8)")) == eng.true_term());
  CHECK(eng.reduce(term(m, "isValid(1 5, 6)")) == eng.false_term());  // 5-6 diagonal
  CHECK(eng.reduce(term(m, "isValid(1 5, 5)")) == eng.false_term());  // same row
  CHECK(eng.reduce(term(m, "isValid(nil, 4)")) == eng.true_term());
  CHECK(eng.reduce(term(m, "isValid(1, 3)")) == eng.true_term());
  CHECK(eng.reduce(term(m, "isValid(1, 2)")) == eng.false_term());
  CHECK(eng.reduce(term(m, "isSolution(1 5 8 6 3 7 2 4)")) == eng.true_term());
  CHECK(eng.reduce(term(m, "isSolution(1 5)")) == eng.false_term());
}

TEST_CASE("reduce: set idempotence through extension matching") {
  Module& m = corpus().get("QUEENS");
  Engine eng(m);
  CHECK(eng.reduce(term(m, "3, 1, 3, 2, 1")) == term(m, "1, 2, 3"));
}

TEST_CASE("successors: assignment condition enumerates the set in order") {
  Module& m = corpus().get("QUEENS");
  Engine eng(m);
  std::vector<TermRef> succ = eng.successors(term(m, "nil"));
  REQUIRE(succ.size() == 8);
  for (int i = 0; i < 8; ++i) CHECK(succ[i] == term(m, std::to_string(i + 1)));
  // and one level down: results are L N with N from the full set again
  succ = eng.successors(term(m, "2"));
  REQUIRE(succ.size() == 8);
  CHECK(succ[0] == term(m, "2 1"));
  CHECK(succ[7] == term(m, "2 8"));
}

TEST_CASE("successors: commutative matching yields both assignments") {
  Module& m = corpus().get("BLACKBOARD");
  Engine eng(m);
  std::vector<TermRef> succ = eng.successors(term(m, "8 7"));
  REQUIRE(succ.size() == 2);
  CHECK(succ[0] == term(m, "7"));  // (7 + 8) quo 2, both orders
  CHECK(succ[1] == term(m, "7"));
  succ = eng.successors(term(m, "8 7 4"));
  CHECK(succ.size() == 6);  // three pairs, two assignments each
}

TEST_CASE("rule_matches: top matching has no extension, anywhere does") {
  Module& m = corpus().get("15PUZZLE-MULTI");
  Engine eng(m);
  const Rule* mv = eng.rules_labeled("multimv").at(0);
  TermRef subject = term(m, "1 b 2 b 3");
  auto top = eng.rule_matches(*mv, subject, {}, true);
  CHECK(top.size() == 2);  // blank at slot 2 or slot 4, whole row each time
  auto anywhere = eng.rule_matches(*mv, subject, {}, false);
  CHECK(anywhere.size() > top.size());
}

TEST_CASE("rewrite: bounded loop ping-pongs the leading rules") {
  Module& m = corpus().get("15PUZZLE");
  Engine eng(m);
  TermRef t = term(m, "1 b 2 3");
  CHECK(eng.rewrite(t, 1) == term(m, "b 1 2 3"));   // left
  CHECK(eng.rewrite(t, 2) == term(m, "1 b 2 3"));   // left then right
  CHECK(eng.rewrite(t, 21) == term(m, "b 1 2 3"));
  CHECK(eng.rewrite(t, 0) == t);
}

TEST_CASE("search: =>* finds both row completions at the expected states") {
  Module& m = corpus().get("15PUZZLE");
  Engine eng(m);
  Search s(eng, term(m, "1 b 2 3"), term(m, "1 2 R"), {}, SearchArrow::Star);
  TermRef rv = var_of(m, "R");

  auto sol = s.next();
  REQUIRE(sol.has_value());
  CHECK(sol->state == 2);
  CHECK(sol->subst.get(rv) == term(m, "b 3"));

  sol = s.next();
  REQUIRE(sol.has_value());
  CHECK(sol->state == 3);
  CHECK(sol->subst.get(rv) == term(m, "3 b"));

  CHECK_FALSE(s.next().has_value());
  CHECK(s.states() == 4);
}

TEST_CASE("search: =>* matches the initial state, =>+ does not") {
  Module& m = corpus().get("15PUZZLE");
  Engine eng(m);
  TermRef t = term(m, "1 b 2 3");
  {
    Search s(eng, t, t, {}, SearchArrow::Star);
    auto sol = s.next();
    REQUIRE(sol.has_value());
    CHECK(sol->state == 0);
  }
  {
    // the initial state is never re-created, so a cycle back to it is not a
    // =>+ solution
    Search s(eng, t, t, {}, SearchArrow::Plus);
    CHECK_FALSE(s.next().has_value());
    CHECK(s.states() == 4);
  }
}

TEST_CASE("search: =>! reports only terminal states") {
  Module& m = corpus().get("BLACKBOARD");
  Engine eng(m);
  Search s(eng, term(m, "8 7"), var_of(m, "N"), {}, SearchArrow::Bang);
  auto sol = s.next();
  REQUIRE(sol.has_value());
  CHECK(sol->state == 1);
  CHECK(sol->subst.get(var_of(m, "N")) == term(m, "7"));
  CHECK_FALSE(s.next().has_value());
  CHECK(s.states() == 2);
}

TEST_CASE("search: such-that condition filters matches") {
  Module& m = corpus().get("BLACKBOARD");
  Engine eng(m);
  Search s(eng, term(m, "8 7"), var_of(m, "N"),
           parse_condition(m, lex("N > 5")), SearchArrow::Star);
  auto sol = s.next();
  REQUIRE(sol.has_value());
  CHECK(sol->subst.get(var_of(m, "N")) == term(m, "7"));
  CHECK_FALSE(s.next().has_value());
}

TEST_CASE("limits: runaway searches and reductions stop with LimitError") {
  Module& m = corpus().get("DIVERGE");
  Limits lim;
  lim.max_states = 50;
  Engine eng(m, lim);
  Search s(eng, term(m, "cfg(0)"), term(m, "done"), {}, SearchArrow::Star);
  auto sol = s.next();  // done is reachable in one step
  REQUIRE(sol.has_value());
  auto drain = [&] {
    while (s.next().has_value()) {
    }
  };
  CHECK_THROWS_AS(drain(), LimitError);
}
