#include <doctest.h>

#include "corpus_fix.hpp"
#include "strew/printer.hpp"

using namespace strew;
using testutil::corpus;
using testutil::term;

namespace {

const char* kModules[] = {
    "15PUZZLE-BOARD",  "15PUZZLE",           "15PUZZLE-LOG",
    "15PUZZLE-MULTI",  "15PUZZLE-STRATS",    "15PUZZLE-AUX",
    "15PUZZLE-SOLVER", "15PUZZLE-PAIRS",     "15PUZZLE-PAIRS-AUX",
    "15PUZZLE-PAIRS-SOLVER", "BLACKBOARD",   "BLACKBOARD-STRAT",
    "QUEENS",          "QUEENS-STRAT",       "BT-QUEENS",
    "DIVERGE",         "DIVERGE-STRAT"};

void roundtrip_term(Module& m, TermRef t) {
  std::string text = print_term(m, t);
  CAPTURE(text);
  CHECK(parse_term(m, lex(text)) == t);
}

void roundtrip_cond(Module& m, const std::vector<CondFrag>& cond) {
  for (const CondFrag& f : cond) {
    roundtrip_term(m, f.lhs);
    if (f.rhs) roundtrip_term(m, f.rhs);
  }
}

}  // namespace

TEST_CASE("round trip: every statement term prints back to the same node") {
  for (const char* name : kModules) {
    CAPTURE(name);
    Module& m = corpus().get(name);
    for (const Equation& e : m.equations) {
      roundtrip_term(m, e.lhs);
      roundtrip_term(m, e.rhs);
      roundtrip_cond(m, e.cond);
    }
    for (const Rule& r : m.rules) {
      roundtrip_term(m, r.lhs);
      roundtrip_term(m, r.rhs);
      roundtrip_cond(m, r.cond);
    }
  }
}

TEST_CASE("round trip: strategy definition bodies and call arguments") {
  for (const char* name : kModules) {
    CAPTURE(name);
    Module& m = corpus().get(name);
    for (const StrategyDef& d : m.strat_defs) {
      CAPTURE(d.name);
      std::string text = print_strategy(m, d.body);
      CAPTURE(text);
      CHECK(parse_strategy(m, lex(text)) == d.body);
      roundtrip_cond(m, d.cond);
      for (TermRef p : d.params) roundtrip_term(m, p);
    }
  }
}

TEST_CASE("printing matches the usual Maude notation") {
  Module& m = corpus().get("15PUZZLE-LOG");
  CHECK(print_term(m, term(m, "1 2 b ; 3 b 4")) == "1 2 b ; 3 b 4");
  CHECK(print_term(m, term(m, "< nil | b 1 2 >")) == "< nil | b 1 2 >");
  CHECK(print_term(m, term(m, "< 'left 'up | 1 b 2 >")) ==
        "< 'left 'up | 1 b 2 >");
  // _+_ is comm; canonical argument order puts the numeral first
  CHECK(print_term(m, term(m, "size(1 b 2) + 1")) == "1 + size(1 b 2)");
  CHECK(print_term(m, term(m, "size((nil).List{Qid})")) ==
        "size((nil).List{Qid})");
  CHECK(print_sorted_term(m, term(m, "b 1 2 ; 3 b 4")) ==
        "Puzzle: b 1 2 ; 3 b 4");

  Module& q = corpus().get("QUEENS");
  CHECK(print_term(q, term(q, "1, 2, 3")) == "1, 2, 3");
  CHECK(print_term(q, term(q, "1 5 8")) == "1 5 8");
  CHECK(print_term(q, term(q, "isValid(1 5, 8)")) == "isValid(1 5, 8)");
  CHECK(print_term(q, term(q, "nil")) == "nil");

  // variables carry their sort, numerals are decimal
  Module& s = corpus().get("15PUZZLE-STRATS");
  TermRef v = s.terms->var("P", s.sig.find_sort("Puzzle"));
  CHECK(print_term(s, v) == "P:Puzzle");
  CHECK(print_term(s, term(s, "-7")) == "-7");
  // prefix operators chain without parentheses
  CHECK(print_term(s, term(s, "- s(N:Nat)")) == "- s N:Nat");
}

TEST_CASE("parse: mixfix precedence and if_then_else_fi") {
  Module& m = corpus().get("BLACKBOARD-STRAT");
  // if_then_else_fi binds its pieces, comparison binds tighter than it
  TermRef t = term(m, "if 1 < 2 then 3 else 4 fi");
  CHECK(m.sig.symbol(t->sym).name == "if_then_else_fi");
  roundtrip_term(m, t);

  Module& q = corpus().get("QUEENS");
  TermRef u = term(q, "1 =/= 2 and-then 3 =/= 4");
  CHECK(q.sig.symbol(u->sym).name == "_and-then_");
  roundtrip_term(q, u);
}

TEST_CASE("parse: command forms") {
  Command c = parse_command(lex("srewrite [2] b 1 2 ; b 3 using right + ."));
  CHECK(c.kind == Command::Kind::SRewrite);
  CHECK(c.bound == 2);
  REQUIRE(c.subject.size() == 6);
  CHECK(c.subject.front().text == "b");
  CHECK(c.strategy.size() == 2);

  c = parse_command(lex("dsrew [1] nil using solve ."));
  CHECK(c.kind == Command::Kind::DSRewrite);
  CHECK(c.bound == 1);

  c = parse_command(lex("reduce in 15PUZZLE : size(1 b 2) ."));
  CHECK(c.kind == Command::Kind::Reduce);
  CHECK(c.module_name == "15PUZZLE");
  CHECK(c.subject.front().text == "size");

  c = parse_command(lex("rewrite [21] 1 b 2 3 ."));
  CHECK(c.kind == Command::Kind::Rewrite);
  CHECK(c.bound == 21);

  c = parse_command(
      lex("search [1] puzzle1 =>* P:Puzzle s.t. P:Puzzle = solved ."));
  CHECK(c.kind == Command::Kind::Search);
  CHECK(c.bound == 1);
  CHECK(c.arrow == Command::Arrow::Star);
  CHECK(!c.pattern.empty());
  CHECK(!c.cond.empty());

  c = parse_command(lex("search 1 b 2 3 =>! X:Row ."));
  CHECK(c.arrow == Command::Arrow::Bang);
  CHECK(c.cond.empty());

  c = parse_command(lex("continue ."));
  CHECK(c.kind == Command::Kind::Continue);
  CHECK(c.bound == 1);
  c = parse_command(lex("continue 5 ."));
  CHECK(c.bound == 5);

  c = parse_command(lex("select BLACKBOARD-STRAT ."));
  CHECK(c.kind == Command::Kind::Select);
  CHECK(c.module_name == "BLACKBOARD-STRAT");

  c = parse_command(lex("load corpus/puzzle.maude"));
  CHECK(c.kind == Command::Kind::Load);
  CHECK(c.path == "corpus/puzzle.maude");

  c = parse_command(lex("quit"));
  CHECK(c.kind == Command::Kind::Quit);
}

TEST_CASE("parse: rejected inputs carry useful errors") {
  Module& m = corpus().get("15PUZZLE");
  CHECK_THROWS_AS(parse_term(m, lex("frobnicate")), ParseError);
  CHECK_THROWS_AS(parse_term(m, lex("size(1 b")), ParseError);
  CHECK_THROWS_AS(parse_term(m, lex("1 b 2 )")), ParseError);
  CHECK_THROWS_AS(parse_term(m, lex("size(1, 2)")), ParseError);

  ModuleDb db;
  CHECK_THROWS_AS(db.load("fmod M{X :: TRIV} is endfm"), ParseError);
  CHECK_THROWS_AS(db.load("fmod BROKEN is sort S endfm"), ParseError);
  ModuleDb db2;
  db2.load("fmod OK is sort S . op f : S -> S . endfm");
  CHECK(db2.has("OK"));
  CHECK_THROWS_AS(db2.get("NOPE"), ParseError);
}
