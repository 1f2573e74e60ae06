#include <set>
#include <string>
#include <vector>

#include "corpus_fix.hpp"
#include "strat_gen.hpp"
#include "strew/denotation.hpp"
#include "strew/printer.hpp"
#include "strew/vm.hpp"

using namespace strew;
using namespace strew::testutil;

namespace {

StratRef strat(Module& m, const std::string& text) {
  return parse_strategy(m, lex(text));
}

std::set<TermRef> vm_set(Engine& eng, TermRef subject, StratRef s, bool fair) {
  StrategySearch ss(eng, subject, s, fair);
  std::set<TermRef> out;
  while (std::optional<TermRef> r = ss.next()) out.insert(*r);
  return out;
}

std::set<std::string> names(const Module& m, const std::set<TermRef>& ts) {
  std::set<std::string> out;
  for (TermRef t : ts) out.insert(print_term(m, t));
  return out;
}

}  // namespace

TEST_CASE("denotation: base combinators") {
  Module& m = corpus().get("15PUZZLE");
  Engine eng(m);
  Denotation den(eng);
  TermRef t = term(m, "1 b 2 3");

  CHECK(den.eval(strat(m, "idle"), t, 0) == DenoResult{{t}, false});
  CHECK(den.eval(strat(m, "fail"), t, 0) == DenoResult{});
  CHECK(names(m, den.eval(strat(m, "right *"), t, 0).terms) ==
        std::set<std::string>{"1 b 2 3", "1 2 b 3", "1 2 3 b"});
  CHECK_FALSE(den.eval(strat(m, "right *"), t, 0).bottom);

  // conditional: test branch when the condition has solutions, else otherwise
  CHECK(den.eval(strat(m, "idle ? left : right"), t, 3) ==
        den.eval(strat(m, "left"), t, 3));
  CHECK(den.eval(strat(m, "fail ? left : right"), t, 3) ==
        den.eval(strat(m, "right"), t, 3));
  // the right! tail: no solution while a right move exists
  CHECK(den.eval(strat(m, "right ? fail : idle"), t, 0) == DenoResult{});
}

TEST_CASE("denotation: calls consume depth and converge") {
  Module& m = corpus().get("15PUZZLE-STRATS");
  Engine eng(m);
  Denotation den(eng);
  TermRef t = term(m, "1 b 2 3 4");
  StratRef s = strat(m, "move(2, 0)");

  DenoResult d0 = den.eval(s, t, 0);
  CHECK(d0 == DenoResult{{}, true});  // a call at depth 0 is undecided

  // move(2,0) -> move(1,0) -> move(0,0): three call layers
  std::vector<DenoResult> chain;
  for (int d = 0; d <= 5; ++d) chain.push_back(den.eval(s, t, d));
  for (int d = 0; d < 5; ++d) CHECK(deno_leq(chain[d], chain[d + 1]));
  CHECK(chain[2].bottom);
  CHECK_FALSE(chain[3].bottom);
  CHECK(names(m, chain[3].terms) == std::set<std::string>{"1 2 3 b 4"});
  // final sets are stable
  CHECK(chain[4] == chain[3]);
  CHECK(chain[5] == chain[3]);

  std::optional<DenoResult> c = den.converge(s, t, 8);
  REQUIRE(c.has_value());
  CHECK(*c == chain[3]);
}

TEST_CASE("denotation: divergent definitions never converge") {
  Module& m = corpus().get("TINY-STRAT");
  Engine eng(m);
  Denotation den(eng, 20'000);
  TermRef t = term(m, "a");

  // growing parameter: every approximant is undecided
  for (int d = 0; d <= 6; ++d) CHECK(den.eval(strat(m, "inf(0)"), t, d).bottom);
  CHECK_FALSE(den.converge(strat(m, "inf(0)"), t, 6).has_value());

  // parameterless tail recursion: still bottom denotationally, but the
  // machine's cycle detection cuts it and reports no solutions
  CHECK_FALSE(den.converge(strat(m, "loopcall"), t, 6).has_value());
  CHECK(vm_set(eng, t, strat(m, "loopcall"), true).empty());
  CHECK(vm_set(eng, t, strat(m, "loopcall"), false).empty());
}

// ---------------------------------------------------------------- randomized

namespace {

void differential(Module& m, StratGen& g,
                  const std::vector<std::string>& subjects, int iters) {
  Engine eng(m);
  Denotation den(eng, 2'000'000);
  for (int i = 0; i < iters; ++i) {
    std::string stext = g.gen(4);
    TermRef subject = term(m, subjects[g.pick(subjects.size())]);
    StratRef s = strat(m, stext);
    CAPTURE(stext);
    CAPTURE(print_term(m, subject));
    std::optional<DenoResult> oracle = den.converge(s, subject, 12);
    REQUIRE(oracle.has_value());
    std::set<TermRef> fair = vm_set(eng, subject, s, true);
    std::set<TermRef> dfs = vm_set(eng, subject, s, false);
    CHECK(oracle->terms == fair);
    CHECK(oracle->terms == dfs);
  }
}

}  // namespace

TEST_CASE("denotation: differential against the VM on a four-state system") {
  Module& m = corpus().get("TINY");
  StratGen g(0xace15u, {"idle", "fail", "ab", "bc", "ca", "cd", "top(ab)",
                        "match X:St", "match a", "match d", "all"});
  differential(m, g, {"a", "b", "c", "d"}, 250);
}

TEST_CASE("denotation: differential against the VM on the blackboard") {
  Module& m = corpus().get("BLACKBOARD-STRAT");
  StratGen g(0xb0a2du,
             {"idle", "fail", "play", "top(play)", "match B:Blackboard",
              "xmatch N:Nat", "match N:Nat M:Nat", "maxmin", "maxmax",
              "minmin", "all", "matchrew B:Blackboard by B:Blackboard using play",
              "xmatchrew N:Nat M:Nat by N:Nat using (play | idle)"});
  differential(m, g, {"1 2 3", "1 2", "2 2", "1", "3"}, 250);
}
