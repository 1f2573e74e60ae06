#pragma once

#include <deque>
#include <string>
#include <unordered_set>
#include <vector>

#include "strew/cond.hpp"
#include "strew/term.hpp"

namespace strew {

struct StrategyExpr;
using StratRef = const StrategyExpr*;

enum class StratKind : uint8_t {
  Idle,      // succeeds with the subject unchanged
  Fail,      // no results
  RuleApp,   // label[X <- T, ...]{S1, ..., Sn}, optionally top(...)
  All,       // any executable rule anywhere
  Test,      // match/xmatch/amatch P s.t. C  (subject unchanged on success)
  MatchRew,  // matchrew/xmatchrew/amatchrew P s.t. C by X1 using S1, ...
  Seq,       // S1 ; S2
  Alt,       // S1 | S2
  Star,      // S *
  Cond,      // S1 ? S2 : S3
  One,       // one(S): at most one result
  Call,      // declared strategy: name(T1, ..., Tn)
};

// match = whole subject, xmatch = whole subject with extension,
// amatch = anywhere.
enum class MatchMode : uint8_t { Top, TopExt, Anywhere };

struct StrategyExpr {
  StratKind kind;
  std::string name;                                 // RuleApp label / Call name
  std::vector<std::pair<TermRef, TermRef>> subst;   // RuleApp: X <- T
  std::vector<StratRef> children;                   // RuleApp cond strategies,
                                                    // Seq/Alt/Cond/Star/One
  bool top = false;                                 // RuleApp: top(...)
  MatchMode mode = MatchMode::Top;
  TermRef pattern = nullptr;                        // Test/MatchRew
  std::vector<CondFrag> cond;                       // Test/MatchRew
  std::vector<std::pair<TermRef, StratRef>> using_pairs;  // MatchRew
  std::vector<TermRef> call_args;                   // Call
  uint64_t hash = 0;
};

// Hash-consing store for strategy expressions: structural equality is
// pointer identity, and the derived combinators (+, or-else, not, !, try,
// test) are expanded into the core ones at construction, so equal strategies
// are literally the same node.
class StrategyStore {
 public:
  StratRef idle();
  StratRef fail();
  StratRef rule_app(std::string label,
                    std::vector<std::pair<TermRef, TermRef>> subst,
                    std::vector<StratRef> cond_strats, bool top);
  StratRef all();
  StratRef test(MatchMode mode, TermRef pattern, std::vector<CondFrag> cond);
  StratRef match_rew(MatchMode mode, TermRef pattern,
                     std::vector<CondFrag> cond,
                     std::vector<std::pair<TermRef, StratRef>> using_pairs);
  StratRef seq(StratRef a, StratRef b);
  StratRef alt(StratRef a, StratRef b);
  StratRef star(StratRef a);
  StratRef cond(StratRef a, StratRef b, StratRef c);
  StratRef one(StratRef a);
  StratRef call(std::string name, std::vector<TermRef> args);

  // Derived combinators.
  StratRef plus(StratRef a) { return seq(a, star(a)); }            // a+
  StratRef or_else(StratRef a, StratRef b) { return cond(a, idle(), b); }
  StratRef negation(StratRef a) { return cond(a, fail(), idle()); }  // not(a)
  StratRef bang(StratRef a) { return seq(star(a), negation(a)); }    // a!
  StratRef try_(StratRef a) { return cond(a, idle(), idle()); }
  StratRef test_op(StratRef a) { return negation(negation(a)); }

 private:
  struct Hash {
    size_t operator()(StratRef s) const { return s->hash; }
  };
  struct Eq {
    bool operator()(StratRef a, StratRef b) const;
  };
  StratRef intern(StrategyExpr&& e);

  std::deque<StrategyExpr> nodes_;
  std::unordered_set<StratRef, Hash, Eq> index_;
};

}  // namespace strew
