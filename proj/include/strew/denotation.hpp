#pragma once

#include <optional>
#include <set>

#include "strew/engine.hpp"
#include "strew/vm.hpp"

namespace strew {

// A bounded element of the result powerdomain: a finite set of terms plus a
// flag recording that deeper evaluation could still add more.
struct DenoResult {
  std::set<TermRef> terms;
  bool bottom = false;

  bool operator==(const DenoResult& o) const = default;
};

// Approximation order: A <= B when A = B, or A still carries bottom and B
// extends its term set.
bool deno_leq(const DenoResult& a, const DenoResult& b);

// Direct recursive evaluation of a strategy's solution set, used as a
// differential-testing oracle for the search virtual machine. Strategy calls
// at depth 0 yield ({}, bottom); at depth k > 0 the matching definition
// bodies are evaluated at depth k - 1. Results form an ascending chain in the
// depth, and a bottom-free result is final: deeper evaluation returns the
// identical set. Iteration is computed as a fixpoint on the accumulated
// solution set, which is exact on finite reachable spaces; a step budget
// turns runaway evaluations into a bottom flag instead of nontermination.
//
// one(...) is not evaluated (it has no set denotation) and raises EvalError.
class Denotation {
 public:
  explicit Denotation(Engine& eng, long long step_budget = 1'000'000);

  DenoResult eval(StratRef s, TermRef t, int depth);

  // Iterative deepening until the bottom flag clears; nullopt when it never
  // does within max_depth.
  std::optional<DenoResult> converge(StratRef s, TermRef t, int max_depth);

 private:
  DenoResult ev(StratRef s, TermRef t, int depth);
  DenoResult let_into(const DenoResult& a, StratRef b, int depth);
  DenoResult ev_test(StratRef s, TermRef t);
  DenoResult ev_matchrew(StratRef s, TermRef t, int depth);
  DenoResult ev_ruleapp(StratRef s, TermRef t, int depth);
  void rule_cond(DenoResult& out, const Rule* r, StratRef s, const Subst& sigma,
                 size_t frag, size_t snext, TermRef context, int depth);
  DenoResult ev_call(const std::string& name,
                     const std::vector<TermRef>& raw_args, TermRef t,
                     int depth);
  bool cond_holds(const std::vector<CondFrag>& cond, const Subst& s);

  Engine& eng_;
  Module& mod_;
  TermStore& ts_;
  long long budget_;
  long long steps_ = 0;
};

}  // namespace strew
