#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "strew/match.hpp"
#include "strew/module.hpp"

namespace strew {

struct Limits {
  long long max_eq_steps = 1'000'000;  // reduction work per command
  long long max_states = 100'000;      // states per reachability search
};

enum class SearchArrow : uint8_t { Star, Plus, Bang };

// Visits substitutions left to right; returning true stops the walk.
using SubstVisitor = std::function<bool(const Subst&)>;

// Equational and rule rewriting over one module: memoized innermost reduction
// with the built-in folds, condition solving, one-step rule application and
// the plain `rewrite` loop. The strategy machinery drives rule application
// through rule_matches/visit_condition so it can control rewriting condition
// fragments itself.
class Engine {
 public:
  explicit Engine(Module& m, Limits lim = {});

  Module& mod() { return *mod_; }
  TermStore& store() { return *mod_->terms; }
  const Signature& sig() const { return mod_->sig; }
  const Limits& limits() const { return lim_; }

  TermRef true_term() const { return true_; }
  TermRef false_term() const { return false_; }

  // Rewrite counter: equation applications, built-in folds and rule steps.
  long long rewrites() const { return rewrites_; }
  void count_rewrite(long long n = 1) { rewrites_ += n; }
  void reset_counters() {
    rewrites_ = 0;
    eq_steps_ = 0;
  }

  // Equational normal form: innermost, memoized across calls.
  TermRef reduce(TermRef t);

  // Solutions of frags[begin..end) extending `s`. Rewriting condition
  // fragments are solved by an internal =>* search when allowed; the strategy
  // machinery passes false and handles them itself.
  bool visit_condition(const std::vector<CondFrag>& frags, size_t begin,
                       size_t end, const Subst& s, const SubstVisitor& fn,
                       bool search_rewrite_frags = true);
  bool check_condition(const std::vector<CondFrag>& frags, const Subst& s);
  std::vector<Subst> condition_solutions(const std::vector<CondFrag>& frags,
                                         const Subst& s);

  // Matches of one rule's lefthand side against `subject`, conditions not yet
  // solved. Anywhere-matching uses extension; top matching does not.
  struct RuleMatch {
    const Rule* rule;
    Subst subst;
    TermRef context;
  };
  std::vector<RuleMatch> rule_matches(const Rule& r, TermRef subject,
                                      const Subst& init, bool top_only);

  // All rules with this label, nonexec included (strategies may apply them).
  const std::vector<const Rule*>& rules_labeled(const std::string& label);
  // Rules `search`/`rewrite`/`all` apply: unlabeled or labeled, not nonexec.
  const std::vector<const Rule*>& executable_rules() const {
    return executable_;
  }

  // All one-step rule rewrites of t (rule declaration order, match order),
  // each reduced to normal form. Duplicates are kept.
  std::vector<TermRef> successors(TermRef t);
  // First one-step rule rewrite, reduced.
  std::optional<TermRef> step(TermRef t);

  // reduce, then repeated first-match rule application: at most `bound` rule
  // steps when bound >= 0, until no rule applies otherwise.
  TermRef rewrite(TermRef t, long long bound = -1);

 private:
  TermRef reduce_uncached(TermRef t);
  TermRef fold_builtin(TermRef t, const Symbol& sym);  // nullptr: no fold
  TermRef apply_equations(TermRef t);                  // nullptr: none applies

  Module* mod_;
  Limits lim_;
  TermRef true_ = nullptr;
  TermRef false_ = nullptr;
  long long rewrites_ = 0;
  long long eq_steps_ = 0;
  std::unordered_map<TermRef, TermRef> memo_;
  std::unordered_map<SymbolId, std::vector<const Equation*>> eqs_by_sym_;
  std::unordered_map<std::string, std::vector<const Rule*>> by_label_;
  std::vector<const Rule*> executable_;
};

// Breadth-first reachability search `subject =>arrow pattern [s.t. cond]`,
// incremental so `continue` can resume it. A solution is a pattern match (one
// per matching substitution whose condition holds) of a newly created state;
// for =>! only states without successors are matched, when expanded.
class Search {
 public:
  Search(Engine& eng, TermRef subject, TermRef pattern,
         std::vector<CondFrag> cond, SearchArrow arrow);

  struct Solution {
    long long state;
    Subst subst;
  };
  // Next solution, or nullopt once the reachable space is exhausted.
  std::optional<Solution> next();

  long long states() const { return static_cast<long long>(terms_.size()); }

 private:
  void match_state(long long id);
  long long add_state(TermRef t);  // -1 when already present

  Engine& eng_;
  TermRef pattern_;
  std::vector<CondFrag> cond_;
  SearchArrow arrow_;
  std::vector<TermRef> terms_;  // state id -> term
  std::unordered_map<TermRef, long long> ids_;
  std::deque<Solution> pending_;
  long long next_to_expand_ = 0;
};

}  // namespace strew
