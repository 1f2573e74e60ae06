#include "strew/denotation.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "strew/diag.hpp"

namespace strew {

bool deno_leq(const DenoResult& a, const DenoResult& b) {
  if (a == b) return true;
  return a.bottom && std::includes(b.terms.begin(), b.terms.end(),
                                   a.terms.begin(), a.terms.end());
}

Denotation::Denotation(Engine& eng, long long step_budget)
    : eng_(eng), mod_(eng.mod()), ts_(eng.store()), budget_(step_budget) {}

DenoResult Denotation::eval(StratRef s, TermRef t, int depth) {
  steps_ = budget_;
  return ev(s, eng_.reduce(t), depth);
}

std::optional<DenoResult> Denotation::converge(StratRef s, TermRef t,
                                               int max_depth) {
  for (int d = 0; d <= max_depth; ++d) {
    DenoResult r = eval(s, t, d);
    if (!r.bottom) return r;
  }
  return std::nullopt;
}

bool Denotation::cond_holds(const std::vector<CondFrag>& cond,
                            const Subst& s) {
  if (cond.empty()) return true;
  return eng_.visit_condition(cond, 0, cond.size(), s,
                              [](const Subst&) { return true; }, false);
}

DenoResult Denotation::let_into(const DenoResult& a, StratRef b, int depth) {
  DenoResult out;
  out.bottom = a.bottom;
  for (TermRef u : a.terms) {
    DenoResult r = ev(b, u, depth);
    out.bottom |= r.bottom;
    out.terms.insert(r.terms.begin(), r.terms.end());
  }
  return out;
}

DenoResult Denotation::ev(StratRef s, TermRef t, int depth) {
  if (--steps_ < 0) return DenoResult{{}, true};
  switch (s->kind) {
    case StratKind::Idle:
      return DenoResult{{t}, false};
    case StratKind::Fail:
      return DenoResult{};
    case StratKind::Seq:
      return let_into(ev(s->children[0], t, depth), s->children[1], depth);
    case StratKind::Alt: {
      DenoResult a = ev(s->children[0], t, depth);
      DenoResult b = ev(s->children[1], t, depth);
      a.terms.insert(b.terms.begin(), b.terms.end());
      a.bottom |= b.bottom;
      return a;
    }
    case StratKind::Star: {
      // fixpoint on the accumulated set: every term reachable by any number
      // of iterations is a solution
      DenoResult out;
      out.terms.insert(t);
      std::deque<TermRef> work{t};
      while (!work.empty()) {
        TermRef u = work.front();
        work.pop_front();
        DenoResult r = ev(s->children[0], u, depth);
        out.bottom |= r.bottom;
        for (TermRef v : r.terms)
          if (out.terms.insert(v).second) work.push_back(v);
      }
      return out;
    }
    case StratKind::Cond: {
      DenoResult c = ev(s->children[0], t, depth);
      if (!c.terms.empty()) return let_into(c, s->children[1], depth);
      if (c.bottom) return DenoResult{{}, true};  // neither branch is decided
      return ev(s->children[2], t, depth);
    }
    case StratKind::All: {
      DenoResult out;
      for (TermRef r : eng_.successors(t)) out.terms.insert(r);
      return out;
    }
    case StratKind::Test:
      return ev_test(s, t);
    case StratKind::MatchRew:
      return ev_matchrew(s, t, depth);
    case StratKind::RuleApp:
      return ev_ruleapp(s, t, depth);
    case StratKind::Call:
      return ev_call(s->name, s->call_args, t, depth);
    case StratKind::One:
      throw EvalError("one(...) has no set denotation");
  }
  return DenoResult{};
}

DenoResult Denotation::ev_test(StratRef s, TermRef t) {
  bool ok = false;
  switch (s->mode) {
    case MatchMode::Top:
      for (const Subst& m1 : match_top(ts_, t, s->pattern))
        if (cond_holds(s->cond, m1)) {
          ok = true;
          break;
        }
      break;
    case MatchMode::TopExt:
      for (const MatchResult& mr : match_with_extension(ts_, t, s->pattern))
        if (cond_holds(s->cond, mr.subst)) {
          ok = true;
          break;
        }
      break;
    case MatchMode::Anywhere:
      for (const MatchResult& mr : match_anywhere(ts_, t, s->pattern))
        if (cond_holds(s->cond, mr.subst)) {
          ok = true;
          break;
        }
      break;
  }
  return ok ? DenoResult{{t}, false} : DenoResult{};
}

DenoResult Denotation::ev_matchrew(StratRef s, TermRef t, int depth) {
  DenoResult out;
  auto with_match = [&](const Subst& m1, TermRef context) {
    auto go = [&](const Subst& sf) {
      // evaluate every subterm strategy on its original subterm: siblings do
      // not observe each other's rewrites
      std::vector<std::vector<TermRef>> choices;
      choices.reserve(s->using_pairs.size());
      for (const auto& [xvar, alpha] : s->using_pairs) {
        TermRef sub = sf.get(xvar);
        if (!sub)
          throw EvalError("matchrew variable " + xvar->name +
                          " is not bound by the pattern");
        DenoResult d =
            ev(instantiate_strategy(mod_, alpha, sf), sub, depth);
        out.bottom |= d.bottom;
        choices.emplace_back(d.terms.begin(), d.terms.end());
      }
      for (const auto& c : choices)
        if (c.empty()) return false;
      // all combinations, rebuilt through the pattern so nonlinear variables
      // update everywhere
      std::vector<size_t> ix(choices.size(), 0);
      for (;;) {
        Subst s2 = sf;
        for (size_t j = 0; j < choices.size(); ++j)
          s2 = s2.with_override(s->using_pairs[j].first, choices[j][ix[j]]);
        out.terms.insert(
            eng_.reduce(plug(ts_, context, apply_subst(ts_, s2, s->pattern))));
        size_t j = 0;
        while (j < ix.size() && ++ix[j] == choices[j].size()) ix[j++] = 0;
        if (j == ix.size()) break;
      }
      return false;
    };
    if (s->cond.empty())
      go(m1);
    else
      eng_.visit_condition(s->cond, 0, s->cond.size(), m1, go, false);
  };
  switch (s->mode) {
    case MatchMode::Top: {
      TermRef hole = ts_.hole(mod_.sig.kind_of(t->sort));
      for (const Subst& m1 : match_top(ts_, t, s->pattern))
        with_match(m1, hole);
      break;
    }
    case MatchMode::TopExt:
      for (const MatchResult& mr : match_with_extension(ts_, t, s->pattern))
        with_match(mr.subst, mr.context);
      break;
    case MatchMode::Anywhere:
      for (const MatchResult& mr : match_anywhere(ts_, t, s->pattern))
        with_match(mr.subst, mr.context);
      break;
  }
  return out;
}

static size_t rw_frag_count(const Rule* r) {
  size_t n = 0;
  for (const CondFrag& f : r->cond)
    if (f.kind == CondFrag::Kind::Rewrite) ++n;
  return n;
}

DenoResult Denotation::ev_ruleapp(StratRef s, TermRef t, int depth) {
  const auto& rules = eng_.rules_labeled(s->name);
  if (rules.empty()) {
    bool bare = s->subst.empty() && s->children.empty() && !s->top;
    if (bare)
      for (const StrategyDef& d : mod_.strat_defs)
        if (d.name == s->name && d.params.empty())
          return ev_call(s->name, {}, t, depth);
    throw EvalError("no rule labeled '" + s->name + "'");
  }
  Subst init;
  for (const auto& [v, val] : s->subst) init = init.with(v, eng_.reduce(val));
  DenoResult out;
  for (const Rule* r : rules) {
    if (!s->children.empty() && s->children.size() != rw_frag_count(r))
      continue;
    for (const Engine::RuleMatch& m1 : eng_.rule_matches(*r, t, init, s->top)) {
      if (s->children.empty()) {
        // uncontrolled rewriting fragments: the engine's own reachability
        eng_.visit_condition(
            r->cond, 0, r->cond.size(), m1.subst,
            [&](const Subst& sf) {
              out.terms.insert(eng_.reduce(
                  plug(ts_, m1.context, apply_subst(ts_, sf, r->rhs))));
              return false;
            },
            true);
      } else {
        rule_cond(out, r, s, m1.subst, 0, 0, m1.context, depth);
      }
    }
  }
  return out;
}

void Denotation::rule_cond(DenoResult& out, const Rule* r, StratRef s,
                           const Subst& sigma, size_t frag, size_t snext,
                           TermRef context, int depth) {
  size_t stop = frag;
  while (stop < r->cond.size() && r->cond[stop].kind != CondFrag::Kind::Rewrite)
    ++stop;
  eng_.visit_condition(
      r->cond, frag, stop, sigma,
      [&](const Subst& s2) {
        if (stop == r->cond.size()) {
          out.terms.insert(
              eng_.reduce(plug(ts_, context, apply_subst(ts_, s2, r->rhs))));
          return false;
        }
        const CondFrag& f = r->cond[stop];
        DenoResult d = ev(instantiate_strategy(mod_, s->children[snext], s2),
                          eng_.reduce(apply_subst(ts_, s2, f.lhs)), depth);
        out.bottom |= d.bottom;
        for (TermRef u : d.terms)
          for (const Subst& s3 : match_top(ts_, u, f.rhs, s2))
            rule_cond(out, r, s, s3, stop + 1, snext + 1, context, depth);
        return false;
      },
      false);
}

DenoResult Denotation::ev_call(const std::string& name,
                               const std::vector<TermRef>& raw_args, TermRef t,
                               int depth) {
  if (depth == 0) return DenoResult{{}, true};
  std::vector<TermRef> args;
  args.reserve(raw_args.size());
  for (TermRef a : raw_args) args.push_back(eng_.reduce(a));
  DenoResult out;
  bool any_def = false;
  std::function<void(const std::vector<TermRef>&, size_t, const Subst&,
                     const std::function<void(const Subst&)>&)>
      params = [&](const std::vector<TermRef>& ps, size_t i, const Subst& s,
                   const std::function<void(const Subst&)>& fn) {
        if (i == ps.size()) {
          fn(s);
          return;
        }
        for (const Subst& s2 : match_top(ts_, args[i], ps[i], s))
          params(ps, i + 1, s2, fn);
      };
  for (const StrategyDef& d : mod_.strat_defs) {
    if (d.name != name || d.params.size() != args.size()) continue;
    any_def = true;
    params(d.params, 0, Subst{}, [&](const Subst& s1) {
      eng_.visit_condition(
          d.cond, 0, d.cond.size(), s1,
          [&](const Subst& s2) {
            DenoResult r =
                ev(instantiate_strategy(mod_, d.body, s2), t, depth - 1);
            out.bottom |= r.bottom;
            out.terms.insert(r.terms.begin(), r.terms.end());
            return false;
          },
          false);
    });
  }
  if (!any_def)
    throw EvalError("no strategy definition for '" + name + "/" +
                    std::to_string(args.size()) + "'");
  return out;
}

}  // namespace strew
