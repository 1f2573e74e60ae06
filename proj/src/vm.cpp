#include "strew/vm.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "strew/diag.hpp"

namespace strew {

namespace {

Subst without_vars(const Subst& s, const std::vector<TermRef>& vars) {
  Subst out;
  for (const auto& [v, val] : s.items())
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      out = out.with(v, val);
  return out;
}

std::vector<CondFrag> inst_cond(TermStore& ts, const std::vector<CondFrag>& c,
                                const Subst& s) {
  std::vector<CondFrag> out;
  out.reserve(c.size());
  for (const CondFrag& f : c) {
    CondFrag g = f;
    if (g.lhs) g.lhs = apply_subst(ts, s, g.lhs);
    if (g.rhs) g.rhs = apply_subst(ts, s, g.rhs);
    out.push_back(g);
  }
  return out;
}

}  // namespace

StratRef instantiate_strategy(Module& m, StratRef s, const Subst& subst) {
  if (subst.empty()) return s;
  TermStore& ts = *m.terms;
  StrategyStore& ss = *m.strats;
  auto self = [&](StratRef c) { return instantiate_strategy(m, c, subst); };
  switch (s->kind) {
    case StratKind::Idle:
    case StratKind::Fail:
    case StratKind::All:
      return s;
    case StratKind::RuleApp: {
      std::vector<std::pair<TermRef, TermRef>> sub;
      sub.reserve(s->subst.size());
      for (const auto& [v, t] : s->subst)
        sub.emplace_back(v, apply_subst(ts, subst, t));
      std::vector<StratRef> kids;
      kids.reserve(s->children.size());
      for (StratRef c : s->children) kids.push_back(self(c));
      return ss.rule_app(s->name, std::move(sub), std::move(kids), s->top);
    }
    case StratKind::Test:
    case StratKind::MatchRew: {
      std::vector<TermRef> binders;
      collect_vars(s->pattern, binders);
      for (const CondFrag& f : s->cond)
        if (f.kind == CondFrag::Kind::Assign) collect_vars(f.lhs, binders);
      Subst inner = without_vars(subst, binders);
      if (inner.empty()) return s;
      std::vector<CondFrag> cond = inst_cond(ts, s->cond, inner);
      if (s->kind == StratKind::Test)
        return ss.test(s->mode, s->pattern, std::move(cond));
      std::vector<std::pair<TermRef, StratRef>> up;
      up.reserve(s->using_pairs.size());
      for (const auto& [v, a] : s->using_pairs)
        up.emplace_back(v, instantiate_strategy(m, a, inner));
      return ss.match_rew(s->mode, s->pattern, std::move(cond), std::move(up));
    }
    case StratKind::Seq:
      return ss.seq(self(s->children[0]), self(s->children[1]));
    case StratKind::Alt:
      return ss.alt(self(s->children[0]), self(s->children[1]));
    case StratKind::Star:
      return ss.star(self(s->children[0]));
    case StratKind::Cond:
      return ss.cond(self(s->children[0]), self(s->children[1]),
                     self(s->children[2]));
    case StratKind::One:
      return ss.one(self(s->children[0]));
    case StratKind::Call: {
      std::vector<TermRef> args;
      args.reserve(s->call_args.size());
      for (TermRef a : s->call_args) args.push_back(apply_subst(ts, subst, a));
      return ss.call(s->name, std::move(args));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

struct StrategySearch::Impl {
  // Interned continuation stacks: equal stacks are the same node, so a
  // (term, stack) pair identifies a search state for cycle detection.
  struct StackNode {
    StratRef s;
    const StackNode* next;
  };

  struct Task;
  struct Process {
    TermRef t;
    const StackNode* k;
    Task* task;
  };

  struct PK {
    TermRef t;
    const StackNode* k;
    bool operator==(const PK& o) const { return t == o.t && k == o.k; }
  };
  struct PKH {
    size_t operator()(const PK& p) const {
      return std::hash<const void*>()(p.t) ^
             (std::hash<const void*>()(p.k) * 0x9e3779b97f4a7c15ull);
    }
  };

  struct Task {
    enum class Kind : uint8_t { Root, Cond, One, Subterm, RewCond };
    Kind kind = Kind::Root;
    Task* parent = nullptr;  // for liveness accounting and dead-checks
    Task* home = nullptr;    // task the sub-search's results continue in
    long long live = 0;      // queued processes + live child tasks
    bool dead = false;
    bool found = false;

    const StackNode* k = nullptr;  // continuation for the results
    // Cond
    TermRef saved = nullptr;
    StratRef b1 = nullptr;
    StratRef b2 = nullptr;
    // Subterm / RewCond share the owning strategy node and a substitution
    StratRef node = nullptr;
    Subst sigma;
    TermRef context = nullptr;
    size_t idx = 0;                   // Subterm: position in using_pairs
    std::vector<TermRef> overrides;   // Subterm: rewritten subterms so far
    const Rule* rule = nullptr;       // RewCond
    size_t frag_next = 0;             // RewCond: next condition fragment
    size_t strat_next = 0;            // RewCond: next strategy argument
    TermRef frag_pat = nullptr;       // RewCond: fragment righthand side

    std::unordered_set<PK, PKH> visited;
  };

  Engine& eng;
  Module& mod;
  TermStore& ts;
  bool fair;
  long long quanta = 0;
  long long spawned_total = 0;

  struct SK {
    StratRef s;
    const StackNode* n;
    bool operator==(const SK& o) const { return s == o.s && n == o.n; }
  };
  struct SKH {
    size_t operator()(const SK& k) const {
      return std::hash<const void*>()(k.s) ^
             (std::hash<const void*>()(k.n) * 0x9e3779b97f4a7c15ull);
    }
  };
  std::unordered_map<SK, std::unique_ptr<StackNode>, SKH> stacks;

  std::deque<Task> tasks;
  Task* root = nullptr;
  std::deque<Process> queue;
  std::vector<Process> batch;  // spawns of the quantum being served
  std::deque<TermRef> out;
  std::unordered_set<TermRef> seen;

  Impl(Engine& e, TermRef subject, StratRef strat, bool f)
      : eng(e), mod(e.mod()), ts(e.store()), fair(f) {
    tasks.emplace_back();
    root = &tasks.back();
    spawn(eng.reduce(subject), push(strat, nullptr), root);
    flush();
  }

  const StackNode* push(StratRef s, const StackNode* n) {
    auto [it, fresh] = stacks.try_emplace(SK{s, n});
    if (fresh) it->second = std::make_unique<StackNode>(StackNode{s, n});
    return it->second.get();
  }

  bool is_dead(const Task* t) const {
    for (const Task* x = t; x; x = x->parent)
      if (x->dead) return true;
    return false;
  }

  Task* new_task(Task::Kind k, Task* parent) {
    tasks.emplace_back();
    Task* t = &tasks.back();
    t->kind = k;
    t->parent = parent;
    ++parent->live;
    return t;
  }

  void spawn(TermRef t, const StackNode* k, Task* task) {
    if (is_dead(task)) return;
    if (!task->visited.insert(PK{t, k}).second) return;
    if (++spawned_total > eng.limits().max_states)
      throw LimitError("strategy search state limit exceeded");
    ++task->live;
    batch.push_back(Process{t, k, task});
  }

  void flush() {
    if (fair) {
      for (const Process& p : batch) queue.push_back(p);
    } else {
      for (auto it = batch.rbegin(); it != batch.rend(); ++it)
        queue.push_front(*it);
    }
    batch.clear();
  }

  std::optional<TermRef> next() {
    for (;;) {
      if (!out.empty()) {
        TermRef r = out.front();
        out.pop_front();
        return r;
      }
      if (queue.empty()) return std::nullopt;
      Process p = queue.front();
      queue.pop_front();
      ++quanta;
      run(p);
      flush();
    }
  }

  void finish(Task* t) {
    if (--t->live == 0) exhausted(t);
  }

  // The task ran out of work. A conditional that never produced a result
  // switches to its else branch; every task stops counting against its
  // parent.
  void exhausted(Task* t) {
    if (t == root) return;
    if (!is_dead(t) && t->kind == Task::Kind::Cond && !t->found)
      spawn(t->saved, push(t->b2, t->k), t->home);
    finish(t->parent);
  }

  void on_solution(Task* t, TermRef term) {
    switch (t->kind) {
      case Task::Kind::Root:
        if (seen.insert(term).second) out.push_back(term);
        break;
      case Task::Kind::Cond:
        t->found = true;
        spawn(term, push(t->b1, t->k), t->home);
        break;
      case Task::Kind::One:
        if (!t->found) {
          t->found = true;
          t->dead = true;  // discard the rest of the sub-search
          spawn(term, t->k, t->home);
        }
        break;
      case Task::Kind::Subterm:
        subterm_solution(t, term);
        break;
      case Task::Kind::RewCond:
        rewcond_solution(t, term);
        break;
    }
  }

  void run(const Process& p) {
    Task* T = p.task;
    if (is_dead(T)) {
      finish(T);
      return;
    }
    if (!p.k) {
      on_solution(T, p.t);
      finish(T);
      return;
    }
    StratRef s = p.k->s;
    const StackNode* K = p.k->next;
    switch (s->kind) {
      case StratKind::Idle:
        spawn(p.t, K, T);
        break;
      case StratKind::Fail:
        break;
      case StratKind::Seq:
        spawn(p.t, push(s->children[0], push(s->children[1], K)), T);
        break;
      case StratKind::Alt:
        spawn(p.t, push(s->children[0], K), T);
        spawn(p.t, push(s->children[1], K), T);
        break;
      case StratKind::Star:
        spawn(p.t, K, T);                          // zero more iterations
        spawn(p.t, push(s->children[0], p.k), T);  // once more, then loop
        break;
      case StratKind::Cond: {
        Task* C = new_task(Task::Kind::Cond, T);
        C->home = T;
        C->saved = p.t;
        C->k = K;
        C->b1 = s->children[1];
        C->b2 = s->children[2];
        spawn(p.t, push(s->children[0], nullptr), C);
        break;
      }
      case StratKind::One: {
        Task* O = new_task(Task::Kind::One, T);
        O->home = T;
        O->k = K;
        spawn(p.t, push(s->children[0], nullptr), O);
        break;
      }
      case StratKind::All:
        for (TermRef r : eng.successors(p.t)) spawn(r, K, T);
        break;
      case StratKind::Test:
        run_test(p, s, K, T);
        break;
      case StratKind::MatchRew:
        run_matchrew(p, s, K, T);
        break;
      case StratKind::RuleApp:
        run_ruleapp(p, s, K, T);
        break;
      case StratKind::Call:
        run_call(p, s->name, s->call_args, K, T);
        break;
    }
    finish(T);
  }

  bool cond_holds(const std::vector<CondFrag>& cond, const Subst& s) {
    if (cond.empty()) return true;
    return eng.visit_condition(cond, 0, cond.size(), s,
                               [](const Subst&) { return true; }, false);
  }

  void run_test(const Process& p, StratRef s, const StackNode* K, Task* T) {
    bool ok = false;
    switch (s->mode) {
      case MatchMode::Top:
        for (const Subst& m1 : match_top(ts, p.t, s->pattern))
          if (cond_holds(s->cond, m1)) {
            ok = true;
            break;
          }
        break;
      case MatchMode::TopExt:
        for (const MatchResult& mr : match_with_extension(ts, p.t, s->pattern))
          if (cond_holds(s->cond, mr.subst)) {
            ok = true;
            break;
          }
        break;
      case MatchMode::Anywhere:
        for (const MatchResult& mr : match_anywhere(ts, p.t, s->pattern))
          if (cond_holds(s->cond, mr.subst)) {
            ok = true;
            break;
          }
        break;
    }
    if (ok) spawn(p.t, K, T);
  }

  void run_matchrew(const Process& p, StratRef s, const StackNode* K,
                    Task* T) {
    auto with_match = [&](const Subst& m1, TermRef context) {
      auto go = [&](const Subst& sf) {
        start_subterm(s, sf, context, 0, {}, K, T, T);
        return false;
      };
      if (s->cond.empty())
        go(m1);
      else
        eng.visit_condition(s->cond, 0, s->cond.size(), m1, go, false);
    };
    switch (s->mode) {
      case MatchMode::Top: {
        TermRef hole = ts.hole(mod.sig.kind_of(p.t->sort));
        for (const Subst& m1 : match_top(ts, p.t, s->pattern))
          with_match(m1, hole);
        break;
      }
      case MatchMode::TopExt:
        for (const MatchResult& mr : match_with_extension(ts, p.t, s->pattern))
          with_match(mr.subst, mr.context);
        break;
      case MatchMode::Anywhere:
        for (const MatchResult& mr : match_anywhere(ts, p.t, s->pattern))
          with_match(mr.subst, mr.context);
        break;
    }
  }

  void start_subterm(StratRef s, const Subst& sigma, TermRef context,
                     size_t idx, std::vector<TermRef> overrides,
                     const StackNode* K, Task* parent, Task* home) {
    const auto& [xvar, alpha] = s->using_pairs[idx];
    TermRef sub = sigma.get(xvar);
    if (!sub)
      throw EvalError("matchrew variable " + xvar->name +
                      " is not bound by the pattern");
    Task* ST = new_task(Task::Kind::Subterm, parent);
    ST->home = home;
    ST->k = K;
    ST->node = s;
    ST->sigma = sigma;
    ST->context = context;
    ST->idx = idx;
    ST->overrides = std::move(overrides);
    spawn(sub, push(instantiate_strategy(mod, alpha, sigma), nullptr), ST);
  }

  void subterm_solution(Task* ST, TermRef sub2) {
    std::vector<TermRef> overrides = ST->overrides;
    overrides.push_back(sub2);
    StratRef s = ST->node;
    if (ST->idx + 1 < s->using_pairs.size()) {
      start_subterm(s, ST->sigma, ST->context, ST->idx + 1,
                    std::move(overrides), ST->k, ST, ST->home);
      return;
    }
    // all subterms rewritten: rebuild through the pattern so other
    // occurrences of nonlinear variables are updated too
    Subst sf = ST->sigma;
    for (size_t j = 0; j < overrides.size(); ++j)
      sf = sf.with_override(s->using_pairs[j].first, overrides[j]);
    TermRef res =
        eng.reduce(plug(ts, ST->context, apply_subst(ts, sf, s->pattern)));
    spawn(res, ST->k, ST->home);
  }

  static size_t count_rw_frags(const Rule* r) {
    size_t n = 0;
    for (const CondFrag& f : r->cond)
      if (f.kind == CondFrag::Kind::Rewrite) ++n;
    return n;
  }

  void fire(const Rule* r, const Subst& sf, TermRef context,
            const StackNode* K, Task* home) {
    TermRef res = eng.reduce(plug(ts, context, apply_subst(ts, sf, r->rhs)));
    eng.count_rewrite();
    spawn(res, K, home);
  }

  void run_ruleapp(const Process& p, StratRef s, const StackNode* K,
                   Task* T) {
    const auto& rules = eng.rules_labeled(s->name);
    if (rules.empty()) {
      // a bare identifier that names no rule is a strategy call
      if (s->subst.empty() && s->children.empty() && !s->top &&
          has_def(s->name, 0)) {
        run_call(p, s->name, {}, K, T);
        return;
      }
      throw EvalError("no rule labeled '" + s->name + "'");
    }
    Subst init;
    for (const auto& [v, val] : s->subst) init = init.with(v, eng.reduce(val));
    for (const Rule* r : rules) {
      if (!s->children.empty() && s->children.size() != count_rw_frags(r))
        continue;
      for (const Engine::RuleMatch& m1 :
           eng.rule_matches(*r, p.t, init, s->top)) {
        if (s->children.empty()) {
          // uncontrolled: rewriting fragments solved by the engine's own
          // reachability search
          eng.visit_condition(
              r->cond, 0, r->cond.size(), m1.subst,
              [&](const Subst& sf) {
                fire(r, sf, m1.context, K, T);
                return false;
              },
              true);
        } else {
          advance_rule_cond(r, s, m1.subst, 0, 0, m1.context, K, T, T);
        }
      }
    }
  }

  // Solves the equational condition fragments from `frag` on, stopping at
  // the next rewriting fragment, which gets a child search running the
  // corresponding strategy argument; when no fragments remain the rule fires.
  void advance_rule_cond(const Rule* r, StratRef s, const Subst& sigma,
                         size_t frag, size_t snext, TermRef context,
                         const StackNode* K, Task* parent, Task* home) {
    size_t stop = frag;
    while (stop < r->cond.size() &&
           r->cond[stop].kind != CondFrag::Kind::Rewrite)
      ++stop;
    eng.visit_condition(
        r->cond, frag, stop, sigma,
        [&](const Subst& s2) {
          if (stop == r->cond.size()) {
            fire(r, s2, context, K, home);
          } else {
            const CondFrag& f = r->cond[stop];
            Task* R = new_task(Task::Kind::RewCond, parent);
            R->home = home;
            R->k = K;
            R->rule = r;
            R->node = s;
            R->sigma = s2;
            R->context = context;
            R->frag_pat = f.rhs;
            R->frag_next = stop + 1;
            R->strat_next = snext + 1;
            TermRef subj = eng.reduce(apply_subst(ts, s2, f.lhs));
            spawn(subj,
                  push(instantiate_strategy(mod, s->children[snext], s2),
                       nullptr),
                  R);
          }
          return false;
        },
        false);
  }

  void rewcond_solution(Task* R, TermRef reached) {
    for (const Subst& s2 : match_top(ts, reached, R->frag_pat, R->sigma))
      advance_rule_cond(R->rule, R->node, s2, R->frag_next, R->strat_next,
                        R->context, R->k, R, R->home);
  }

  bool has_def(const std::string& name, size_t arity) const {
    for (const StrategyDef& d : mod.strat_defs)
      if (d.name == name && d.params.size() == arity) return true;
    return false;
  }

  void match_params(const std::vector<TermRef>& params,
                    const std::vector<TermRef>& args, size_t i, const Subst& s,
                    const std::function<void(const Subst&)>& fn) {
    if (i == params.size()) {
      fn(s);
      return;
    }
    for (const Subst& s2 : match_top(ts, args[i], params[i], s))
      match_params(params, args, i + 1, s2, fn);
  }

  void run_call(const Process& p, const std::string& name,
                const std::vector<TermRef>& raw_args, const StackNode* K,
                Task* T) {
    std::vector<TermRef> args;
    args.reserve(raw_args.size());
    for (TermRef a : raw_args) args.push_back(eng.reduce(a));
    bool any_def = false;
    for (const StrategyDef& d : mod.strat_defs) {
      if (d.name != name || d.params.size() != args.size()) continue;
      any_def = true;
      match_params(d.params, args, 0, Subst{}, [&](const Subst& s1) {
        eng.visit_condition(
            d.cond, 0, d.cond.size(), s1,
            [&](const Subst& s2) {
              spawn(p.t, push(instantiate_strategy(mod, d.body, s2), K), T);
              return false;
            },
            false);
      });
    }
    if (!any_def)
      throw EvalError("no strategy definition for '" + name + "/" +
                      std::to_string(args.size()) + "'");
  }
};

StrategySearch::StrategySearch(Engine& eng, TermRef subject, StratRef strat,
                               bool fair)
    : impl_(std::make_unique<Impl>(eng, subject, strat, fair)) {}

StrategySearch::~StrategySearch() = default;

std::optional<TermRef> StrategySearch::next() { return impl_->next(); }

long long StrategySearch::quanta() const { return impl_->quanta; }

}  // namespace strew
