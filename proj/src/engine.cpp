#include "strew/engine.hpp"

#include <unordered_set>

namespace strew {

Engine::Engine(Module& m, Limits lim) : mod_(&m), lim_(lim) {
  SortId bs = m.sig.find_sort("Bool");
  if (bs != kNoSort) {
    KindId bk = m.sig.kind_of(bs);
    SymbolId t = m.sig.find_symbol("true", 0, {}, bk);
    SymbolId f = m.sig.find_symbol("false", 0, {}, bk);
    if (t >= 0) true_ = m.terms->app(t, {});
    if (f >= 0) false_ = m.terms->app(f, {});
  }
  // Per-symbol equation buckets, non-owise before owise, declaration order
  // within each class.
  for (const Equation& eq : m.equations)
    if (!eq.owise && eq.lhs->is_app()) eqs_by_sym_[eq.lhs->sym].push_back(&eq);
  for (const Equation& eq : m.equations)
    if (eq.owise && eq.lhs->is_app()) eqs_by_sym_[eq.lhs->sym].push_back(&eq);
  for (const Rule& r : m.rules) {
    by_label_[r.label].push_back(&r);
    if (!r.nonexec) executable_.push_back(&r);
  }
}

TermRef Engine::reduce(TermRef t) {
  auto it = memo_.find(t);
  if (it != memo_.end()) return it->second;
  TermRef nf = reduce_uncached(t);
  memo_[t] = nf;
  memo_[nf] = nf;
  return nf;
}

TermRef Engine::reduce_uncached(TermRef t) {
  TermRef cur = t;
  for (;;) {
    if (++eq_steps_ > lim_.max_eq_steps)
      throw LimitError("equational step limit exceeded");
    if (!cur->is_app()) return cur;
    const Symbol& sym = sig().symbol(cur->sym);

    // Short-circuiting builtins pick a branch before touching the rest.
    if (sym.builtin == Builtin::IfThenElse) {
      TermRef c = reduce(cur->args[0]);
      if (c == true_ || c == false_) {
        ++rewrites_;
        cur = cur->args[c == true_ ? 1 : 2];
        continue;
      }
      TermRef rebuilt = store().app(
          cur->sym, {c, reduce(cur->args[1]), reduce(cur->args[2])});
      if (rebuilt == cur) return cur;
      cur = rebuilt;
      continue;
    }
    if (sym.builtin == Builtin::AndThen || sym.builtin == Builtin::OrElse) {
      bool conj = sym.builtin == Builtin::AndThen;
      TermRef c = reduce(cur->args[0]);
      if (c == (conj ? false_ : true_)) {
        ++rewrites_;
        cur = c;
        continue;
      }
      if (c == (conj ? true_ : false_)) {
        ++rewrites_;
        cur = cur->args[1];
        continue;
      }
      TermRef rebuilt = store().app(cur->sym, {c, reduce(cur->args[1])});
      if (rebuilt == cur) return cur;
      cur = rebuilt;
      continue;
    }

    // Innermost: normalize the children, then fold/apply at this node.
    std::vector<TermRef> args;
    args.reserve(cur->args.size());
    bool changed = false;
    for (TermRef a : cur->args) {
      TermRef r = reduce(a);
      changed |= r != a;
      args.push_back(r);
    }
    if (changed) {
      TermRef rebuilt = store().app(cur->sym, std::move(args));
      if (rebuilt != cur) {
        cur = rebuilt;
        continue;
      }
    }
    if (TermRef f = fold_builtin(cur, sym)) {
      ++rewrites_;
      cur = f;
      continue;
    }
    if (TermRef e = apply_equations(cur)) {
      cur = e;  // counted inside
      continue;
    }
    return cur;
  }
}

TermRef Engine::fold_builtin(TermRef t, const Symbol& sym) {
  const auto& args = t->args;
  auto nums2 = [&](long long& a, long long& b) {
    if (args.size() != 2 || !args[0]->is_num() || !args[1]->is_num())
      return false;
    a = args[0]->value;
    b = args[1]->value;
    return true;
  };
  auto truth = [&](bool b) { return b ? true_ : false_; };
  long long a, b;
  switch (sym.builtin) {
    case Builtin::Plus: {
      // assoc comm, so numerals sort to the front of the argument list
      size_t n = 0;
      while (n < args.size() && args[n]->is_num()) ++n;
      if (n < 2) return nullptr;
      long long acc = 0;
      for (size_t i = 0; i < n; ++i) acc += args[i]->value;
      if (n == args.size()) return store().num(acc);
      std::vector<TermRef> rest{store().num(acc)};
      rest.insert(rest.end(), args.begin() + n, args.end());
      return store().app(t->sym, std::move(rest));
    }
    case Builtin::Minus:
      return nums2(a, b) ? store().num(a - b) : nullptr;
    case Builtin::Quo:
      // truncates toward zero, like the C++ division it folds to
      return nums2(a, b) && b != 0 ? store().num(a / b) : nullptr;
    case Builtin::Less:
      return nums2(a, b) ? truth(a < b) : nullptr;
    case Builtin::LessEq:
      return nums2(a, b) ? truth(a <= b) : nullptr;
    case Builtin::Greater:
      return nums2(a, b) ? truth(a > b) : nullptr;
    case Builtin::GreaterEq:
      return nums2(a, b) ? truth(a >= b) : nullptr;
    case Builtin::EqEq:
    case Builtin::NotEq: {
      // arguments are already in normal form here, so equality is identity;
      // distinct terms with variables left in them stay undecided
      bool eq = sym.builtin == Builtin::EqEq;
      if (args[0] == args[1]) return truth(eq);
      if (args[0]->ground && args[1]->ground) return truth(!eq);
      return nullptr;
    }
    case Builtin::BoolNot:
      if (args[0] == true_) return false_;
      if (args[0] == false_) return true_;
      return nullptr;
    case Builtin::BoolAnd:
    case Builtin::BoolOr: {
      bool conj = sym.builtin == Builtin::BoolAnd;
      TermRef zero = conj ? false_ : true_;  // absorbing element
      TermRef unit = conj ? true_ : false_;
      std::vector<TermRef> rest;
      for (TermRef x : args) {
        if (x == zero) return zero;
        if (x != unit) rest.push_back(x);
      }
      if (rest.size() == args.size()) return nullptr;
      if (rest.empty()) return unit;
      if (rest.size() == 1) return rest[0];
      return store().app(t->sym, std::move(rest));
    }
    default:
      return nullptr;
  }
}

TermRef Engine::apply_equations(TermRef t) {
  auto it = eqs_by_sym_.find(t->sym);
  if (it == eqs_by_sym_.end()) return nullptr;
  const Symbol& sym = sig().symbol(t->sym);
  for (const Equation* eq : it->second) {
    // Under an associative top the lefthand side may cover a sublist or
    // sub-multiset of the arguments, the remainder staying in the context.
    bool ext = sym.assoc && eq->lhs->is_app() && eq->lhs->sym == t->sym;
    TermRef out = nullptr;
    auto attempt = [&](const Subst& match, TermRef context) {
      visit_condition(eq->cond, 0, eq->cond.size(), match,
                      [&](const Subst& s) {
                        TermRef rhs = apply_subst(store(), s, eq->rhs);
                        TermRef cand =
                            context ? plug(store(), context, rhs) : rhs;
                        if (cand == t) return false;  // no-change guard
                        out = cand;
                        return true;
                      });
      return out != nullptr;
    };
    if (ext) {
      for (const MatchResult& mr : match_with_extension(store(), t, eq->lhs))
        if (attempt(mr.subst, mr.context)) break;
    } else {
      for (const Subst& m : match_top(store(), t, eq->lhs))
        if (attempt(m, nullptr)) break;
    }
    if (out) {
      ++rewrites_;
      return out;
    }
  }
  return nullptr;
}

bool Engine::visit_condition(const std::vector<CondFrag>& frags, size_t begin,
                             size_t end, const Subst& s, const SubstVisitor& fn,
                             bool search_rewrite_frags) {
  if (begin >= end) return fn(s);
  const CondFrag& f = frags[begin];
  auto rest = [&](const Subst& s2) {
    return visit_condition(frags, begin + 1, end, s2, fn,
                           search_rewrite_frags);
  };
  switch (f.kind) {
    case CondFrag::Kind::Bool:
      return reduce(apply_subst(store(), s, f.lhs)) == true_ && rest(s);
    case CondFrag::Kind::Equal:
      return reduce(apply_subst(store(), s, f.lhs)) ==
                 reduce(apply_subst(store(), s, f.rhs)) &&
             rest(s);
    case CondFrag::Kind::SortTest: {
      TermRef v = reduce(apply_subst(store(), s, f.lhs));
      return sig().sort_leq(v->sort, f.sort) && rest(s);
    }
    case CondFrag::Kind::Assign: {
      TermRef subject = reduce(apply_subst(store(), s, f.rhs));
      for (const Subst& s2 : match_top(store(), subject, f.lhs, s))
        if (rest(s2)) return true;
      return false;
    }
    case CondFrag::Kind::Rewrite: {
      if (!search_rewrite_frags)
        throw EvalError("rewriting condition fragment outside strategy control");
      // l => r holds for every term reachable from l in zero or more rule
      // steps that matches r
      TermRef start = reduce(apply_subst(store(), s, f.lhs));
      std::vector<TermRef> states{start};
      std::unordered_set<TermRef> seen{start};
      for (size_t i = 0; i < states.size(); ++i) {
        for (const Subst& s2 : match_top(store(), states[i], f.rhs, s))
          if (rest(s2)) return true;
        if (static_cast<long long>(states.size()) > lim_.max_states)
          throw LimitError("state limit exceeded in rewriting condition");
        for (TermRef nx : successors(states[i]))
          if (seen.insert(nx).second) states.push_back(nx);
      }
      return false;
    }
  }
  return false;
}

bool Engine::check_condition(const std::vector<CondFrag>& frags,
                             const Subst& s) {
  return visit_condition(frags, 0, frags.size(), s,
                         [](const Subst&) { return true; });
}

std::vector<Subst> Engine::condition_solutions(
    const std::vector<CondFrag>& frags, const Subst& s) {
  std::vector<Subst> out;
  visit_condition(frags, 0, frags.size(), s, [&](const Subst& s2) {
    out.push_back(s2);
    return false;
  });
  return out;
}

std::vector<Engine::RuleMatch> Engine::rule_matches(const Rule& r,
                                                    TermRef subject,
                                                    const Subst& init,
                                                    bool top_only) {
  std::vector<RuleMatch> out;
  if (top_only) {
    TermRef bare = store().hole(sig().kind_of(subject->sort));
    for (Subst& s : match_top(store(), subject, r.lhs, init))
      out.push_back({&r, std::move(s), bare});
  } else {
    for (MatchResult& mr : match_anywhere(store(), subject, r.lhs, init))
      out.push_back({&r, std::move(mr.subst), mr.context});
  }
  return out;
}

const std::vector<const Rule*>& Engine::rules_labeled(
    const std::string& label) {
  static const std::vector<const Rule*> kNone;
  auto it = by_label_.find(label);
  return it == by_label_.end() ? kNone : it->second;
}

std::vector<TermRef> Engine::successors(TermRef t) {
  std::vector<TermRef> out;
  for (const Rule* r : executable_)
    for (const RuleMatch& mr : rule_matches(*r, t, {}, false))
      visit_condition(r->cond, 0, r->cond.size(), mr.subst,
                      [&](const Subst& s) {
                        ++rewrites_;
                        out.push_back(reduce(plug(
                            store(), mr.context, apply_subst(store(), s, r->rhs))));
                        return false;
                      });
  return out;
}

std::optional<TermRef> Engine::step(TermRef t) {
  for (const Rule* r : executable_)
    for (const RuleMatch& mr : rule_matches(*r, t, {}, false)) {
      TermRef out = nullptr;
      visit_condition(r->cond, 0, r->cond.size(), mr.subst,
                      [&](const Subst& s) {
                        ++rewrites_;
                        out = reduce(plug(store(), mr.context,
                                          apply_subst(store(), s, r->rhs)));
                        return true;
                      });
      if (out) return out;
    }
  return std::nullopt;
}

TermRef Engine::rewrite(TermRef t, long long bound) {
  TermRef cur = reduce(t);
  for (long long n = 0; bound < 0 || n < bound; ++n) {
    std::optional<TermRef> nxt = step(cur);
    if (!nxt) break;
    cur = *nxt;
  }
  return cur;
}

Search::Search(Engine& eng, TermRef subject, TermRef pattern,
               std::vector<CondFrag> cond, SearchArrow arrow)
    : eng_(eng), pattern_(pattern), cond_(std::move(cond)), arrow_(arrow) {
  add_state(eng_.reduce(subject));
}

long long Search::add_state(TermRef t) {
  auto [it, fresh] = ids_.try_emplace(t, states());
  if (!fresh) return -1;
  if (states() >= eng_.limits().max_states)
    throw LimitError("search state limit exceeded");
  terms_.push_back(t);
  long long id = it->second;
  // =>* matches every state as it is created, =>+ all but the initial one,
  // =>! only states found to have no successors when they are expanded.
  if (arrow_ == SearchArrow::Star ||
      (arrow_ == SearchArrow::Plus && id > 0))
    match_state(id);
  return id;
}

void Search::match_state(long long id) {
  for (const Subst& s : match_top(eng_.store(), terms_[id], pattern_))
    if (eng_.check_condition(cond_, s)) pending_.push_back({id, s});
}

std::optional<Search::Solution> Search::next() {
  for (;;) {
    if (!pending_.empty()) {
      Solution sol = pending_.front();
      pending_.pop_front();
      return sol;
    }
    if (next_to_expand_ >= states()) return std::nullopt;
    long long id = next_to_expand_++;
    std::vector<TermRef> succ = eng_.successors(terms_[id]);
    if (arrow_ == SearchArrow::Bang && succ.empty()) match_state(id);
    for (TermRef t : succ) add_state(t);
  }
}

}  // namespace strew
