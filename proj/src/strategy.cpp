#include "strew/strategy.hpp"

namespace strew {

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

uint64_t hash_string(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t hash_expr(const StrategyExpr& e) {
  uint64_t h = mix(0xabcd, static_cast<uint64_t>(e.kind));
  h = mix(h, hash_string(e.name));
  for (auto& [v, t] : e.subst) h = mix(mix(h, v->hash), t->hash);
  for (StratRef c : e.children) h = mix(h, c->hash);
  h = mix(h, e.top ? 7 : 3);
  h = mix(h, static_cast<uint64_t>(e.mode));
  if (e.pattern) h = mix(h, e.pattern->hash);
  for (auto& f : e.cond) {
    h = mix(h, static_cast<uint64_t>(f.kind));
    if (f.lhs) h = mix(h, f.lhs->hash);
    if (f.rhs) h = mix(h, f.rhs->hash);
    h = mix(h, static_cast<uint64_t>(f.sort) + 11);
  }
  for (auto& [v, s] : e.using_pairs) h = mix(mix(h, v->hash), s->hash);
  for (TermRef t : e.call_args) h = mix(h, t->hash);
  return h;
}

bool frag_eq(const CondFrag& a, const CondFrag& b) {
  return a.kind == b.kind && a.lhs == b.lhs && a.rhs == b.rhs &&
         a.sort == b.sort;
}

}  // namespace

bool StrategyStore::Eq::operator()(StratRef a, StratRef b) const {
  if (a->kind != b->kind || a->name != b->name || a->top != b->top ||
      a->mode != b->mode || a->pattern != b->pattern ||
      a->subst != b->subst || a->children != b->children ||
      a->using_pairs != b->using_pairs || a->call_args != b->call_args ||
      a->cond.size() != b->cond.size())
    return false;
  for (size_t i = 0; i < a->cond.size(); ++i)
    if (!frag_eq(a->cond[i], b->cond[i])) return false;
  return true;
}

StratRef StrategyStore::intern(StrategyExpr&& e) {
  e.hash = hash_expr(e);
  auto it = index_.find(&e);
  if (it != index_.end()) return *it;
  nodes_.push_back(std::move(e));
  StratRef ref = &nodes_.back();
  index_.insert(ref);
  return ref;
}

StratRef StrategyStore::idle() {
  StrategyExpr e;
  e.kind = StratKind::Idle;
  return intern(std::move(e));
}

StratRef StrategyStore::fail() {
  StrategyExpr e;
  e.kind = StratKind::Fail;
  return intern(std::move(e));
}

StratRef StrategyStore::rule_app(std::string label,
                                 std::vector<std::pair<TermRef, TermRef>> subst,
                                 std::vector<StratRef> cond_strats, bool top) {
  StrategyExpr e;
  e.kind = StratKind::RuleApp;
  e.name = std::move(label);
  e.subst = std::move(subst);
  e.children = std::move(cond_strats);
  e.top = top;
  return intern(std::move(e));
}

StratRef StrategyStore::all() {
  StrategyExpr e;
  e.kind = StratKind::All;
  return intern(std::move(e));
}

StratRef StrategyStore::test(MatchMode mode, TermRef pattern,
                             std::vector<CondFrag> cond) {
  StrategyExpr e;
  e.kind = StratKind::Test;
  e.mode = mode;
  e.pattern = pattern;
  e.cond = std::move(cond);
  return intern(std::move(e));
}

StratRef StrategyStore::match_rew(
    MatchMode mode, TermRef pattern, std::vector<CondFrag> cond,
    std::vector<std::pair<TermRef, StratRef>> using_pairs) {
  StrategyExpr e;
  e.kind = StratKind::MatchRew;
  e.mode = mode;
  e.pattern = pattern;
  e.cond = std::move(cond);
  e.using_pairs = std::move(using_pairs);
  return intern(std::move(e));
}

StratRef StrategyStore::seq(StratRef a, StratRef b) {
  StrategyExpr e;
  e.kind = StratKind::Seq;
  e.children = {a, b};
  return intern(std::move(e));
}

StratRef StrategyStore::alt(StratRef a, StratRef b) {
  StrategyExpr e;
  e.kind = StratKind::Alt;
  e.children = {a, b};
  return intern(std::move(e));
}

StratRef StrategyStore::star(StratRef a) {
  StrategyExpr e;
  e.kind = StratKind::Star;
  e.children = {a};
  return intern(std::move(e));
}

StratRef StrategyStore::cond(StratRef a, StratRef b, StratRef c) {
  StrategyExpr e;
  e.kind = StratKind::Cond;
  e.children = {a, b, c};
  return intern(std::move(e));
}

StratRef StrategyStore::one(StratRef a) {
  StrategyExpr e;
  e.kind = StratKind::One;
  e.children = {a};
  return intern(std::move(e));
}

StratRef StrategyStore::call(std::string name, std::vector<TermRef> args) {
  StrategyExpr e;
  e.kind = StratKind::Call;
  e.name = std::move(name);
  e.call_args = std::move(args);
  return intern(std::move(e));
}

}  // namespace strew
