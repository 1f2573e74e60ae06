#pragma once

// Exhaustive reference matcher used to cross-check the real one. It works
// straight from the definition: a substitution sigma matches pattern p
// against subject s iff apply(sigma, p) rebuilds exactly s (node identity)
// and every binding respects the variable's sort. Candidate values are
// enumerated from the subject: every subterm, every contiguous window of an
// associative argument list, every sub-multiset of an assoc-comm argument
// list, and the identity constants of the signature.

#include <functional>
#include <vector>

#include "strew/match.hpp"
#include "strew/term.hpp"

namespace brute {

using strew::MatchResult;
using strew::Subst;
using strew::TermRef;
using strew::TermStore;

inline void all_subterms(TermRef t, std::vector<TermRef>& out) {
  if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  if (t->is_app())
    for (TermRef a : t->args) all_subterms(a, out);
}

inline std::vector<TermRef> candidate_values(TermStore& ts, TermRef subject) {
  std::vector<TermRef> pool;
  all_subterms(subject, pool);

  std::vector<TermRef> apps(pool);
  for (TermRef n : apps) {
    if (!n->is_app()) continue;
    const auto& sym = ts.sig().symbol(n->sym);
    if (!sym.assoc) continue;
    const auto& a = n->args;
    if (sym.comm) {
      // every sub-multiset of size >= 2
      size_t m = a.size();
      for (size_t mask = 1; mask < (size_t(1) << m); ++mask) {
        std::vector<TermRef> sel;
        for (size_t i = 0; i < m; ++i)
          if (mask & (size_t(1) << i)) sel.push_back(a[i]);
        if (sel.size() < 2) continue;
        TermRef built = ts.app(n->sym, std::move(sel));
        if (std::find(pool.begin(), pool.end(), built) == pool.end())
          pool.push_back(built);
      }
    } else {
      for (size_t i = 0; i < a.size(); ++i)
        for (size_t w = 2; i + w <= a.size(); ++w) {
          TermRef built = ts.app(
              n->sym, std::vector<TermRef>(a.begin() + i, a.begin() + i + w));
          if (std::find(pool.begin(), pool.end(), built) == pool.end())
            pool.push_back(built);
        }
    }
  }
  for (int s = 0; s < ts.sig().symbol_count(); ++s) {
    TermRef id = ts.sig().symbol(s).identity;
    if (id && std::find(pool.begin(), pool.end(), id) == pool.end())
      pool.push_back(id);
  }
  return pool;
}

inline std::vector<Subst> match_top(TermStore& ts, TermRef subject,
                                    TermRef pattern) {
  std::vector<TermRef> vars;
  strew::collect_vars(pattern, vars);
  std::vector<TermRef> pool = candidate_values(ts, subject);

  std::vector<Subst> out;
  std::function<void(size_t, const Subst&)> assign = [&](size_t i,
                                                         const Subst& sigma) {
    if (i == vars.size()) {
      if (apply_subst(ts, sigma, pattern) == subject) {
        for (auto& seen : out)
          if (seen == sigma) return;
        out.push_back(sigma);
      }
      return;
    }
    for (TermRef cand : pool) {
      if (!ts.sig().sort_leq(cand->sort, vars[i]->sort)) continue;
      assign(i + 1, sigma.with(vars[i], cand));
    }
  };
  assign(0, Subst{});
  return out;
}

inline std::vector<MatchResult> match_with_extension(TermStore& ts,
                                                     TermRef subject,
                                                     TermRef pattern) {
  std::vector<MatchResult> out;
  auto push = [&](Subst s, TermRef ctx) {
    for (auto& r : out)
      if (r.context == ctx && r.subst == s) return;
    out.push_back({std::move(s), ctx});
  };

  TermRef bare = ts.hole(ts.sig().kind_of(subject->sort));
  for (auto& s : brute::match_top(ts, subject, pattern)) push(s, bare);

  if (subject->is_app() && pattern->is_app() && subject->sym == pattern->sym &&
      ts.sig().symbol(subject->sym).assoc) {
    const auto& sym = ts.sig().symbol(subject->sym);
    const auto& a = subject->args;
    size_t m = a.size();
    TermRef hole = ts.hole(ts.sig().kind_of(subject->sort));
    if (sym.comm) {
      for (size_t mask = 1; mask < (size_t(1) << m); ++mask) {
        std::vector<TermRef> sel, rest;
        for (size_t i = 0; i < m; ++i)
          (mask & (size_t(1) << i) ? sel : rest).push_back(a[i]);
        if (sel.size() < 2 || rest.empty()) continue;
        TermRef piece = ts.app(subject->sym, std::move(sel));
        rest.push_back(hole);
        TermRef ctx = ts.app(subject->sym, std::move(rest));
        for (auto& s : brute::match_top(ts, piece, pattern)) push(s, ctx);
      }
    } else {
      for (size_t i = 0; i < m; ++i)
        for (size_t w = 2; i + w <= m && w <= m - 1; ++w) {
          TermRef piece = ts.app(
              subject->sym, std::vector<TermRef>(a.begin() + i,
                                                 a.begin() + i + w));
          std::vector<TermRef> ctx(a.begin(), a.begin() + i);
          ctx.push_back(hole);
          ctx.insert(ctx.end(), a.begin() + i + w, a.end());
          TermRef context = ts.app(subject->sym, std::move(ctx));
          for (auto& s : brute::match_top(ts, piece, pattern)) push(s, context);
        }
    }
  }
  return out;
}

inline void anywhere_rec(TermStore& ts, TermRef node, TermRef pattern,
                         const std::function<TermRef(TermRef)>& rebuild,
                         std::vector<MatchResult>& out) {
  auto push = [&](Subst s, TermRef ctx) {
    for (auto& r : out)
      if (r.context == ctx && r.subst == s) return;
    out.push_back({std::move(s), ctx});
  };
  if (node->is_app()) {
    const auto& args = node->args;
    for (size_t i = 0; i < args.size(); ++i) {
      auto wrap = [&, i](TermRef r) {
        std::vector<TermRef> copy(args);
        copy[i] = r;
        return rebuild(ts.app(node->sym, std::move(copy)));
      };
      anywhere_rec(ts, args[i], pattern, wrap, out);
    }
  }
  for (auto& mr : brute::match_with_extension(ts, node, pattern))
    push(mr.subst, rebuild(mr.context));
}

inline std::vector<MatchResult> match_anywhere(TermStore& ts, TermRef subject,
                                               TermRef pattern) {
  std::vector<MatchResult> out;
  anywhere_rec(ts, subject, pattern, [](TermRef r) { return r; }, out);
  return out;
}

}  // namespace brute
