#include "strew/match.hpp"

#include <algorithm>
#include <functional>

namespace strew {

namespace {

class Matcher {
 public:
  explicit Matcher(TermStore& ts) : ts_(ts), sig_(ts.sig()) {}

  void match(TermRef s, TermRef p, const Subst& sigma,
             std::vector<Subst>& out) {
    if (p->ground) {
      if (s == p) out.push_back(sigma);
      return;
    }
    if (p->is_var()) {
      if (TermRef b = sigma.get(p)) {
        if (b == s) out.push_back(sigma);
      } else if (sig_.sort_leq(s->sort, p->sort)) {
        out.push_back(sigma.with(p, s));
      }
      return;
    }
    // p is a non-ground application.
    const Symbol& sym = sig_.symbol(p->sym);

    // Successor/negation patterns peel numeral subjects: s_ P matches the
    // numeral k >= 1 with P against k-1, -_ P matches k < 0 with P against -k.
    if (sym.builtin == Builtin::Succ && s->is_num()) {
      if (s->value >= 1) match(ts_.num(s->value - 1), p->args[0], sigma, out);
      return;
    }
    if (sym.builtin == Builtin::Neg && s->is_num()) {
      if (s->value < 0) match(ts_.num(-s->value), p->args[0], sigma, out);
      return;
    }

    if (sym.assoc) {
      std::vector<TermRef> subj;
      if (s->is_app() && s->sym == p->sym)
        subj = s->args;
      else if (sym.identity && s != sym.identity)
        subj = {s};
      else if (!sym.identity)
        return;
      // s == identity leaves subj empty.
      if (sym.comm)
        match_ac(p->sym, subj, p->args, sigma, out);
      else
        match_assoc(p->sym, subj, p->args, 0, 0, sigma, out);
      return;
    }

    if (sym.comm) {  // commutative binary
      std::vector<std::pair<TermRef, TermRef>> splits;
      if (s->is_app() && s->sym == p->sym) {
        splits.push_back({s->args[0], s->args[1]});
        if (s->args[0] != s->args[1])
          splits.push_back({s->args[1], s->args[0]});
      } else if (sym.identity && s != sym.identity) {
        splits.push_back({s, sym.identity});
        splits.push_back({sym.identity, s});
      } else {
        return;  // comm symbols always have two real arguments when canonical
      }
      for (auto& [l, r] : splits) {
        std::vector<Subst> mid;
        match(l, p->args[0], sigma, mid);
        for (auto& m : mid) match(r, p->args[1], m, out);
      }
      return;
    }

    // Free symbol: same head, argwise.
    if (!s->is_app() || s->sym != p->sym || s->args.size() != p->args.size())
      return;
    match_args(s->args, p->args, 0, sigma, out);
  }

  // -------- extension covers ------------------------------------------

  // Contiguous windows of width [2, m-1], start ascending then width
  // ascending; each match is paired with the remainder context.
  void assoc_covers(TermRef s, TermRef p, const Subst& init,
                    std::vector<MatchResult>& out) {
    const auto& a = s->args;
    size_t m = a.size();
    KindId k = sig_.kind_of(s->sort);
    for (size_t start = 0; start < m; ++start)
      for (size_t w = 2; start + w <= m && w <= m - 1; ++w) {
        TermRef window =
            ts_.app(s->sym, std::vector<TermRef>(a.begin() + start,
                                                 a.begin() + start + w));
        std::vector<Subst> ms;
        match(window, p, init, ms);
        if (ms.empty()) continue;
        std::vector<TermRef> ctx(a.begin(), a.begin() + start);
        ctx.push_back(ts_.hole(k));
        ctx.insert(ctx.end(), a.begin() + start + w, a.end());
        TermRef context = ts_.app(s->sym, std::move(ctx));
        for (auto& sub : ms) out.push_back({sub, context});
      }
  }

  // Sub-multisets of size [2, m-1]; enumerated over distinct elements so
  // equal choices are produced once.
  void ac_covers(TermRef s, TermRef p, const Subst& init,
                 std::vector<MatchResult>& out) {
    const auto& a = s->args;
    size_t m = a.size();
    std::vector<std::pair<TermRef, int>> pool = distinct_counts(a);
    std::vector<int> take(pool.size(), 0);
    KindId k = sig_.kind_of(s->sort);

    std::function<void(size_t, size_t)> rec = [&](size_t i, size_t taken) {
      if (i == 0) {
        if (taken < 2 || taken > m - 1) return;
        std::vector<TermRef> window, rest;
        for (size_t j = 0; j < pool.size(); ++j) {
          for (int c = 0; c < take[j]; ++c) window.push_back(pool[j].first);
          for (int c = take[j]; c < pool[j].second; ++c)
            rest.push_back(pool[j].first);
        }
        TermRef wterm = ts_.app(s->sym, std::move(window));
        std::vector<Subst> ms;
        match(wterm, p, init, ms);
        if (ms.empty()) return;
        rest.push_back(ts_.hole(k));
        TermRef context = ts_.app(s->sym, std::move(rest));
        for (auto& sub : ms) out.push_back({sub, context});
        return;
      }
      for (int c = 0; c <= pool[i - 1].second; ++c) {
        take[i - 1] = c;
        rec(i - 1, taken + c);
      }
      take[i - 1] = 0;
    };
    rec(pool.size(), 0);
  }

 private:
  void match_args(const std::vector<TermRef>& subj,
                  const std::vector<TermRef>& pats, size_t i,
                  const Subst& sigma, std::vector<Subst>& out) {
    if (i == pats.size()) {
      out.push_back(sigma);
      return;
    }
    std::vector<Subst> mid;
    match(subj[i], pats[i], sigma, mid);
    for (auto& m : mid) match_args(subj, pats, i + 1, m, out);
  }

  // Splits a bound value into f-argument elements (identity: none).
  std::vector<TermRef> elements_of(SymbolId f, TermRef t) const {
    const Symbol& sym = sig_.symbol(f);
    if (t->is_app() && t->sym == f) return t->args;
    if (sym.identity && t == sym.identity) return {};
    return {t};
  }

  // Associative (non-comm) segmentation: each pattern element takes a
  // contiguous segment; only variables may take segments of length != 1,
  // and empty segments require an identity element.
  void match_assoc(SymbolId f, const std::vector<TermRef>& subj,
                   const std::vector<TermRef>& pats, size_t pi, size_t sj,
                   const Subst& sigma, std::vector<Subst>& out) {
    const Symbol& sym = sig_.symbol(f);
    if (pi == pats.size()) {
      if (sj == subj.size()) out.push_back(sigma);
      return;
    }
    TermRef p = pats[pi];
    size_t rest_pats = pats.size() - pi - 1;
    size_t avail = subj.size() - sj;

    if (p->is_var()) {
      if (TermRef b = sigma.get(p)) {
        std::vector<TermRef> want = elements_of(f, b);
        if (want.size() > avail) return;
        for (size_t i = 0; i < want.size(); ++i)
          if (subj[sj + i] != want[i]) return;
        match_assoc(f, subj, pats, pi + 1, sj + want.size(), sigma, out);
        return;
      }
      size_t min_len = sym.identity ? 0 : 1;
      size_t max_len = avail;
      if (!sym.identity && rest_pats > max_len) return;
      if (!sym.identity) max_len -= rest_pats;  // leave one element each
      for (size_t len = min_len; len <= max_len; ++len) {
        TermRef seg =
            len == 0 ? sym.identity
            : len == 1
                ? subj[sj]
                : ts_.app(f, std::vector<TermRef>(subj.begin() + sj,
                                                  subj.begin() + sj + len));
        if (!sig_.sort_leq(seg->sort, p->sort)) continue;
        match_assoc(f, subj, pats, pi + 1, sj + len, sigma.with(p, seg), out);
      }
      return;
    }

    // Non-variable element: exactly one subject element.
    if (avail == 0) return;
    std::vector<Subst> mid;
    match(subj[sj], p, sigma, mid);
    for (auto& m : mid) match_assoc(f, subj, pats, pi + 1, sj + 1, m, out);
  }

  static std::vector<std::pair<TermRef, int>> distinct_counts(
      const std::vector<TermRef>& elems) {
    std::vector<std::pair<TermRef, int>> pool;
    for (TermRef e : elems) {
      if (!pool.empty() && pool.back().first == e)
        ++pool.back().second;  // canonical arg lists keep equal elements adjacent
      else
        pool.push_back({e, 1});
    }
    return pool;
  }

  // AC multiset matching with full consumption. Pattern elements are
  // processed most-constrained-first: ground, then other non-variables,
  // then variables (an unbound variable processed last takes the rest).
  void match_ac(SymbolId f, const std::vector<TermRef>& subj,
                const std::vector<TermRef>& pats, const Subst& sigma,
                std::vector<Subst>& out) {
    std::vector<TermRef> order(pats);
    std::stable_sort(order.begin(), order.end(), [](TermRef a, TermRef b) {
      auto rank = [](TermRef t) {
        return t->ground ? 0 : t->is_var() ? 2 : 1;
      };
      return rank(a) < rank(b);
    });
    auto pool = distinct_counts(subj);
    ac_rec(f, pool, order, 0, sigma, out);
  }

  void ac_rec(SymbolId f, std::vector<std::pair<TermRef, int>>& pool,
              const std::vector<TermRef>& pats, size_t pi, const Subst& sigma,
              std::vector<Subst>& out) {
    const Symbol& sym = sig_.symbol(f);
    if (pi == pats.size()) {
      for (auto& [e, c] : pool)
        if (c != 0) return;
      out.push_back(sigma);
      return;
    }
    TermRef p = pats[pi];

    auto take_one = [&](TermRef w) -> bool {
      for (auto& [e, c] : pool)
        if (e == w && c > 0) {
          --c;
          return true;
        }
      return false;
    };
    auto put_back = [&](TermRef w) {
      for (auto& [e, c] : pool)
        if (e == w) {
          ++c;
          return;
        }
    };

    if (p->is_var()) {
      if (TermRef b = sigma.get(p)) {
        std::vector<TermRef> want = elements_of(f, b);
        size_t got = 0;
        while (got < want.size() && take_one(want[got])) ++got;
        if (got == want.size()) ac_rec(f, pool, pats, pi + 1, sigma, out);
        while (got > 0) put_back(want[--got]);
        return;
      }
      if (pi + 1 == pats.size()) {  // last element: take everything left
        std::vector<TermRef> rest;
        for (auto& [e, c] : pool)
          for (int i = 0; i < c; ++i) rest.push_back(e);
        TermRef val = rest.empty()   ? sym.identity
                      : rest.size() == 1 ? rest[0]
                                         : ts_.app(f, std::move(rest));
        if (!val) return;  // empty without identity
        if (!sig_.sort_leq(val->sort, p->sort)) return;
        auto saved = pool;
        for (auto& [e, c] : pool) c = 0;
        ac_rec(f, pool, pats, pi + 1, sigma.with(p, val), out);
        pool = saved;
        return;
      }
      // Enumerate sub-multisets for this variable. The first pool slot
      // varies fastest; argument lists are kept in ascending term order, so
      // bindings come out ascending too (1 before 2 for a Nat variable).
      std::vector<int> take(pool.size(), 0);
      std::function<void(size_t, size_t)> enumerate = [&](size_t i,
                                                          size_t taken) {
        if (i == 0) {
          if (taken == 0 && !sym.identity) return;
          std::vector<TermRef> chosen;
          for (size_t j = 0; j < pool.size(); ++j)
            for (int c = 0; c < take[j]; ++c) chosen.push_back(pool[j].first);
          TermRef val = chosen.empty()    ? sym.identity
                        : chosen.size() == 1 ? chosen[0]
                                             : ts_.app(f, std::move(chosen));
          if (!sig_.sort_leq(val->sort, p->sort)) return;
          for (size_t j = 0; j < pool.size(); ++j) pool[j].second -= take[j];
          ac_rec(f, pool, pats, pi + 1, sigma.with(p, val), out);
          for (size_t j = 0; j < pool.size(); ++j) pool[j].second += take[j];
          return;
        }
        for (int c = 0; c <= pool[i - 1].second; ++c) {
          take[i - 1] = c;
          enumerate(i - 1, taken + c);
        }
        take[i - 1] = 0;
      };
      enumerate(pool.size(), 0);
      return;
    }

    // Non-variable: match one remaining distinct element.
    for (auto& [e, c] : pool) {
      if (c == 0) continue;
      std::vector<Subst> mid;
      match(e, p, sigma, mid);
      if (mid.empty()) continue;
      --c;
      for (auto& m : mid) ac_rec(f, pool, pats, pi + 1, m, out);
      ++c;
    }
  }

  TermStore& ts_;
  const Signature& sig_;
};

void dedup_substs(std::vector<Subst>& v) {
  std::vector<Subst> uniq;
  for (auto& s : v) {
    bool seen = false;
    for (auto& u : uniq)
      if (u == s) {
        seen = true;
        break;
      }
    if (!seen) uniq.push_back(std::move(s));
  }
  v = std::move(uniq);
}

void dedup_results(std::vector<MatchResult>& v) {
  std::vector<MatchResult> uniq;
  for (auto& r : v) {
    bool seen = false;
    for (auto& u : uniq)
      if (u.context == r.context && u.subst == r.subst) {
        seen = true;
        break;
      }
    if (!seen) uniq.push_back(std::move(r));
  }
  v = std::move(uniq);
}

}  // namespace

std::vector<Subst> match_top(TermStore& ts, TermRef subject, TermRef pattern,
                             const Subst& init) {
  TermRef p = apply_subst(ts, init, pattern);
  std::vector<Subst> found;
  Matcher(ts).match(subject, p, Subst{}, found);
  dedup_substs(found);
  std::vector<Subst> out;
  out.reserve(found.size());
  for (auto& s : found) out.push_back(init.merged(s));
  return out;
}

std::vector<MatchResult> match_with_extension(TermStore& ts, TermRef subject,
                                              TermRef pattern,
                                              const Subst& init) {
  TermRef p = apply_subst(ts, init, pattern);
  Matcher m(ts);
  std::vector<MatchResult> out;

  std::vector<Subst> top;
  m.match(subject, p, Subst{}, top);
  dedup_substs(top);
  TermRef bare = ts.hole(ts.sig().kind_of(subject->sort));
  for (auto& s : top) out.push_back({std::move(s), bare});

  if (subject->is_app() && p->is_app() && subject->sym == p->sym &&
      ts.sig().symbol(subject->sym).assoc && subject->args.size() >= 3) {
    if (ts.sig().symbol(subject->sym).comm)
      m.ac_covers(subject, p, Subst{}, out);
    else
      m.assoc_covers(subject, p, Subst{}, out);
  }
  dedup_results(out);
  for (auto& r : out) r.subst = init.merged(r.subst);
  return out;
}

namespace {

void anywhere_rec(TermStore& ts, TermRef node, TermRef pattern,
                  const std::function<TermRef(TermRef)>& rebuild,
                  std::vector<MatchResult>& out) {
  if (node->is_app()) {
    const auto& args = node->args;
    for (size_t i = 0; i < args.size(); ++i) {
      auto wrap = [&ts, node, i, &args, &rebuild](TermRef r) {
        std::vector<TermRef> copy(args);
        copy[i] = r;
        return rebuild(ts.app(node->sym, std::move(copy)));
      };
      anywhere_rec(ts, args[i], pattern, wrap, out);
    }
  }
  for (auto& mr : match_with_extension(ts, node, pattern))
    out.push_back({std::move(mr.subst), rebuild(mr.context)});
}

}  // namespace

std::vector<MatchResult> match_anywhere(TermStore& ts, TermRef subject,
                                        TermRef pattern, const Subst& init) {
  TermRef p = apply_subst(ts, init, pattern);
  std::vector<MatchResult> out;
  anywhere_rec(ts, subject, p, [](TermRef r) { return r; }, out);
  dedup_results(out);
  for (auto& r : out) r.subst = init.merged(r.subst);
  return out;
}

}  // namespace strew
