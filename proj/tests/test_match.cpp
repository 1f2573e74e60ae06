#include <doctest.h>

#include <memory>
#include <random>

#include "brute_match.hpp"
#include "strew/match.hpp"
#include "strew/term.hpp"

using namespace strew;

namespace {

struct Fix {
  Signature sig;
  std::unique_ptr<TermStore> ts;
  SortId elem, list, mset, zero, nznat, nat, nzint, intS;
  SymbolId nil, jx, mtE, mt, g, h, pr, a, b, c, d, succ, neg;
  TermRef A, B, C, D, Nil, Mt;

  Fix() {
    elem = sig.add_sort("Elem");
    list = sig.add_sort("List");
    mset = sig.add_sort("Mset");
    zero = sig.add_sort("Zero");
    nznat = sig.add_sort("NzNat");
    nat = sig.add_sort("Nat");
    nzint = sig.add_sort("NzInt");
    intS = sig.add_sort("Int");
    sig.add_subsort(elem, list);
    sig.add_subsort(elem, mset);
    sig.add_subsort(zero, nat);
    sig.add_subsort(nznat, nat);
    sig.add_subsort(nat, intS);
    sig.add_subsort(nznat, nzint);
    sig.add_subsort(nzint, intS);
    sig.freeze();

    nil = sig.declare_op("nil", {}, list);
    jx = sig.declare_op("__", {list, list}, list);
    mtE = sig.declare_op("empty", {}, mset);
    mt = sig.declare_op("_,_", {mset, mset}, mset);
    g = sig.declare_op("g", {elem, elem}, elem);
    h = sig.declare_op("h", {list}, elem);
    pr = sig.declare_op("pr", {elem, elem}, elem);
    a = sig.declare_op("a", {}, elem);
    b = sig.declare_op("b", {}, elem);
    c = sig.declare_op("c", {}, elem);
    d = sig.declare_op("d", {}, elem);
    succ = sig.declare_op("s_", {nat}, nznat);
    neg = sig.declare_op("-_", {intS}, intS);
    sig.symbol(succ).builtin = Builtin::Succ;
    sig.symbol(neg).builtin = Builtin::Neg;
    sig.symbol(pr).comm = true;

    ts = std::make_unique<TermStore>(sig);
    sig.symbol(jx).assoc = true;
    sig.symbol(jx).identity = ts->app(nil, {});
    sig.symbol(mt).assoc = true;
    sig.symbol(mt).comm = true;
    sig.symbol(mt).identity = ts->app(mtE, {});

    A = ts->app(a, {});
    B = ts->app(b, {});
    C = ts->app(c, {});
    D = ts->app(d, {});
    Nil = ts->app(nil, {});
    Mt = ts->app(mtE, {});
  }

  TermRef L(std::vector<TermRef> xs) { return ts->app(jx, std::move(xs)); }
  TermRef M(std::vector<TermRef> xs) { return ts->app(mt, std::move(xs)); }
};

bool same_subst_set(const std::vector<Subst>& x, const std::vector<Subst>& y) {
  if (x.size() != y.size()) return false;
  for (auto& s : x) {
    bool found = false;
    for (auto& t : y)
      if (s == t) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

bool same_result_set(const std::vector<MatchResult>& x,
                     const std::vector<MatchResult>& y) {
  if (x.size() != y.size()) return false;
  for (auto& r : x) {
    bool found = false;
    for (auto& t : y)
      if (r.context == t.context && r.subst == t.subst) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("ground pattern matches itself only") {
  Fix f;
  TermRef s = f.L({f.A, f.B});
  auto ms = match_top(*f.ts, s, s);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].empty());
  CHECK(match_top(*f.ts, s, f.L({f.B, f.A})).empty());
}

TEST_CASE("identity lets list variables match empty") {
  Fix f;
  TermRef X = f.ts->var("X", f.list);
  TermRef Y = f.ts->var("Y", f.list);
  auto ms = match_top(*f.ts, f.A, f.L({X, Y}));
  REQUIRE(ms.size() == 2);  // (a, nil) and (nil, a)
  bool saw_a_nil = false, saw_nil_a = false;
  for (auto& m : ms) {
    if (m.get(X) == f.A && m.get(Y) == f.Nil) saw_a_nil = true;
    if (m.get(X) == f.Nil && m.get(Y) == f.A) saw_nil_a = true;
  }
  CHECK(saw_a_nil);
  CHECK(saw_nil_a);

  // the whole identity element as subject
  auto ms2 = match_top(*f.ts, f.Nil, f.L({X, Y}));
  REQUIRE(ms2.size() == 1);
  CHECK(ms2[0].get(X) == f.Nil);
  CHECK(ms2[0].get(Y) == f.Nil);
}

TEST_CASE("elem variables cannot take segments") {
  Fix f;
  TermRef E1 = f.ts->var("E1", f.elem);
  TermRef E2 = f.ts->var("E2", f.elem);
  CHECK(match_top(*f.ts, f.L({f.A, f.B, f.C}), f.L({E1, E2})).empty());
  auto ms = match_top(*f.ts, f.L({f.A, f.B}), f.L({E1, E2}));
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].get(E1) == f.A);
  CHECK(ms[0].get(E2) == f.B);
}

TEST_CASE("associative segmentation enumerates all splits") {
  Fix f;
  TermRef X = f.ts->var("X", f.list);
  TermRef Y = f.ts->var("Y", f.list);
  auto ms = match_top(*f.ts, f.L({f.A, f.B, f.C}), f.L({X, Y}));
  CHECK(ms.size() == 4);  // nil|abc, a|bc, ab|c, abc|nil
  auto brute = brute::match_top(*f.ts, f.L({f.A, f.B, f.C}), f.L({X, Y}));
  CHECK(same_subst_set(ms, brute));
}

TEST_CASE("nonlinear variables must agree") {
  Fix f;
  TermRef X = f.ts->var("X", f.list);
  CHECK(match_top(*f.ts, f.L({f.A, f.A}), f.L({X, X})).size() == 1);
  CHECK(match_top(*f.ts, f.L({f.A, f.B}), f.L({X, X})).empty());
  // across depth: g(X, h(X))
  TermRef E = f.ts->var("E", f.elem);
  TermRef pat = f.ts->app(f.g, {E, f.ts->app(f.h, {E})});
  TermRef sub = f.ts->app(f.g, {f.A, f.ts->app(f.h, {f.A})});
  CHECK(match_top(*f.ts, sub, pat).size() == 1);
  TermRef bad = f.ts->app(f.g, {f.A, f.ts->app(f.h, {f.B})});
  CHECK(match_top(*f.ts, bad, pat).empty());
}

TEST_CASE("commutative binary tries both orders") {
  Fix f;
  TermRef E = f.ts->var("E", f.elem);
  TermRef s = f.ts->app(f.pr, {f.A, f.B});
  auto ms = match_top(*f.ts, s, f.ts->app(f.pr, {E, f.A}));
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].get(E) == f.B);
  auto both = match_top(*f.ts, s, f.ts->app(f.pr, {E, f.ts->var("F", f.elem)}));
  CHECK(both.size() == 2);
}

TEST_CASE("multiset matching with remainder variable") {
  Fix f;
  TermRef E = f.ts->var("E", f.elem);
  TermRef Z = f.ts->var("Z", f.mset);
  TermRef s = f.M({f.A, f.A, f.B});
  auto ms = match_top(*f.ts, s, f.M({E, Z}));
  REQUIRE(ms.size() == 2);  // E=a Z=(a,b); E=b Z=(a,a)
  auto brute = brute::match_top(*f.ts, s, f.M({E, Z}));
  CHECK(same_subst_set(ms, brute));
}

TEST_CASE("multiset splits between two variables") {
  Fix f;
  TermRef Y = f.ts->var("Y", f.mset);
  TermRef Z = f.ts->var("Z", f.mset);
  auto ms = match_top(*f.ts, f.M({f.A, f.B}), f.M({Y, Z}));
  CHECK(ms.size() == 4);  // {} / {a} / {b} / {a,b} for Y, rest for Z
  auto brute = brute::match_top(*f.ts, f.M({f.A, f.B}), f.M({Y, Z}));
  CHECK(same_subst_set(ms, brute));
}

TEST_CASE("successor and negation peel numerals") {
  Fix f;
  TermRef N = f.ts->var("N", f.nat);
  TermRef sN = f.ts->app(f.succ, {N});
  auto ms = match_top(*f.ts, f.ts->num(3), sN);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].get(N) == f.ts->num(2));

  TermRef ssN = f.ts->app(f.succ, {sN});
  auto ms2 = match_top(*f.ts, f.ts->num(3), ssN);
  REQUIRE(ms2.size() == 1);
  CHECK(ms2[0].get(N) == f.ts->num(1));
  CHECK(match_top(*f.ts, f.ts->num(1), ssN).empty());
  CHECK(match_top(*f.ts, f.ts->num(0), sN).empty());

  TermRef I = f.ts->var("I", f.intS);
  TermRef negSI = f.ts->app(f.neg, {f.ts->app(f.succ, {I})});
  auto ms3 = match_top(*f.ts, f.ts->num(-2), negSI);
  REQUIRE(ms3.size() == 1);
  CHECK(ms3[0].get(I) == f.ts->num(1));
  CHECK(match_top(*f.ts, f.ts->num(2), negSI).empty());
}

TEST_CASE("initial substitution constrains the match") {
  Fix f;
  TermRef X = f.ts->var("X", f.list);
  TermRef Y = f.ts->var("Y", f.list);
  Subst init = Subst{}.with(X, f.A);
  auto ms = match_top(*f.ts, f.L({f.A, f.B, f.C}), f.L({X, Y}), init);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].get(X) == f.A);
  CHECK(ms[0].get(Y) == f.L({f.B, f.C}));
}

TEST_CASE("extension covers proper windows") {
  Fix f;
  TermRef E1 = f.ts->var("E1", f.elem);
  TermRef E2 = f.ts->var("E2", f.elem);
  TermRef pat = f.L({E1, E2});
  TermRef s = f.L({f.A, f.B, f.C});
  auto rs = match_with_extension(*f.ts, s, pat);
  // no whole-term match (elem vars), two windows: [a b]_c and a_[b c]
  REQUIRE(rs.size() == 2);
  for (auto& r : rs) {
    CHECK_FALSE(f.ts->is_hole(r.context));
    // plugging the matched piece back must rebuild the subject
    TermRef piece = f.L({r.subst.get(E1), r.subst.get(E2)});
    CHECK(plug(*f.ts, r.context, piece) == s);
  }
  CHECK(same_result_set(rs, brute::match_with_extension(*f.ts, s, pat)));
}

TEST_CASE("extension keeps whole-term matches with a bare hole") {
  Fix f;
  TermRef X = f.ts->var("X", f.list);
  TermRef s = f.L({f.A, f.B});
  auto rs = match_with_extension(*f.ts, s, X);
  REQUIRE(rs.size() == 1);
  CHECK(f.ts->is_hole(rs[0].context));
  CHECK(rs[0].subst.get(X) == s);
}

TEST_CASE("anywhere matching hits nested positions") {
  Fix f;
  TermRef E = f.ts->var("E", f.elem);
  // subject: (h(a b) a) — E=a matches under h and at the top list
  TermRef s = f.L({f.ts->app(f.h, {f.L({f.A, f.B})}), f.A});
  auto rs = match_anywhere(*f.ts, s, f.A);
  // positions: inside h's list, and the top-level 'a'
  CHECK(rs.size() == 2);
  for (auto& r : rs) CHECK(plug(*f.ts, r.context, f.A) == s);
  CHECK(same_result_set(rs, brute::match_anywhere(*f.ts, s, f.A)));

  auto rs2 = match_anywhere(*f.ts, s, E);
  CHECK(same_result_set(rs2, brute::match_anywhere(*f.ts, s, E)));
}

TEST_CASE("anywhere order is children first, left to right") {
  Fix f;
  TermRef E = f.ts->var("E", f.elem);
  // every node has sort Elem here, so E matches all five positions
  TermRef gab = f.ts->app(f.g, {f.A, f.B});
  TermRef s = f.ts->app(f.g, {gab, f.C});
  auto rs = match_anywhere(*f.ts, s, E);
  REQUIRE(rs.size() == 5);
  CHECK(rs[0].subst.get(E) == f.A);
  CHECK(rs[1].subst.get(E) == f.B);
  CHECK(rs[2].subst.get(E) == gab);
  CHECK(rs[3].subst.get(E) == f.C);
  CHECK(rs[4].subst.get(E) == s);
}

// ---------------------------------------------------------------- randomized

namespace {

struct Gen {
  Fix& f;
  std::mt19937 rng{20260815};

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  TermRef elem_leaf() {
    TermRef k[] = {f.A, f.B, f.C, f.D};
    return k[pick(4)];
  }

  TermRef subject(int depth) {
    if (depth == 0) return elem_leaf();
    switch (pick(6)) {
      case 0:
      case 1: {
        std::vector<TermRef> xs;
        int n = 2 + pick(2);
        for (int i = 0; i < n; ++i) xs.push_back(subject(depth - 1));
        return f.ts->app(f.jx, std::move(xs));
      }
      case 2: {
        std::vector<TermRef> xs;
        int n = 2 + pick(2);
        for (int i = 0; i < n; ++i) xs.push_back(subject(depth - 1));
        return f.ts->app(f.mt, std::move(xs));
      }
      case 3:
        return f.ts->app(f.g, {subject(depth - 1), subject(depth - 1)});
      case 4:
        return f.ts->app(f.h, {subject(depth - 1)});
      default:
        return elem_leaf();
    }
  }

  // Replace random pieces of a subject by sort-compatible variables so the
  // produced pattern usually matches.
  TermRef abstract(TermRef t, int& budget) {
    if (budget > 0 && pick(4) == 0) {
      --budget;
      const char* names[] = {"V1", "V2", "V3"};
      const char* nm = names[pick(3)];
      switch (pick(3)) {
        case 0:
          if (f.sig.sort_leq(t->sort, f.elem)) return f.ts->var(nm, f.elem);
          break;
        case 1:
          if (f.sig.sort_leq(t->sort, f.list)) return f.ts->var(nm, f.list);
          if (f.sig.sort_leq(t->sort, f.mset)) return f.ts->var(nm, f.mset);
          break;
        default:
          return f.ts->var(nm, f.sig.error_sort(f.sig.kind_of(t->sort)));
      }
    }
    if (!t->is_app()) return t;
    std::vector<TermRef> args;
    for (TermRef a : t->args) args.push_back(abstract(a, budget));
    return f.ts->app(t->sym, std::move(args));
  }
};

}  // namespace

TEST_CASE("randomized agreement with the exhaustive matcher") {
  Fix f;
  Gen gen{f};
  int nontrivial_top = 0, nontrivial_ext = 0, nontrivial_any = 0;
  for (int iter = 0; iter < 200; ++iter) {
    TermRef s = gen.subject(gen.pick(4) == 0 ? 3 : 2);
    int budget = 1 + gen.pick(2);
    TermRef p = gen.abstract(s, budget);
    if (gen.pick(5) == 0) p = gen.abstract(gen.subject(2), budget);  // miss

    auto top = match_top(*f.ts, s, p);
    auto bt = brute::match_top(*f.ts, s, p);
    REQUIRE_MESSAGE(same_subst_set(top, bt),
                    "top mismatch at iter " << iter << " engine=" << top.size()
                                            << " brute=" << bt.size());
    nontrivial_top += !top.empty();

    auto ext = match_with_extension(*f.ts, s, p);
    auto be = brute::match_with_extension(*f.ts, s, p);
    REQUIRE_MESSAGE(same_result_set(ext, be),
                    "extension mismatch at iter "
                        << iter << " engine=" << ext.size()
                        << " brute=" << be.size());
    nontrivial_ext += !ext.empty();

    auto any = match_anywhere(*f.ts, s, p);
    auto ba = brute::match_anywhere(*f.ts, s, p);
    REQUIRE_MESSAGE(same_result_set(any, ba),
                    "anywhere mismatch at iter "
                        << iter << " engine=" << any.size()
                        << " brute=" << ba.size());
    nontrivial_any += !any.empty();

    // every reported match really reproduces the subject
    for (auto& r : any)
      CHECK(plug(*f.ts, r.context,
                 apply_subst(*f.ts, r.subst,
                             apply_subst(*f.ts, r.subst, p))) == s);
  }
  // the generator must actually exercise the matcher
  CHECK(nontrivial_top > 60);
  CHECK(nontrivial_ext > 60);
  CHECK(nontrivial_any > 120);
}
