#include <algorithm>

#include "parse_internal.hpp"
#include "strew/parser.hpp"

namespace strew {

using detail::Toks;
using detail::find_top;
using detail::slice;
using detail::split_top;

namespace {

[[noreturn]] void fail(const Token& t, const std::string& msg) {
  throw ParseError(msg, t.line, t.col);
}

using Stops = std::vector<std::string>;

bool stopped(const Stops& stops, const std::string& t) {
  return std::find(stops.begin(), stops.end(), t) != stops.end();
}

// Tokens that end an inline term or condition inside a strategy expression.
// A sort test written inline would collide with the ':' of `? :`, so sort
// membership inside strategy conditions needs an auxiliary predicate instead.
bool strat_delim(const std::string& t) {
  return t == ";" || t == "|" || t == "?" || t == ":" || t == "," ||
         t == ")" || t == "]" || t == "}" || t == "or-else";
}

class StratParser {
 public:
  StratParser(Module& m, const Toks& toks) : m_(m), toks_(toks) {}

  StratRef parse_whole() {
    if (toks_.empty()) throw ParseError("expected a strategy", 0, 0);
    StratRef s = expr(0, {});
    if (pos_ < toks_.size())
      fail(toks_[pos_],
           "unexpected '" + toks_[pos_].text + "' in strategy expression");
    return s;
  }

 private:
  bool at_end() const { return pos_ >= toks_.size(); }
  const Token& peek() const { return toks_[pos_]; }

  void expect(const std::string& what) {
    if (at_end())
      fail(toks_.back(), "expected '" + what + "' in strategy expression");
    if (toks_[pos_].text != what)
      fail(toks_[pos_], "expected '" + what + "', found '" +
                            toks_[pos_].text + "'");
    ++pos_;
  }

  // binding levels: `? :` 0 < `|` 1 < `or-else` 2 < `;` 3 < postfix
  StratRef expr(int level, const Stops& stops) {
    StratRef e = postfix(stops);
    StrategyStore& S = *m_.strats;
    while (!at_end()) {
      const std::string& t = peek().text;
      if (stopped(stops, t)) break;
      if (t == ";" && level <= 3) {
        ++pos_;
        e = S.seq(e, expr(4, stops));
      } else if (t == "or-else" && level <= 2) {
        ++pos_;
        e = S.or_else(e, expr(3, stops));
      } else if (t == "|" && level <= 1) {
        ++pos_;
        e = S.alt(e, expr(2, stops));
      } else if (t == "?" && level <= 0) {
        ++pos_;
        Stops inner = stops;
        inner.push_back(":");
        StratRef b = expr(1, inner);
        expect(":");
        StratRef c = expr(0, stops);  // right-associative
        e = S.cond(e, b, c);
      } else {
        break;
      }
    }
    return e;
  }

  StratRef postfix(const Stops& stops) {
    StratRef e = leaf(stops);
    StrategyStore& S = *m_.strats;
    while (!at_end()) {
      const std::string& t = peek().text;
      if (t == "*") {
        e = S.star(e);
      } else if (t == "+") {
        e = S.plus(e);
      } else if (t == "!") {
        e = S.bang(e);
      } else {
        break;
      }
      ++pos_;
    }
    return e;
  }

  // span of the next inline term/condition, up to a depth-0 delimiter or one
  // of `extra_ends`
  Toks take_span(const std::vector<std::string>& extra_ends,
                 bool delims_end = true) {
    size_t start = pos_;
    int depth = 0;
    while (!at_end()) {
      const std::string& t = peek().text;
      if (depth == 0 &&
          (std::find(extra_ends.begin(), extra_ends.end(), t) !=
               extra_ends.end() ||
           (delims_end && strat_delim(t))))
        break;
      depth += detail::depth_delta(t);
      if (depth < 0) break;  // closing token of an enclosing context
      ++pos_;
    }
    return slice(toks_, start, pos_);
  }

  StratRef leaf(const Stops& stops) {
    if (at_end()) fail(toks_.back(), "unexpected end of strategy expression");
    const Token& t = peek();
    const std::string& w = t.text;
    StrategyStore& S = *m_.strats;

    if (w == "(") {
      ++pos_;
      StratRef e = expr(0, {")"});
      expect(")");
      return e;
    }
    if (w == "idle") {
      ++pos_;
      return S.idle();
    }
    if (w == "fail") {
      ++pos_;
      return S.fail();
    }
    if (w == "all") {
      ++pos_;
      return S.all();
    }
    if (w == "top") {
      ++pos_;
      expect("(");
      if (at_end()) fail(t, "top( without a rule application");
      StratRef e = rule_app(true);
      expect(")");
      return e;
    }
    if (w == "one" || w == "not" || w == "try" || w == "test") {
      ++pos_;
      expect("(");
      StratRef inner = expr(0, {")"});
      expect(")");
      if (w == "one") return S.one(inner);
      if (w == "not") return S.negation(inner);
      if (w == "try") return S.try_(inner);
      return S.test_op(inner);
    }
    if (w == "match" || w == "xmatch" || w == "amatch") {
      MatchMode mode = w == "match"    ? MatchMode::Top
                       : w == "xmatch" ? MatchMode::TopExt
                                       : MatchMode::Anywhere;
      ++pos_;
      Toks pat = take_span({"s.t."});
      if (pat.empty()) fail(t, w + " without a pattern");
      std::vector<CondFrag> cond;
      if (!at_end() && peek().text == "s.t.") {
        ++pos_;
        Toks c = take_span({});
        cond = parse_condition(m_, c);
      }
      return S.test(mode, parse_term(m_, pat), std::move(cond));
    }
    if (w == "matchrew" || w == "xmatchrew" || w == "amatchrew") {
      MatchMode mode = w == "matchrew"    ? MatchMode::Top
                       : w == "xmatchrew" ? MatchMode::TopExt
                                          : MatchMode::Anywhere;
      ++pos_;
      Toks pat = take_span({"s.t.", "by"}, false);
      if (pat.empty()) fail(t, w + " without a pattern");
      std::vector<CondFrag> cond;
      if (!at_end() && peek().text == "s.t.") {
        ++pos_;
        Toks c = take_span({"by"}, false);
        cond = parse_condition(m_, c);
      }
      expect("by");
      std::vector<std::pair<TermRef, StratRef>> pairs;
      while (true) {
        Toks var_span = take_span({"using"}, false);
        if (var_span.empty()) fail(t, "matchrew 'by' without a variable");
        TermRef v = parse_term(m_, var_span);
        if (!v->is_var()) fail(var_span[0], "matchrew rewrites variables only");
        expect("using");
        Stops inner = stops;
        inner.push_back(",");
        StratRef s = expr(0, inner);
        pairs.emplace_back(v, s);
        if (!at_end() && peek().text == ",") {
          ++pos_;
          continue;
        }
        break;
      }
      return S.match_rew(mode, parse_term(m_, pat), std::move(cond),
                         std::move(pairs));
    }

    // rule application or a declared strategy call
    if (!at_end() && pos_ + 1 < toks_.size() && toks_[pos_ + 1].text == "(" &&
        m_.find_strat_decl(w)) {
      return call();
    }
    if (m_.has_rule_label(w)) return rule_app(false);
    if (m_.find_strat_decl(w)) {
      ++pos_;
      return S.call(w, {});
    }
    fail(t, "'" + w + "' is neither a rule label nor a declared strategy");
  }

  StratRef call() {
    const Token& t = peek();
    std::string name = t.text;
    pos_ += 2;  // name (
    std::vector<Toks> arg_spans;
    if (!at_end() && peek().text == ")") {
      ++pos_;
    } else {
      size_t start = pos_;
      int depth = 1;
      while (!at_end()) {
        const std::string& x = peek().text;
        if (x == "(" || x == "[" || x == "{") ++depth;
        if (x == ")" || x == "]" || x == "}") {
          --depth;
          if (depth == 0) break;
        }
        ++pos_;
      }
      if (at_end()) fail(t, "unterminated strategy call");
      arg_spans = split_top(slice(toks_, start, pos_), ",");
      expect(")");
    }
    const StrategyDecl* decl = m_.find_strat_decl(name, arg_spans.size());
    if (!decl)
      fail(t, "strategy '" + name + "' is not declared with " +
                  std::to_string(arg_spans.size()) + " argument(s)");
    std::vector<TermRef> args;
    for (size_t i = 0; i < arg_spans.size(); ++i)
      args.push_back(parse_term(m_, arg_spans[i], decl->arg_sorts[i]));
    return m_.strats->call(name, std::move(args));
  }

  StratRef rule_app(bool top) {
    const Token& t = peek();
    std::string label = t.text;
    if (!m_.has_rule_label(label))
      fail(t, "'" + label + "' is not a rule label");
    ++pos_;
    std::vector<std::pair<TermRef, TermRef>> subst;
    std::vector<StratRef> cond_strats;
    if (!at_end() && peek().text == "[") {
      size_t start = ++pos_;
      int depth = 1;
      while (!at_end()) {
        const std::string& x = peek().text;
        if (x == "(" || x == "[" || x == "{") ++depth;
        if (x == ")" || x == "]" || x == "}") {
          --depth;
          if (depth == 0) break;
        }
        ++pos_;
      }
      if (at_end()) fail(t, "unterminated substitution");
      for (const Toks& item : split_top(slice(toks_, start, pos_), ",")) {
        size_t arrow = find_top(item, "<-");
        if (arrow == detail::npos || arrow == 0)
          fail(item.empty() ? t : item[0], "substitution items are 'X <- T'");
        TermRef v = parse_term(m_, slice(item, 0, arrow));
        if (!v->is_var())
          fail(item[0], "left side of '<-' must be a variable");
        TermRef val =
            parse_term(m_, slice(item, arrow + 1, item.size()), v->sort);
        subst.emplace_back(v, val);
      }
      expect("]");
    }
    if (!at_end() && peek().text == "{") {
      ++pos_;
      while (true) {
        cond_strats.push_back(expr(0, {",", "}"}));
        if (!at_end() && peek().text == ",") {
          ++pos_;
          continue;
        }
        break;
      }
      expect("}");
    }
    return m_.strats->rule_app(std::move(label), std::move(subst),
                               std::move(cond_strats), top);
  }

  Module& m_;
  const Toks& toks_;
  size_t pos_ = 0;
};

}  // namespace

StratRef parse_strategy(Module& m, const std::vector<Token>& toks) {
  return StratParser(m, toks).parse_whole();
}

// ---------------------------------------------------------------------------
// interactive commands

Command parse_command(const std::vector<Token>& toks_in) {
  Toks toks(toks_in);
  if (!toks.empty() && toks.back().text == ".") toks.pop_back();
  Command cmd;
  if (toks.empty()) return cmd;
  const std::string& verb = toks[0].text;
  size_t i = 1;

  if (verb == "load" || verb == "sload") {
    cmd.kind = Command::Kind::Load;
    if (toks.size() < 2) fail(toks[0], "load needs a file name");
    cmd.path = toks[1].text;
    return cmd;
  }
  if (verb == "quit" || verb == "q") {
    cmd.kind = Command::Kind::Quit;
    return cmd;
  }
  if (verb == "select") {
    cmd.kind = Command::Kind::Select;
    std::string name = detail::take_sort_name(toks, i);
    cmd.module_name = name;
    return cmd;
  }
  if (verb == "show") {
    cmd.kind = Command::Kind::ShowModule;
    if (i < toks.size() && toks[i].text == "module") ++i;
    if (i < toks.size()) cmd.module_name = detail::take_sort_name(toks, i);
    return cmd;
  }

  if (verb == "reduce" || verb == "red")
    cmd.kind = Command::Kind::Reduce;
  else if (verb == "rewrite" || verb == "rew")
    cmd.kind = Command::Kind::Rewrite;
  else if (verb == "search")
    cmd.kind = Command::Kind::Search;
  else if (verb == "srewrite" || verb == "srew")
    cmd.kind = Command::Kind::SRewrite;
  else if (verb == "dsrewrite" || verb == "dsrew")
    cmd.kind = Command::Kind::DSRewrite;
  else if (verb == "continue" || verb == "cont")
    cmd.kind = Command::Kind::Continue;
  else
    fail(toks[0], "unknown command '" + verb + "'");

  if (i < toks.size() && toks[i].text == "[") {
    if (i + 2 >= toks.size() || !detail::is_numeral(toks[i + 1].text) ||
        toks[i + 2].text != "]")
      fail(toks[i], "malformed bound, expected [n]");
    cmd.bound = std::stoll(toks[i + 1].text);
    i += 3;
  }
  if (i < toks.size() && toks[i].text == "in") {
    ++i;
    cmd.module_name = detail::take_sort_name(toks, i);
    if (i < toks.size() && toks[i].text == ":") ++i;
  }

  if (cmd.kind == Command::Kind::Continue) {
    if (i < toks.size() && detail::is_numeral(toks[i].text)) {
      cmd.bound = std::stoll(toks[i].text);
      ++i;
    } else {
      cmd.bound = 1;
    }
    if (i != toks.size()) fail(toks[i], "trailing tokens after continue");
    return cmd;
  }

  Toks rest = slice(toks, i, toks.size());
  if (rest.empty()) fail(toks.back(), "command without a term");

  switch (cmd.kind) {
    case Command::Kind::Reduce:
    case Command::Kind::Rewrite:
      cmd.subject = rest;
      break;
    case Command::Kind::Search: {
      size_t star = find_top(rest, "=>*");
      size_t plus = find_top(rest, "=>+");
      size_t bang = find_top(rest, "=>!");
      size_t arrow = std::min({star, plus, bang});
      if (arrow == detail::npos)
        fail(rest[0], "search needs =>*, =>+ or =>!");
      cmd.arrow = arrow == star    ? Command::Arrow::Star
                  : arrow == plus ? Command::Arrow::Plus
                                  : Command::Arrow::Bang;
      cmd.subject = slice(rest, 0, arrow);
      Toks pat = slice(rest, arrow + 1, rest.size());
      size_t st = find_top(pat, "s.t.");
      size_t such = find_top(pat, "such");
      if (such != detail::npos && such + 1 < pat.size() &&
          pat[such + 1].text == "that" && such < st) {
        cmd.pattern = slice(pat, 0, such);
        cmd.cond = slice(pat, such + 2, pat.size());
      } else if (st != detail::npos) {
        cmd.pattern = slice(pat, 0, st);
        cmd.cond = slice(pat, st + 1, pat.size());
      } else {
        cmd.pattern = pat;
      }
      if (cmd.subject.empty() || cmd.pattern.empty())
        fail(rest[0], "search needs a subject and a pattern");
      break;
    }
    case Command::Kind::SRewrite:
    case Command::Kind::DSRewrite: {
      size_t us = find_top(rest, "using");
      if (us == detail::npos) fail(rest[0], "expected 'using' and a strategy");
      cmd.subject = slice(rest, 0, us);
      cmd.strategy = slice(rest, us + 1, rest.size());
      if (cmd.subject.empty() || cmd.strategy.empty())
        fail(rest[0], "srewrite needs a term and a strategy");
      break;
    }
    default:
      break;
  }
  return cmd;
}

}  // namespace strew
