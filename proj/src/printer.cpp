#include "strew/printer.hpp"

#include <sstream>

namespace strew {

namespace {

constexpr int kAnyPrec = 1 << 20;

// Maude spacing: no blank before a comma or closing bracket, none after an
// opening one, so [_,_,_] prints as [1, 2, b] while _;_ keeps its blanks.
bool glues_left(const std::string& p) {
  return p == "," || p == ")" || p == "]" || p == "}";
}
bool glues_right(const std::string& p) {
  return p == "(" || p == "[" || p == "{";
}

// Kinds an argument of a `name` application may take at position i, across
// all overloads of the right arity (flattened associative nodes look at the
// binary declarations). Used to decide when a constant needs qualification.
std::vector<KindId> slot_kinds(const Signature& sig, const std::string& name,
                               int nargs, size_t i) {
  std::vector<KindId> ks;
  const std::vector<SymbolId>* ids = sig.symbols_named(name);
  if (!ids) return ks;
  for (SymbolId id : *ids) {
    const Symbol& s2 = sig.symbol(id);
    KindId k;
    if (s2.arity == nargs)
      k = s2.arg_kinds[i];
    else if (s2.assoc && s2.arity == 2 && nargs > 2)
      k = s2.arg_kinds[0];
    else
      continue;
    if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
  }
  return ks;
}

// Precedence-driven parenthesisation: a subterm needs parens when its top
// operator binds more loosely (higher prec) than the slot allows. Left slots
// of an infix admit the operator's own precedence, right slots one less
// (operators associate to the left); slots enclosed by literal pieces on both
// sides admit anything. pos_kinds narrows the kinds admissible where this
// term sits (null: anything goes); a constant whose name resolves to several
// symbols there prints qualified, e.g. (nil).List{Qid}.
void pr(const Module& m, TermRef t, int bound,
        const std::vector<KindId>* pos_kinds, std::string& out) {
  switch (t->tag) {
    case TermNode::Tag::Num:
      out += std::to_string(t->value);
      return;
    case TermNode::Tag::Qid:
      out += t->name;
      return;
    case TermNode::Tag::Var:
      out += t->name;
      if (t->name != "[]") {
        out += ':';
        out += m.sig.sort(t->sort).name;
      }
      return;
    case TermNode::Tag::App:
      break;
  }
  const Symbol& sym = m.sig.symbol(t->sym);
  if (t->args.empty()) {
    int cands = 0;
    if (const std::vector<SymbolId>* ids = m.sig.symbols_named(sym.name))
      for (SymbolId id : *ids) {
        const Symbol& s2 = m.sig.symbol(id);
        if (s2.arity != 0) continue;
        if (pos_kinds && std::find(pos_kinds->begin(), pos_kinds->end(),
                                   s2.result_kind) == pos_kinds->end())
          continue;
        ++cands;
      }
    if (cands >= 2) {  // another constant of this name could sit here
      out += '(';
      out += sym.name;
      out += ").";
      out += m.sig.sort(t->sort).name;
      return;
    }
  }
  if (sym.function_form) {
    out += sym.name;
    if (!t->args.empty()) {
      out += '(';
      for (size_t i = 0; i < t->args.size(); ++i) {
        if (i) out += ", ";
        std::vector<KindId> ks =
            slot_kinds(m.sig, sym.name, static_cast<int>(t->args.size()), i);
        pr(m, t->args[i], kAnyPrec, &ks, out);
      }
      out += ')';
    }
    return;
  }

  std::string body;
  if (sym.assoc && t->args.size() >= 2) {
    // Flattened n-ary form: join the arguments with the literal pieces that
    // sit between the two slots of the binary declaration.
    std::string sep;
    bool in_between = false;
    for (const std::string& p : sym.pieces) {
      if (p.empty()) {
        if (in_between) break;
        in_between = true;
      } else if (in_between) {
        if (!sep.empty()) sep += ' ';
        sep += p;
      }
    }
    std::vector<KindId> ks =
        slot_kinds(m.sig, sym.name, static_cast<int>(t->args.size()), 0);
    for (size_t i = 0; i < t->args.size(); ++i) {
      if (i) {
        if (!sep.empty()) {
          if (!glues_left(sep)) body += ' ';
          body += sep;
        }
        body += ' ';
      }
      pr(m, t->args[i], i ? sym.prec - 1 : sym.prec, &ks, body);
    }
  } else {
    bool leading = !sym.pieces.empty() && sym.pieces.front().empty();
    size_t ai = 0;
    for (size_t i = 0; i < sym.pieces.size(); ++i) {
      const std::string& p = sym.pieces[i];
      if (i && !(!p.empty() && glues_left(p)) &&
          !(!sym.pieces[i - 1].empty() && glues_right(sym.pieces[i - 1])))
        body += ' ';
      if (!p.empty()) {
        body += p;
        continue;
      }
      int slot;
      if (i == 0)
        slot = sym.prec;  // leading slot
      else if (i + 1 == sym.pieces.size())
        slot = leading ? sym.prec - 1 : sym.prec;  // infix right / prefix
      else
        slot = kAnyPrec;  // enclosed by literals
      TermRef arg = ai < t->args.size() ? t->args[ai] : nullptr;
      if (arg) {
        std::vector<KindId> ks =
            slot_kinds(m.sig, sym.name, static_cast<int>(t->args.size()), ai);
        pr(m, arg, slot, &ks, body);
        ++ai;
      }
    }
  }
  if (sym.prec > bound) {
    out += '(';
    out += body;
    out += ')';
  } else {
    out += body;
  }
}

}  // namespace

std::string print_term(const Module& m, TermRef t) {
  std::string out;
  pr(m, t, kAnyPrec, nullptr, out);
  return out;
}

std::string print_sorted_term(const Module& m, TermRef t) {
  return m.sig.sort(t->sort).name + ": " + print_term(m, t);
}

std::string print_condition(const Module& m,
                            const std::vector<CondFrag>& cond) {
  std::string out;
  for (size_t i = 0; i < cond.size(); ++i) {
    if (i) out += " /\\ ";
    const CondFrag& f = cond[i];
    switch (f.kind) {
      case CondFrag::Kind::Bool:
        out += print_term(m, f.lhs);
        break;
      case CondFrag::Kind::Equal:
        out += print_term(m, f.lhs) + " = " + print_term(m, f.rhs);
        break;
      case CondFrag::Kind::Assign:
        out += print_term(m, f.lhs) + " := " + print_term(m, f.rhs);
        break;
      case CondFrag::Kind::Rewrite:
        out += print_term(m, f.lhs) + " => " + print_term(m, f.rhs);
        break;
      case CondFrag::Kind::SortTest:
        out += print_term(m, f.lhs) + " : " + m.sig.sort(f.sort).name;
        break;
    }
  }
  return out;
}

namespace {

// seq 3, or-else/alt/cond 1-2, leaves 4; matchrew and tests print
// parenthesised whenever nested, since their pattern extends to the right.
int sprec(StratRef s) {
  switch (s->kind) {
    case StratKind::Seq: return 3;
    case StratKind::Alt: return 1;
    case StratKind::Cond: return 0;
    case StratKind::Test:
    case StratKind::MatchRew: return 0;
    default: return 4;
  }
}

void sp(const Module& m, StratRef s, int bound, std::string& out) {
  std::string body;
  switch (s->kind) {
    case StratKind::Idle: body = "idle"; break;
    case StratKind::Fail: body = "fail"; break;
    case StratKind::All: body = "all"; break;
    case StratKind::RuleApp: {
      if (s->top) body += "top(";
      body += s->name;
      if (!s->subst.empty()) {
        body += '[';
        for (size_t i = 0; i < s->subst.size(); ++i) {
          if (i) body += ", ";
          body += print_term(m, s->subst[i].first) + " <- " +
                  print_term(m, s->subst[i].second);
        }
        body += ']';
      }
      if (!s->children.empty()) {
        body += '{';
        for (size_t i = 0; i < s->children.size(); ++i) {
          if (i) body += ", ";
          sp(m, s->children[i], kAnyPrec, body);
        }
        body += '}';
      }
      if (s->top) body += ')';
      break;
    }
    case StratKind::Test: {
      body += s->mode == MatchMode::Top      ? "match "
              : s->mode == MatchMode::TopExt ? "xmatch "
                                             : "amatch ";
      body += print_term(m, s->pattern);
      if (!s->cond.empty()) body += " s.t. " + print_condition(m, s->cond);
      break;
    }
    case StratKind::MatchRew: {
      body += s->mode == MatchMode::Top      ? "matchrew "
              : s->mode == MatchMode::TopExt ? "xmatchrew "
                                             : "amatchrew ";
      body += print_term(m, s->pattern);
      if (!s->cond.empty()) body += " s.t. " + print_condition(m, s->cond);
      body += " by ";
      for (size_t i = 0; i < s->using_pairs.size(); ++i) {
        if (i) body += ", ";
        body += print_term(m, s->using_pairs[i].first) + " using ";
        sp(m, s->using_pairs[i].second, 0, body);
      }
      break;
    }
    case StratKind::Seq:
      sp(m, s->children[0], 3, body);
      body += " ; ";
      sp(m, s->children[1], 4, body);
      break;
    case StratKind::Alt:
      sp(m, s->children[0], 1, body);
      body += " | ";
      sp(m, s->children[1], 2, body);
      break;
    case StratKind::Star:
      sp(m, s->children[0], 4, body);
      body += " *";
      break;
    case StratKind::Cond:
      sp(m, s->children[0], 1, body);
      body += " ? ";
      sp(m, s->children[1], 1, body);
      body += " : ";
      sp(m, s->children[2], 0, body);
      break;
    case StratKind::One:
      body += "one(";
      sp(m, s->children[0], kAnyPrec, body);
      body += ')';
      break;
    case StratKind::Call:
      body += s->name;
      if (!s->call_args.empty()) {
        body += '(';
        for (size_t i = 0; i < s->call_args.size(); ++i) {
          if (i) body += ", ";
          body += print_term(m, s->call_args[i]);
        }
        body += ')';
      }
      break;
  }
  if (sprec(s) < bound) {
    out += '(';
    out += body;
    out += ')';
  } else {
    out += body;
  }
}

}  // namespace

std::string print_strategy(const Module& m, StratRef s) {
  std::string out;
  sp(m, s, 0, out);
  return out;
}

}  // namespace strew
