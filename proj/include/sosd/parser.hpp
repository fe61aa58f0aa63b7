#pragma once

// Concrete syntax for specifications (.sos files): signature blocks,
// predicate tables, named definitions, and rules in either the with-data or
// the curried shape, inferred per rule. Every failure is a located error;
// print_spec emits the canonical form the parser round-trips on.

#include <cctype>
#include <functional>
#include <string>
#include <vector>

#include "sosd/rules.hpp"
#include "sosd/term.hpp"

namespace sosd {

struct ParseError : SpecError {
  int line;
  int col;
  ParseError(int line_, int col_, const std::string& msg)
      : SpecError("line " + std::to_string(line_) + ", col " + std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

namespace syntax {

enum class Tok {
  Ident,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Slash,
  Dot,
  Plus,
  Equals,
  Sep,    // ---
  Arrow,  // ->
  Minus,
  End,
};

struct Token {
  Tok type;
  std::string text;
  int line = 1;
  int col = 1;
};

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok t, std::string s, int l, int c) { out.push_back({t, std::move(s), l, c}); };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    int l = line, cl = col;
    if (ident_char(c)) {
      size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      push(Tok::Ident, text.substr(i, j - i), l, cl);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (c == '-') {
      if (i + 2 < text.size() && text[i + 1] == '-' && text[i + 2] == '-') {
        push(Tok::Sep, "---", l, cl);
        i += 3;
        col += 3;
        continue;
      }
      if (i + 1 < text.size() && text[i + 1] == '>') {
        push(Tok::Arrow, "->", l, cl);
        i += 2;
        col += 2;
        continue;
      }
      push(Tok::Minus, "-", l, cl);
      ++i;
      ++col;
      continue;
    }
    switch (c) {
      case '{': push(Tok::LBrace, "{", l, cl); break;
      case '}': push(Tok::RBrace, "}", l, cl); break;
      case '(': push(Tok::LParen, "(", l, cl); break;
      case ')': push(Tok::RParen, ")", l, cl); break;
      case ',': push(Tok::Comma, ",", l, cl); break;
      case '/': push(Tok::Slash, "/", l, cl); break;
      case '.': push(Tok::Dot, ".", l, cl); break;
      case '+': push(Tok::Plus, "+", l, cl); break;
      case '=': push(Tok::Equals, "=", l, cl); break;
      default:
        throw ParseError(l, cl, std::string("unexpected character '") + c + "'");
    }
    ++i;
    ++col;
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

constexpr size_t kMaxTermDepth = 1000;

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  SpecFile spec;
  bool flavor_fixed = false;

  const Token& peek(size_t ahead = 0) const {
    return toks[std::min(pos + ahead, toks.size() - 1)];
  }
  const Token& next() { return toks[std::min(pos++, toks.size() - 1)]; }
  bool at(Tok t) const { return peek().type == t; }

  [[noreturn]] void fail(const Token& tok, const std::string& msg) const {
    throw ParseError(tok.line, tok.col, msg);
  }
  const Token& expect(Tok t, const char* what) {
    if (!at(t)) fail(peek(), std::string("expected ") + what);
    return next();
  }
  std::string expect_ident(const char* what) { return expect(Tok::Ident, what).text; }

  // ---- terms ----

  std::string parse_action() {
    const Token& tok = expect(Tok::Ident, "label");
    if (!spec.sig.has_label(tok.text)) {
      if (tok.text == kTermAction)
        spec.sig.declare_reserved_label();
      else
        fail(tok, "unknown label: " + tok.text);
    }
    return tok.text;
  }

  Term parse_dterm() {
    const Token& tok = expect(Tok::Ident, "data term");
    if (spec.sig.has_data_constant(tok.text)) return Term::data_const(tok.text);
    if (spec.sig.find_op(tok.text) || spec.sig.has_label(tok.text))
      fail(tok, "expected a data term, found " + tok.text);
    return Term::var(tok.text, Sort::Data);
  }

  Term parse_pterm(size_t depth = 0) {
    if (depth > kMaxTermDepth) fail(peek(), "term nesting too deep");
    Term left = parse_pfactor(depth);
    if (at(Tok::Plus)) {
      const Token& plus = next();
      if (!spec.sig.find_op("plus")) fail(plus, "operator plus is not declared");
      Term right = parse_pterm(depth + 1);
      return Term::app("plus", {std::move(left), std::move(right)});
    }
    return left;
  }

  Term parse_pfactor(size_t depth) {
    if (depth > kMaxTermDepth) fail(peek(), "term nesting too deep");
    if (at(Tok::LParen)) {
      next();
      Term t = parse_pterm(depth + 1);
      expect(Tok::RParen, "')'");
      return t;
    }
    const Token& tok = expect(Tok::Ident, "term");
    if (at(Tok::Dot)) {
      if (!spec.sig.has_label(tok.text)) {
        if (tok.text == kTermAction)
          spec.sig.declare_reserved_label();
        else
          fail(tok, "unknown label: " + tok.text);
      }
      next();
      Term body = parse_pfactor(depth + 1);
      return Term::app(tok.text + ".", {std::move(body)});
    }
    const OpDecl* op = spec.sig.find_op(tok.text);
    if (op && at(Tok::LParen)) {
      if (op->arg_sorts.empty()) fail(tok, tok.text + " takes no arguments");
      next();
      std::vector<Term> args;
      for (size_t i = 0; i < op->arg_sorts.size(); ++i) {
        if (i) expect(Tok::Comma, "','");
        args.push_back(op->arg_sorts[i] == Sort::Data ? parse_dterm() : parse_pterm(depth + 1));
      }
      expect(Tok::RParen, "')'");
      return Term::app(tok.text, std::move(args));
    }
    if (op) {
      if (!op->arg_sorts.empty())
        fail(tok, tok.text + " expects " + std::to_string(op->arg_sorts.size()) + " arguments");
      return Term::app(tok.text, {});
    }
    if (tok.text == kSinkOp) {
      spec.sig.declare_reserved_sink();
      return Term::app(kSinkOp, {});
    }
    for (const auto& [name, body] : spec.defs)
      if (name == tok.text) return body;
    if (spec.sig.has_data_constant(tok.text))
      fail(tok, "data constant " + tok.text + " used in process position");
    if (spec.sig.has_label(tok.text))
      fail(tok, "label " + tok.text + " used as a term; write " + tok.text + ".t");
    return Term::var(tok.text, Sort::Process);
  }

  // ---- rules ----

  struct Transition {
    bool with_data = false;
    Term src, src_data, tgt, tgt_data;  // with-data shape
    LabelTriple label;                  // curried shape (also carries the action)
    std::string action;
  };

  Transition parse_transition() {
    Transition tr;
    if (at(Tok::LParen)) {
      size_t mark = pos;
      next();
      Term first = parse_pterm();
      if (at(Tok::Comma)) {
        tr.with_data = true;
        next();
        tr.src = std::move(first);
        tr.src_data = parse_dterm();
        expect(Tok::RParen, "')'");
        expect(Tok::Minus, "'-'");
        tr.action = parse_action();
        expect(Tok::Arrow, "'->'");
        expect(Tok::LParen, "'('");
        tr.tgt = parse_pterm();
        expect(Tok::Comma, "','");
        tr.tgt_data = parse_dterm();
        expect(Tok::RParen, "')'");
        return tr;
      }
      pos = mark;  // parenthesized process term of a curried transition
    }
    tr.with_data = false;
    tr.src = parse_pterm();
    expect(Tok::Minus, "'-'");
    expect(Tok::LParen, "'('");
    tr.label.before = parse_dterm();
    expect(Tok::Comma, "','");
    tr.label.action = parse_action();
    expect(Tok::Comma, "','");
    tr.label.after = parse_dterm();
    expect(Tok::RParen, "')'");
    expect(Tok::Arrow, "'->'");
    tr.tgt = parse_pterm();
    return tr;
  }

  std::vector<SideCondition> parse_where() {
    std::vector<SideCondition> conds;
    if (!(at(Tok::Ident) && peek().text == "where")) return conds;
    next();
    while (true) {
      const Token& name = expect(Tok::Ident, "predicate name");
      if (!spec.sig.find_pred(name.text)) fail(name, "unknown predicate: " + name.text);
      SideCondition c;
      c.pred = name.text;
      expect(Tok::LParen, "'('");
      c.args.push_back(parse_dterm());
      expect(Tok::RParen, "')'");
      conds.push_back(std::move(c));
      if (at(Tok::Comma)) {
        next();
        continue;
      }
      break;
    }
    return conds;
  }

  void parse_rule() {
    const Token& name = expect(Tok::Ident, "rule name");
    for (const std::string& n : spec.rule_names())
      if (n == name.text) fail(name, "duplicate rule name: " + name.text);
    expect(Tok::LBrace, "'{'");

    std::vector<Transition> premises;
    while (!at(Tok::Sep)) {
      if (at(Tok::End)) fail(peek(), "unterminated rule (missing ---)");
      premises.push_back(parse_transition());
    }
    const Token& sep = next();
    Transition conclusion = parse_transition();
    std::vector<SideCondition> conds = parse_where();
    expect(Tok::RBrace, "'}'");

    bool with_data = conclusion.with_data;
    for (const Transition& pr : premises)
      if (pr.with_data != with_data)
        fail(sep, "rule " + name.text + " mixes curried and with-data transitions");
    RuleFlavor flavor = with_data ? RuleFlavor::WithData : RuleFlavor::Curried;
    if (!flavor_fixed) {
      spec.flavor = flavor;
      flavor_fixed = true;
    } else if (spec.flavor != flavor) {
      fail(name, "cannot mix curried and with-data rules in one specification");
    }

    if (with_data) {
      RuleWithData r;
      r.name = name.text;
      for (Transition& pr : premises)
        r.premises.push_back(
            {pr.src, pr.src_data, pr.action, pr.tgt, pr.tgt_data});
      r.src = conclusion.src;
      r.src_data = conclusion.src_data;
      r.action = conclusion.action;
      r.tgt = conclusion.tgt;
      r.tgt_data = conclusion.tgt_data;
      r.conditions = std::move(conds);
      spec.data_rules.push_back(std::move(r));
    } else {
      CurriedRule r;
      r.name = name.text;
      for (Transition& pr : premises) r.premises.push_back({pr.src, pr.label, pr.tgt});
      r.src = conclusion.src;
      r.label = conclusion.label;
      r.tgt = conclusion.tgt;
      r.conditions = std::move(conds);
      spec.curried_rules.push_back(std::move(r));
    }
  }

  // ---- blocks ----

  void parse_data_block() {
    expect(Tok::LBrace, "'{'");
    while (at(Tok::Ident)) {
      const Token& tok = next();
      if (spec.sig.has_data_constant(tok.text)) fail(tok, "duplicate data constant: " + tok.text);
      spec.sig.data_constants.push_back(tok.text);
    }
    expect(Tok::RBrace, "'}'");
  }

  void parse_labels_block() {
    expect(Tok::LBrace, "'{'");
    while (at(Tok::Ident)) {
      const Token& tok = next();
      if (spec.sig.has_label(tok.text)) fail(tok, "duplicate label: " + tok.text);
      spec.sig.labels.push_back(tok.text);
    }
    expect(Tok::RBrace, "'}'");
  }

  void parse_ops_block() {
    expect(Tok::LBrace, "'{'");
    while (at(Tok::Ident)) {
      const Token& name = next();
      if (spec.sig.find_op(name.text)) fail(name, "duplicate operator: " + name.text);
      expect(Tok::Slash, "'/'");
      const Token& arity_tok = expect(Tok::Ident, "arity");
      for (char c : arity_tok.text)
        if (!std::isdigit(static_cast<unsigned char>(c))) fail(arity_tok, "arity must be a number");
      if (arity_tok.text.size() > 1) fail(arity_tok, "arity too large");
      unsigned long arity = std::stoul(arity_tok.text);
      if (arity > 8) fail(arity_tok, "arity too large");
      OpDecl op;
      op.name = name.text;
      if (arity > 0) {
        const Token& sig_tok = expect(Tok::Ident, "sort signature");
        if (sig_tok.text.size() != arity)
          fail(sig_tok, "sort signature length does not match arity");
        for (char c : sig_tok.text) {
          if (c == 'P')
            op.arg_sorts.push_back(Sort::Process);
          else if (c == 'D')
            op.arg_sorts.push_back(Sort::Data);
          else
            fail(sig_tok, "sort signature must consist of P and D");
        }
      }
      spec.sig.process_ops.push_back(std::move(op));
    }
    expect(Tok::RBrace, "'}'");
  }

  void parse_pred_block() {
    const Token& name = expect(Tok::Ident, "predicate name");
    if (spec.sig.find_pred(name.text)) fail(name, "duplicate predicate: " + name.text);
    PredDecl pred;
    pred.name = name.text;
    expect(Tok::LBrace, "'{'");
    while (at(Tok::Ident)) {
      const Token& tok = next();
      if (!spec.sig.has_data_constant(tok.text))
        fail(tok, "predicate entry is not a data constant: " + tok.text);
      pred.table.push_back(tok.text);
    }
    expect(Tok::RBrace, "'}'");
    spec.sig.predicates.push_back(std::move(pred));
  }

  void parse_def() {
    const Token& name = expect(Tok::Ident, "definition name");
    for (const auto& [n, _] : spec.defs)
      if (n == name.text) fail(name, "duplicate definition: " + name.text);
    expect(Tok::Equals, "'='");
    Term body = parse_pterm();
    if (!is_closed(body)) fail(name, "definition must be a closed term");
    spec.defs.emplace_back(name.text, std::move(body));
  }

  SpecFile parse() {
    const Token& h = expect(Tok::Ident, "'sorts'");
    if (h.text != "sorts") fail(h, "specification must start with 'sorts P D'");
    if (expect_ident("'P'") != "P" || expect_ident("'D'") != "D")
      fail(h, "specification must start with 'sorts P D'");
    while (!at(Tok::End)) {
      const Token& kw = expect(Tok::Ident, "block (data, labels, ops, pred, def, rule)");
      if (kw.text == "data")
        parse_data_block();
      else if (kw.text == "labels")
        parse_labels_block();
      else if (kw.text == "ops")
        parse_ops_block();
      else if (kw.text == "pred")
        parse_pred_block();
      else if (kw.text == "def")
        parse_def();
      else if (kw.text == "rule")
        parse_rule();
      else
        fail(kw, "unknown block: " + kw.text);
    }
    if (spec.sig.data_constants.empty())
      throw ParseError(peek().line, peek().col, "data carrier must be non-empty");
    try {
      spec.sig.validate();
    } catch (const SpecError& e) {
      throw ParseError(peek().line, peek().col, e.what());
    }
    return spec;
  }
};

}  // namespace syntax

inline SpecFile parse_spec(const std::string& text) {
  syntax::Parser p;
  p.toks = syntax::lex(text);
  return p.parse();
}

// Parses a single closed process term against a specification; used by the
// CLI for term arguments.
inline Term parse_closed_term(const SpecFile& spec, const std::string& text) {
  syntax::Parser p;
  p.spec = spec;
  p.toks = syntax::lex(text);
  Term t = p.parse_pterm();
  if (!p.at(syntax::Tok::End))
    throw ParseError(p.peek().line, p.peek().col, "trailing input after term");
  if (!is_closed(t)) throw SpecError("term must be closed: " + text);
  p.spec.sig.check_term(t);
  return t;
}

// ---- canonical printing ----

namespace detail {

inline std::string print_with_data_transition(const Term& src, const Term& src_data,
                                              const std::string& action, const Term& tgt,
                                              const Term& tgt_data) {
  return "(" + to_string(src) + ", " + to_string(src_data) + ") -" + action + "-> (" +
         to_string(tgt) + ", " + to_string(tgt_data) + ")";
}

inline std::string print_curried_transition(const Term& src, const LabelTriple& label,
                                            const Term& tgt) {
  return to_string(src) + " -(" + to_string(label.before) + ", " + label.action + ", " +
         to_string(label.after) + ")-> " + to_string(tgt);
}

inline std::string print_conditions(const std::vector<SideCondition>& conds) {
  if (conds.empty()) return "";
  std::string out = " where ";
  for (size_t i = 0; i < conds.size(); ++i) {
    if (i) out += ", ";
    out += conds[i].pred + "(";
    for (size_t j = 0; j < conds[i].args.size(); ++j) {
      if (j) out += ", ";
      out += to_string(conds[i].args[j]);
    }
    out += ")";
  }
  return out;
}

}  // namespace detail

inline std::string print_spec(const SpecFile& spec) {
  const Signature& sig = spec.sig;
  std::string out = "sorts P D\n";

  auto visible = [&sig](const std::string& name) { return !sig.auto_declared.count(name); };

  out += "\ndata {";
  for (const std::string& d : sig.data_constants) out += " " + d;
  out += " }\n";

  std::string labels;
  for (const std::string& l : sig.labels)
    if (visible(l)) labels += " " + l;
  out += "\nlabels {" + labels + " }\n";

  std::string ops;
  for (const OpDecl& op : sig.process_ops) {
    if (!visible(op.name)) continue;
    ops += " " + op.name + "/" + std::to_string(op.arg_sorts.size());
    if (!op.arg_sorts.empty()) {
      ops += " ";
      for (Sort s : op.arg_sorts) ops += sort_letter(s);
    }
  }
  out += "\nops {" + ops + " }\n";

  for (const PredDecl& p : sig.predicates) {
    out += "\npred " + p.name + " {";
    for (const std::string& c : p.table) out += " " + c;
    out += " }\n";
  }

  for (const auto& [name, body] : spec.defs) out += "\ndef " + name + " = " + to_string(body) + "\n";

  if (spec.flavor == RuleFlavor::WithData) {
    for (const RuleWithData& r : spec.data_rules) {
      out += "\nrule " + r.name + " {\n";
      for (const DataPremise& pr : r.premises)
        out += "  " +
               detail::print_with_data_transition(pr.source, pr.source_data, pr.action, pr.target,
                                                  pr.target_data) +
               "\n";
      out += "  ---\n";
      out += "  " + detail::print_with_data_transition(r.src, r.src_data, r.action, r.tgt,
                                                       r.tgt_data);
      out += detail::print_conditions(r.conditions) + "\n}\n";
    }
  } else {
    for (const CurriedRule& r : spec.curried_rules) {
      out += "\nrule " + r.name + " {\n";
      for (const CurriedPremise& pr : r.premises)
        out += "  " + detail::print_curried_transition(pr.source, pr.label, pr.target) + "\n";
      out += "  ---\n";
      out += "  " + detail::print_curried_transition(r.src, r.label, r.tgt);
      out += detail::print_conditions(r.conditions) + "\n}\n";
    }
  }
  return out;
}

inline bool spec_equal(const SpecFile& a, const SpecFile& b) {
  return a.flavor == b.flavor && print_spec(a) == print_spec(b);
}

}  // namespace sosd
