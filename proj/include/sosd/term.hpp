#pragma once

// Multisorted terms over a process/data signature, substitutions, and
// first-order linear matching. Everything in here is an immutable value;
// all functions are pure.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sosd {

enum class Sort { Process, Data };

inline char sort_letter(Sort s) { return s == Sort::Process ? 'P' : 'D'; }

// Raised for ill-formed inputs that violate a documented precondition
// (sort clashes, unknown symbols, non-linear patterns, ...).
struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

// A term is either a variable or an operator application. Action prefixes
// "l.t" are applications whose head is the label name followed by a dot;
// since '.' cannot occur in identifiers this never collides with a
// declared operator. Data terms are flat: constants or variables only.
struct Term {
  enum class Kind { Var, App };

  Kind kind = Kind::App;
  std::string head;
  std::vector<Term> args;
  Sort sort = Sort::Process;

  static Term var(std::string name, Sort s) {
    Term t;
    t.kind = Kind::Var;
    t.head = std::move(name);
    t.sort = s;
    return t;
  }
  static Term app(std::string op, std::vector<Term> children, Sort s = Sort::Process) {
    Term t;
    t.kind = Kind::App;
    t.head = std::move(op);
    t.args = std::move(children);
    t.sort = s;
    return t;
  }
  static Term data_const(std::string name) { return app(std::move(name), {}, Sort::Data); }

  bool is_var() const { return kind == Kind::Var; }
  bool is_app() const { return kind == Kind::App; }
  bool is_prefix() const { return kind == Kind::App && !head.empty() && head.back() == '.'; }
  std::string prefix_label() const { return head.substr(0, head.size() - 1); }
  bool is_plus() const { return kind == Kind::App && head == "plus" && args.size() == 2; }
};

// Canonical ordering: variables before applications, then lexicographic on
// (head, arity, children). Used wherever determinism is required.
inline int term_compare(const Term& a, const Term& b) {
  if (a.kind != b.kind) return a.kind == Term::Kind::Var ? -1 : 1;
  if (int c = a.head.compare(b.head)) return c < 0 ? -1 : 1;
  if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (int c = term_compare(a.args[i], b.args[i])) return c;
  return 0;
}

inline bool operator==(const Term& a, const Term& b) { return term_compare(a, b) == 0; }
inline bool operator!=(const Term& a, const Term& b) { return term_compare(a, b) != 0; }
inline bool operator<(const Term& a, const Term& b) { return term_compare(a, b) < 0; }

inline bool is_closed(const Term& t) {
  if (t.is_var()) return false;
  return std::all_of(t.args.begin(), t.args.end(), [](const Term& a) { return is_closed(a); });
}

inline size_t term_size(const Term& t) {
  size_t n = 1;
  for (const Term& a : t.args) n += term_size(a);
  return n;
}

inline void collect_vars(const Term& t, std::vector<Term>& out) {
  if (t.is_var()) {
    for (const Term& v : out)
      if (v.head == t.head) return;
    out.push_back(t);
    return;
  }
  for (const Term& a : t.args) collect_vars(a, out);
}

inline std::vector<Term> free_vars(const Term& t) {
  std::vector<Term> out;
  collect_vars(t, out);
  return out;
}

// Canonical printing: prefix application op(t1, t2), infix + right
// associated, action prefix a.t. This exact form is the wire format used
// by the CLI and the LTS export.
inline std::string to_string(const Term& t) {
  if (t.is_var()) return t.head;
  if (t.is_prefix()) {
    const Term& body = t.args[0];
    std::string inner = to_string(body);
    if (body.is_plus()) inner = "(" + inner + ")";
    return t.head + inner;
  }
  if (t.is_plus()) {
    std::string lhs = to_string(t.args[0]);
    if (t.args[0].is_plus()) lhs = "(" + lhs + ")";
    return lhs + " + " + to_string(t.args[1]);
  }
  if (t.args.empty()) return t.head;
  std::string out = t.head + "(";
  for (size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(t.args[i]);
  }
  return out + ")";
}

struct OpDecl {
  std::string name;
  std::vector<Sort> arg_sorts;
};

// Extensional predicate over the data carrier, e.g. Linda's "u not in d".
struct PredDecl {
  std::string name;
  std::vector<std::string> table;  // member constants, declaration order
};

// Reserved names: `term` is the action encoding the termination predicate,
// `SINK` the inert process that termination transitions point at.
inline constexpr const char* kTermAction = "term";
inline constexpr const char* kSinkOp = "SINK";

struct Signature {
  std::vector<OpDecl> process_ops;
  std::vector<std::string> data_constants;  // the finite carrier, declaration order
  std::vector<std::string> labels;
  std::vector<PredDecl> predicates;
  std::set<std::string> auto_declared;  // reserved names added implicitly; not printed

  const OpDecl* find_op(const std::string& name) const {
    for (const OpDecl& op : process_ops)
      if (op.name == name) return &op;
    return nullptr;
  }
  bool has_data_constant(const std::string& name) const {
    return std::find(data_constants.begin(), data_constants.end(), name) != data_constants.end();
  }
  bool has_label(const std::string& name) const {
    return std::find(labels.begin(), labels.end(), name) != labels.end();
  }
  const PredDecl* find_pred(const std::string& name) const {
    for (const PredDecl& p : predicates)
      if (p.name == name) return &p;
    return nullptr;
  }
  bool pred_holds(const std::string& pred, const std::string& constant) const {
    const PredDecl* p = find_pred(pred);
    if (!p) throw SpecError("unknown predicate: " + pred);
    return std::find(p->table.begin(), p->table.end(), constant) != p->table.end();
  }

  void declare_reserved_label() {
    if (!has_label(kTermAction)) {
      labels.push_back(kTermAction);
      auto_declared.insert(kTermAction);
    }
  }
  void declare_reserved_sink() {
    if (!find_op(kSinkOp)) {
      process_ops.push_back({kSinkOp, {}});
      auto_declared.insert(kSinkOp);
    }
  }

  void validate() const {
    std::set<std::string> seen;
    auto unique = [&seen](const std::string& n, const char* what) {
      if (!seen.insert(n).second) throw SpecError(std::string("duplicate ") + what + ": " + n);
    };
    for (const OpDecl& op : process_ops) unique(op.name, "operator");
    seen.clear();
    for (const std::string& d : data_constants) unique(d, "data constant");
    seen.clear();
    for (const std::string& l : labels) unique(l, "label");
    seen.clear();
    for (const PredDecl& p : predicates) {
      unique(p.name, "predicate");
      for (const std::string& c : p.table)
        if (!has_data_constant(c))
          throw SpecError("predicate " + p.name + " references unknown constant " + c);
    }
    if (data_constants.empty()) throw SpecError("data carrier must be non-empty");
  }

  // Recursive well-formedness of a term against this signature.
  void check_term(const Term& t) const {
    if (t.is_var()) return;
    if (t.sort == Sort::Data) {
      if (!t.args.empty()) throw SpecError("data terms must be flat: " + to_string(t));
      if (!has_data_constant(t.head)) throw SpecError("unknown data constant: " + t.head);
      return;
    }
    if (t.is_prefix()) {
      if (!has_label(t.prefix_label())) throw SpecError("unknown label: " + t.prefix_label());
      if (t.args.size() != 1 || t.args[0].sort != Sort::Process)
        throw SpecError("prefix takes one process argument");
      check_term(t.args[0]);
      return;
    }
    const OpDecl* op = find_op(t.head);
    if (!op) throw SpecError("unknown operator: " + t.head);
    if (op->arg_sorts.size() != t.args.size())
      throw SpecError("arity mismatch for " + t.head);
    for (size_t i = 0; i < t.args.size(); ++i) {
      if (t.args[i].sort != op->arg_sorts[i])
        throw SpecError("sort mismatch in argument " + std::to_string(i + 1) + " of " + t.head);
      check_term(t.args[i]);
    }
  }
};

// The finite carrier T(Sigma_D), in declaration order.
inline std::vector<Term> enumerate_closed_data(const Signature& sig) {
  std::vector<Term> out;
  out.reserve(sig.data_constants.size());
  for (const std::string& d : sig.data_constants) out.push_back(Term::data_const(d));
  return out;
}

// An oriented equality between two terms of the same sort, together with
// the axiom tag or schema-instance record that justifies it.
struct Equation {
  Term lhs;
  Term rhs;
  std::string justification;
};

using Substitution = std::map<std::string, Term>;

inline Term apply_subst(const Substitution& s, const Term& t) {
  if (t.is_var()) {
    auto it = s.find(t.head);
    if (it == s.end()) return t;
    if (it->second.sort != t.sort)
      throw SpecError("sort clash substituting " + t.head);
    return it->second;
  }
  Term out = t;
  for (Term& a : out.args) a = apply_subst(s, a);
  return out;
}

// Extend `subst` so that subst(pattern) == subject, binding unbound
// variables and checking bound ones. Returns false if no extension exists.
inline bool match_extend(const Term& pattern, const Term& subject, Substitution& subst) {
  if (pattern.sort != subject.sort) throw SpecError("match: sorts disagree");
  if (pattern.is_var()) {
    auto it = subst.find(pattern.head);
    if (it != subst.end()) return it->second == subject;
    subst.emplace(pattern.head, subject);
    return true;
  }
  if (subject.is_var() || pattern.head != subject.head ||
      pattern.args.size() != subject.args.size())
    return false;
  for (size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_extend(pattern.args[i], subject.args[i], subst)) return false;
  return true;
}

// First-order matching for linear patterns against closed subjects.
inline std::optional<Substitution> match(const Term& pattern, const Term& subject) {
  std::vector<Term> vars;
  collect_vars(pattern, vars);
  size_t occurrences = 0;
  struct Counter {
    static void count(const Term& t, size_t& n) {
      if (t.is_var()) { ++n; return; }
      for (const Term& a : t.args) count(a, n);
    }
  };
  Counter::count(pattern, occurrences);
  if (occurrences != vars.size())
    throw SpecError("non-linear pattern: " + to_string(pattern));
  if (!is_closed(subject)) throw SpecError("match: subject must be closed");
  Substitution subst;
  if (!match_extend(pattern, subject, subst)) return std::nullopt;
  return subst;
}

}  // namespace sosd
