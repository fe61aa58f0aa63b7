#pragma once

// The comm-form rule format: if every defining rule of a binary operator
// has a commutative mirror, the operator is commutative modulo strong
// bisimilarity. The check is syntactic and sufficient only; a failure
// proves nothing.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sosd/rules.hpp"
#include "sosd/term.hpp"

namespace sosd {

// Equality up to swapping the argument pairs of COMM operators in any
// context, decided by comparing canonical forms in which every COMM
// application has its arguments sorted.
inline Term cc_normal(const Term& t, const std::set<std::string>& comm_ops) {
  Term out = t;
  for (Term& a : out.args) a = cc_normal(a, comm_ops);
  if (out.is_app() && out.args.size() == 2 && comm_ops.count(out.head) &&
      term_compare(out.args[1], out.args[0]) < 0)
    std::swap(out.args[0], out.args[1]);
  return out;
}

inline bool cc_equal(const Term& t1, const Term& t2, const std::set<std::string>& comm_ops) {
  if (t1.sort != t2.sort) throw SpecError("cc_equal: sorts disagree");
  return cc_normal(t1, comm_ops) == cc_normal(t2, comm_ops);
}

// A bijective renaming of variables, built incrementally.
struct VarBijection {
  std::map<std::string, std::string> fwd;
  std::map<std::string, std::string> inv;

  bool bind(const std::string& a, const std::string& b) {
    auto f = fwd.find(a);
    if (f != fwd.end()) return f->second == b;
    auto i = inv.find(b);
    if (i != inv.end()) return i->second == a;
    fwd.emplace(a, b);
    inv.emplace(b, a);
    return true;
  }
  bool maps(const std::string& a) const { return fwd.count(a) != 0; }
  bool hits(const std::string& b) const { return inv.count(b) != 0; }

  Term apply(const Term& t) const {
    if (t.is_var()) {
      auto it = fwd.find(t.head);
      return it == fwd.end() ? t : Term::var(it->second, t.sort);
    }
    Term out = t;
    for (Term& a : out.args) a = apply(a);
    return out;
  }
};

struct MirrorWitness {
  std::string rule;
  std::string mirror;
  std::map<std::string, std::string> renaming;
};

struct CommOpResult {
  std::string op;
  bool pass = false;
  std::vector<MirrorWitness> mirrors;
  std::vector<RuleIssue> issues;  // shape violations or missing mirrors
};

struct CommReport {
  bool pass = false;
  std::vector<CommOpResult> per_op;
  std::vector<Equation> equations;  // f(x0,x1) = f(x1,x0), sound for strong bisimilarity
};

namespace detail {

// Renaming-aware equality of flat data terms in labels: variables must map
// to variables, constants must coincide.
inline bool bind_label_part(VarBijection& h, const Term& from, const Term& to) {
  if (from.is_var() && to.is_var()) {
    if (from.sort != to.sort) return false;
    return h.bind(from.head, to.head);
  }
  if (from.is_app() && to.is_app()) return from.head == to.head;
  return false;
}

inline bool comm_shape_ok(const CurriedRule& r, std::vector<RuleIssue>& issues) {
  bool ok = true;
  auto bad = [&](const std::string& why) {
    issues.push_back({r.name, why});
    ok = false;
  };
  if (!r.src.is_app() || r.src.args.size() != 2) {
    bad("conclusion source is not a binary application");
    return false;
  }
  if (!r.conditions.empty()) bad("side conditions are outside the comm-form format");
  const Term& x0 = r.src.args[0];
  const Term& x1 = r.src.args[1];
  if (!x0.is_var() || !x1.is_var() || x0.head == x1.head)
    bad("conclusion source arguments must be distinct variables");
  std::set<std::string> distinct{x0.head, x1.head};
  for (const CurriedPremise& pr : r.premises) {
    if (!pr.source.is_var() ||
        (pr.source.head != x0.head && pr.source.head != x1.head))
      bad("premise tests non-argument: " + to_string(pr.source));
    if (!pr.target.is_var() || !distinct.insert(pr.target.head).second)
      bad("premise target not a fresh variable: " + to_string(pr.target));
  }
  return ok;
}

// Try to exhibit rho' as the commutative mirror of rho.
inline bool find_mirror(const CurriedRule& rho, const CurriedRule& rho_m,
                        const std::set<std::string>& comm_ops, VarBijection& out) {
  if (rho_m.label.action != rho.label.action) return false;

  VarBijection h;
  // swap of the conclusion-source arguments
  if (!h.bind(rho_m.src.args[0].head, rho.src.args[1].head)) return false;
  if (!h.bind(rho_m.src.args[1].head, rho.src.args[0].head)) return false;
  // same conclusion label up to the renaming
  if (!bind_label_part(h, rho_m.label.before, rho.label.before)) return false;
  if (!bind_label_part(h, rho_m.label.after, rho.label.after)) return false;

  // injective mapping of rho_m's premises into rho's
  size_t n = rho_m.premises.size();
  std::vector<bool> used(rho.premises.size(), false);
  std::function<bool(size_t, VarBijection)> assign = [&](size_t i, VarBijection hh) -> bool {
    if (i == n) {
      // remaining freedom: variables of the mirrored target not yet mapped
      std::vector<Term> from_vars;
      collect_vars(rho_m.tgt, from_vars);
      std::vector<Term> pending;
      for (const Term& v : from_vars)
        if (!hh.maps(v.head)) pending.push_back(v);
      std::vector<Term> to_vars;
      collect_vars(rho.tgt, to_vars);
      std::function<bool(size_t, VarBijection)> extend = [&](size_t j, VarBijection h2) -> bool {
        if (j == pending.size()) {
          if (!cc_equal(h2.apply(rho_m.tgt), rho.tgt, comm_ops)) return false;
          out = h2;
          return true;
        }
        for (const Term& cand : to_vars) {
          if (cand.sort != pending[j].sort || h2.hits(cand.head)) continue;
          VarBijection h3 = h2;
          if (h3.bind(pending[j].head, cand.head) && extend(j + 1, h3)) return true;
        }
        return false;
      };
      return extend(0, hh);
    }
    const CurriedPremise& pm = rho_m.premises[i];
    for (size_t k = 0; k < rho.premises.size(); ++k) {
      if (used[k]) continue;
      const CurriedPremise& pr = rho.premises[k];
      if (pr.label.action != pm.label.action) continue;
      VarBijection h2 = hh;
      if (!h2.bind(pm.source.head, pr.source.head)) continue;
      if (!bind_label_part(h2, pm.label.before, pr.label.before)) continue;
      if (!bind_label_part(h2, pm.label.after, pr.label.after)) continue;
      if (!h2.bind(pm.target.head, pr.target.head)) continue;
      used[k] = true;
      if (assign(i + 1, h2)) {
        used[k] = false;
        return true;
      }
      used[k] = false;
    }
    return false;
  };
  return assign(0, h);
}

}  // namespace detail

// Checks the comm-form format of a curried specification with respect to
// `comm_ops`. On pass, emits the commutativity equation for each operator,
// justified by the format theorem (sound for strong bisimilarity, hence for
// stateless bisimilarity on the original system).
inline CommReport check_comm_form(const SpecFile& curried,
                                  const std::set<std::string>& comm_ops) {
  if (curried.flavor != RuleFlavor::Curried)
    throw SpecError("check_comm_form expects a curried specification");
  CommReport report;
  report.pass = true;

  for (const std::string& f : comm_ops) {
    const OpDecl* op = curried.sig.find_op(f);
    if (!op) throw SpecError("unknown operator: " + f);
    if (op->arg_sorts.size() != 2 || op->arg_sorts[0] != Sort::Process ||
        op->arg_sorts[1] != Sort::Process)
      throw SpecError("comm-form requires a binary process operator: " + f);

    CommOpResult res;
    res.op = f;
    res.pass = true;

    std::vector<const CurriedRule*> defining;
    for (const CurriedRule& r : curried.curried_rules)
      if (r.src.is_app() && r.src.head == f) defining.push_back(&r);

    for (const CurriedRule* r : defining)
      if (!detail::comm_shape_ok(*r, res.issues)) res.pass = false;

    if (res.pass) {
      for (const CurriedRule* r : defining) {
        bool found = false;
        for (const CurriedRule* cand : defining) {
          VarBijection h;
          if (detail::find_mirror(*r, *cand, comm_ops, h)) {
            res.mirrors.push_back({r->name, cand->name, h.fwd});
            found = true;
            break;
          }
        }
        if (!found) {
          res.issues.push_back({r->name, "no commutative mirror"});
          res.pass = false;
        }
      }
    }

    if (res.pass) {
      Term x0 = Term::var("x0", Sort::Process);
      Term x1 = Term::var("x1", Sort::Process);
      report.equations.push_back({Term::app(f, {x0, x1}), Term::app(f, {x1, x0}),
                                  "comm-form: sound for strong bisimilarity"});
    } else {
      report.pass = false;
    }
    report.per_op.push_back(std::move(res));
  }
  return report;
}

}  // namespace sosd
