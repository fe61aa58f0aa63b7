#pragma once

// The equational system for the data-aware core calculus: terms over
// {0, l._, +, check, update}, the eleven-axiom system, head normalization,
// the ground equality decision procedure, and the axiom-schema generator
// for arbitrary positive-GSOS operations that disjointly extend the core.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sosd/curry.hpp"
#include "sosd/rules.hpp"
#include "sosd/term.hpp"

namespace sosd {

inline constexpr const char* kZeroOp = "0";
inline constexpr const char* kPlusOp = "plus";
inline constexpr const char* kCheckOp = "check";
inline constexpr const char* kUpdateOp = "update";

inline Term mk_zero() { return Term::app(kZeroOp, {}); }
inline Term mk_plus(Term a, Term b) { return Term::app(kPlusOp, {std::move(a), std::move(b)}); }
inline Term mk_check(Term d, Term p) { return Term::app(kCheckOp, {std::move(d), std::move(p)}); }
inline Term mk_update(Term d, Term p) { return Term::app(kUpdateOp, {std::move(d), std::move(p)}); }
inline Term mk_prefix(const std::string& label, Term p) {
  return Term::app(label + ".", {std::move(p)});
}

struct NotHeadNormalizable : SpecError {
  explicit NotHeadNormalizable(const std::string& what) : SpecError(what) {}
};

// Is t built from the core operators only?
inline bool is_core_term(const Term& t) {
  if (t.is_var()) return false;
  if (t.sort == Sort::Data) return t.args.empty();
  if (t.is_prefix()) return t.args.size() == 1 && is_core_term(t.args[0]);
  if (t.head == kZeroOp) return t.args.empty();
  if (t.head == kPlusOp)
    return t.args.size() == 2 && is_core_term(t.args[0]) && is_core_term(t.args[1]);
  if (t.head == kCheckOp || t.head == kUpdateOp)
    return t.args.size() == 2 && t.args[0].sort == Sort::Data && t.args[0].args.empty() &&
           !t.args[0].is_var() && is_core_term(t.args[1]);
  return false;
}

// One summand update(after, check(before, action.cont)) of a head normal
// form. The continuation may mention foreign operators; the h.n.f. shape
// constrains only the summand skeleton.
struct HnfSummand {
  std::string after;
  std::string before;
  std::string action;
  Term cont;

  friend bool operator==(const HnfSummand& a, const HnfSummand& b) {
    return a.after == b.after && a.before == b.before && a.action == b.action &&
           a.cont == b.cont;
  }
  friend bool operator<(const HnfSummand& a, const HnfSummand& b) {
    if (a.after != b.after) return a.after < b.after;
    if (a.before != b.before) return a.before < b.before;
    if (a.action != b.action) return a.action < b.action;
    return a.cont < b.cont;
  }
};

// A head normal form: canonically sorted, syntactically deduplicated sum of
// summands. The empty sum denotes 0. Keeping the multiset canonical makes
// the four sum axioms structural.
struct HnfSum {
  std::vector<HnfSummand> summands;

  void canonicalize() {
    std::sort(summands.begin(), summands.end());
    summands.erase(std::unique(summands.begin(), summands.end()), summands.end());
  }
  friend bool operator==(const HnfSum& a, const HnfSum& b) { return a.summands == b.summands; }
};

inline Term summand_term(const HnfSummand& s) {
  return mk_update(Term::data_const(s.after),
                   mk_check(Term::data_const(s.before), mk_prefix(s.action, s.cont)));
}

inline Term hnf_term(const HnfSum& h) {
  if (h.summands.empty()) return mk_zero();
  Term out = summand_term(h.summands.back());
  for (size_t i = h.summands.size() - 1; i-- > 0;)
    out = mk_plus(summand_term(h.summands[i]), out);
  return out;
}

namespace detail {

inline std::optional<HnfSummand> summand_of(const Term& t) {
  if (!t.is_app() || t.head != kUpdateOp || t.args.size() != 2) return std::nullopt;
  const Term& after = t.args[0];
  const Term& chk = t.args[1];
  if (after.is_var() || after.sort != Sort::Data) return std::nullopt;
  if (!chk.is_app() || chk.head != kCheckOp || chk.args.size() != 2) return std::nullopt;
  const Term& before = chk.args[0];
  const Term& pfx = chk.args[1];
  if (before.is_var() || before.sort != Sort::Data) return std::nullopt;
  if (!pfx.is_prefix()) return std::nullopt;
  return HnfSummand{after.head, before.head, pfx.prefix_label(), pfx.args[0]};
}

}  // namespace detail

// Shape test for head normal forms: 0, or a +-combination whose leaves are
// all update(d', check(d, l.t)) summands.
inline bool is_hnf(const Term& t) {
  if (t.is_app() && t.head == kZeroOp && t.args.empty()) return true;
  std::function<bool(const Term&)> leaves = [&](const Term& u) -> bool {
    if (u.is_plus()) return leaves(u.args[0]) && leaves(u.args[1]);
    return detail::summand_of(u).has_value();
  };
  return leaves(t);
}

inline HnfSum hnf_from_term(const Term& t) {
  HnfSum out;
  if (t.is_app() && t.head == kZeroOp && t.args.empty()) return out;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    if (u.is_plus()) {
      walk(u.args[0]);
      walk(u.args[1]);
      return;
    }
    auto s = detail::summand_of(u);
    if (!s) throw SpecError("not in head normal form: " + to_string(u));
    out.summands.push_back(*s);
  };
  walk(t);
  out.canonicalize();
  return out;
}

enum class CcMode { Corrected, Literal };

// The axiom system over the core signature. The double-check axiom is
// emitted as check(d, check(d, x)) = check(d, x); the published variant
// with bare x on the right is available behind CcMode::Literal, and is
// unsound for carriers of size >= 2 (the double filter cannot restore
// moves from other store values).
inline std::vector<Equation> axioms_ebccspd(const Signature& sig,
                                            CcMode mode = CcMode::Corrected) {
  Term xP = Term::var("xP", Sort::Process);
  Term yP = Term::var("yP", Sort::Process);
  Term zP = Term::var("zP", Sort::Process);
  Term xD = Term::var("xD", Sort::Data);
  Term yD = Term::var("yD", Sort::Data);

  std::vector<Equation> out;
  out.push_back({mk_plus(xP, yP), mk_plus(yP, xP), "(n-comm)"});
  out.push_back({mk_plus(xP, mk_plus(yP, zP)), mk_plus(mk_plus(xP, yP), zP), "(n-assoc)"});
  out.push_back({mk_plus(xP, xP), xP, "(n-idem)"});
  out.push_back({mk_plus(xP, mk_zero()), xP, "(n-zero)"});
  out.push_back({mk_check(xD, mk_plus(xP, yP)), mk_plus(mk_check(xD, xP), mk_check(xD, yP)),
                 "(nc)"});
  out.push_back({mk_update(xD, mk_plus(xP, yP)), mk_plus(mk_update(xD, xP), mk_update(xD, yP)),
                 "(nu)"});
  out.push_back({mk_check(xD, mk_update(yD, xP)), mk_update(yD, mk_check(xD, xP)), "(cu)"});
  out.push_back({mk_update(xD, mk_update(yD, xP)), mk_update(xD, xP), "(uu)"});
  for (const Term& d : enumerate_closed_data(sig)) {
    Term lhs = mk_check(d, mk_check(d, xP));
    Term rhs = mode == CcMode::Corrected ? mk_check(d, xP) : xP;
    out.push_back({lhs, rhs, "(cc) d=" + d.head});
  }
  for (const Term& d : enumerate_closed_data(sig))
    for (const Term& e : enumerate_closed_data(sig)) {
      if (d == e) continue;
      out.push_back({mk_check(d, mk_check(e, xP)), mk_zero(),
                     "(cc') d=" + d.head + " d'=" + e.head});
    }
  for (const std::string& l : sig.labels) {
    HnfSum sum;
    for (const Term& d : enumerate_closed_data(sig))
      sum.summands.push_back({d.head, d.head, l, xP});
    // declaration order, as the sum is written; no canonicalization here
    out.push_back({mk_prefix(l, xP), hnf_term(sum), "(lc) l=" + l});
  }
  return out;
}

struct TraceStep {
  std::string axiom;
  Term lhs;
  Term rhs;
};

// Head normalization by structural recursion on the head symbol; each case
// applies the axioms the corresponding proof step uses. Terminates because
// every recursive call descends into a proper subterm.
inline HnfSum normalize_hnf(const Signature& sig, const Term& p,
                            std::vector<TraceStep>* trace = nullptr) {
  if (!is_closed(p)) throw NotHeadNormalizable("cannot normalize open term: " + to_string(p));
  if (!is_core_term(p))
    throw NotHeadNormalizable("foreign operator in " + to_string(p) +
                              "; expand it with the axiom schema first");

  std::function<HnfSum(const Term&)> go = [&](const Term& t) -> HnfSum {
    HnfSum out;
    if (t.head == kZeroOp) return out;
    if (t.is_prefix()) {
      for (const Term& d : enumerate_closed_data(sig))
        out.summands.push_back({d.head, d.head, t.prefix_label(), t.args[0]});
      out.canonicalize();
      if (trace) trace->push_back({"(lc)", t, hnf_term(out)});
      return out;
    }
    if (t.head == kCheckOp) {
      const std::string& d = t.args[0].head;
      HnfSum inner = go(t.args[1]);
      for (const HnfSummand& s : inner.summands)
        if (s.before == d) out.summands.push_back(s);
      out.canonicalize();
      if (trace) trace->push_back({"(nc),(cu),(cc),(cc')", mk_check(t.args[0], hnf_term(inner)),
                                   hnf_term(out)});
      return out;
    }
    if (t.head == kUpdateOp) {
      const std::string& d = t.args[0].head;
      HnfSum inner = go(t.args[1]);
      for (const HnfSummand& s : inner.summands)
        out.summands.push_back({d, s.before, s.action, s.cont});
      out.canonicalize();
      if (trace) trace->push_back({"(nu),(uu)", mk_update(t.args[0], hnf_term(inner)),
                                   hnf_term(out)});
      return out;
    }
    // t = t0 + t1
    HnfSum left = go(t.args[0]);
    HnfSum right = go(t.args[1]);
    out.summands = left.summands;
    out.summands.insert(out.summands.end(), right.summands.begin(), right.summands.end());
    size_t before_merge = out.summands.size();
    out.canonicalize();
    if (trace && (out.summands.size() != before_merge))
      trace->push_back({"(n-comm),(n-assoc),(n-idem),(n-zero)", t, hnf_term(out)});
    return out;
  };
  return go(p);
}

// The height of a term already in h.n.f. shape, as used by the
// ground-completeness induction.
inline size_t height(const Term& p) {
  if (p.is_app() && p.head == kZeroOp && p.args.empty()) return 0;
  if (p.is_plus()) return 1 + std::max(height(p.args[0]), height(p.args[1]));
  if (auto s = detail::summand_of(p)) return 1 + height(s->cont);
  throw SpecError("height is defined on h.n.f.-shaped terms only: " + to_string(p));
}

// Decides E |- p = q for closed core terms: normalize both sides and match
// summands recursively. By soundness and ground-completeness this coincides
// with strong bisimilarity, which the test suite checks against the
// independent partition-refinement route.
inline bool prove_equal(const Signature& sig, const Term& p, const Term& q,
                        std::vector<TraceStep>* trace = nullptr) {
  HnfSum hp = normalize_hnf(sig, p, trace);
  HnfSum hq = normalize_hnf(sig, q, trace);
  if (trace) {
    trace->push_back({"h.n.f. of lhs", p, hnf_term(hp)});
    trace->push_back({"h.n.f. of rhs", q, hnf_term(hq)});
  }

  std::function<bool(const Term&, const Term&)> equal = [&](const Term& a,
                                                            const Term& b) -> bool {
    HnfSum ha = normalize_hnf(sig, a);
    HnfSum hb = normalize_hnf(sig, b);
    auto covered = [&](const HnfSum& x, const HnfSum& y) {
      for (const HnfSummand& s : x.summands) {
        bool hit = false;
        for (const HnfSummand& t : y.summands) {
          if (s.after == t.after && s.before == t.before && s.action == t.action &&
              equal(s.cont, t.cont)) {
            hit = true;
            break;
          }
        }
        if (!hit) return false;
      }
      return true;
    };
    return covered(ha, hb) && covered(hb, ha);
  };

  bool ok = equal(hnf_term(hp), hnf_term(hq));
  if (trace) trace->push_back({ok ? "sides equal" : "sides differ", hnf_term(hp), hnf_term(hq)});
  return ok;
}

// Premise satisfaction for one argument position: every premise of `rule`
// that tests argument k must have a matching summand in p_k. Returns the
// chosen witness continuation per premise-target variable (first matching
// summand in canonical order), or nullopt.
inline std::optional<std::map<std::string, Term>> check_tick(const HnfSum& p_k, size_t k,
                                                             const CurriedRule& rule) {
  std::map<std::string, Term> witnesses;
  for (const CurriedPremise& pr : rule.premises) {
    if (!pr.source.is_var() || !rule.src.args[k].is_var() ||
        pr.source.head != rule.src.args[k].head)
      continue;
    if (pr.label.before.is_var() || pr.label.after.is_var())
      throw SpecError("check_tick expects a closed-label rule");
    bool hit = false;
    for (const HnfSummand& s : p_k.summands) {
      if (s.before == pr.label.before.head && s.action == pr.label.action &&
          s.after == pr.label.after.head) {
        witnesses[pr.target.head] = s.cont;
        hit = true;
        break;
      }
    }
    if (!hit) return std::nullopt;
  }
  return witnesses;
}

// Canonical renaming for alpha-comparison of rules.
namespace detail {

inline std::string rule_canonical_string(const CurriedRule& r) {
  std::map<std::string, std::string> names;
  size_t np = 0, nd = 0;
  std::function<Term(const Term&)> rn = [&](const Term& t) -> Term {
    if (t.is_var()) {
      auto it = names.find(t.head);
      if (it == names.end()) {
        std::string fresh = (t.sort == Sort::Process ? "P" : "D") +
                            std::to_string(t.sort == Sort::Process ? ++np : ++nd);
        it = names.emplace(t.head, fresh).first;
      }
      return Term::var(it->second, t.sort);
    }
    Term out = t;
    for (Term& a : out.args) a = rn(a);
    return out;
  };
  std::string s = to_string(rn(r.src)) + " -(" + to_string(rn(r.label.before)) + "," +
                  r.label.action + "," + to_string(rn(r.label.after)) + ")-> " +
                  to_string(rn(r.tgt));
  for (const CurriedPremise& pr : r.premises)
    s += " | " + to_string(rn(pr.source)) + " -(" + to_string(rn(pr.label.before)) + "," +
         pr.label.action + "," + to_string(rn(pr.label.after)) + ")-> " + to_string(rn(pr.target));
  for (const SideCondition& c : r.conditions) {
    s += " where " + c.pred + "(";
    for (const Term& a : c.args) s += to_string(rn(a));
    s += ")";
  }
  return s;
}

}  // namespace detail

// The curried core calculus itself: prefix, choice, check and update rules
// per label. `with_merge` adds the interleaving merge operator, the stock
// example of a disjoint extension.
inline SpecFile bccspd_spec(const std::vector<std::string>& labels,
                            const std::vector<std::string>& carrier, bool with_merge = false) {
  SpecFile spec;
  spec.flavor = RuleFlavor::Curried;
  spec.sig.data_constants = carrier;
  spec.sig.labels = labels;
  spec.sig.process_ops = {{kZeroOp, {}},
                          {kPlusOp, {Sort::Process, Sort::Process}},
                          {kCheckOp, {Sort::Data, Sort::Process}},
                          {kUpdateOp, {Sort::Data, Sort::Process}}};
  if (with_merge) spec.sig.process_ops.push_back({"merge", {Sort::Process, Sort::Process}});

  Term xP = Term::var("xP", Sort::Process);
  Term yP = Term::var("yP", Sort::Process);
  Term x1 = Term::var("x1", Sort::Process);
  Term y1 = Term::var("y1", Sort::Process);
  Term xD = Term::var("xD", Sort::Data);
  Term xD1 = Term::var("xD1", Sort::Data);
  Term yD = Term::var("yD", Sort::Data);

  for (const std::string& l : labels)
    spec.curried_rules.push_back(
        {"prefix_" + l, {}, mk_prefix(l, xP), {xD, l, xD}, xP, {}});
  for (const std::string& l : labels) {
    spec.curried_rules.push_back({"choice_l_" + l,
                                  {{xP, {xD, l, xD1}, x1}},
                                  mk_plus(xP, yP),
                                  {xD, l, xD1},
                                  x1,
                                  {}});
    spec.curried_rules.push_back({"choice_r_" + l,
                                  {{yP, {xD, l, xD1}, y1}},
                                  mk_plus(xP, yP),
                                  {xD, l, xD1},
                                  y1,
                                  {}});
  }
  for (const std::string& l : labels)
    spec.curried_rules.push_back({"check_" + l,
                                  {{xP, {xD, l, xD1}, x1}},
                                  mk_check(xD, xP),
                                  {xD, l, xD1},
                                  x1,
                                  {}});
  for (const std::string& l : labels)
    spec.curried_rules.push_back({"update_" + l,
                                  {{xP, {xD, l, xD1}, x1}},
                                  mk_update(yD, xP),
                                  {xD, l, yD},
                                  x1,
                                  {}});
  if (with_merge) {
    for (const std::string& l : labels) {
      spec.curried_rules.push_back({"merge_l_" + l,
                                    {{xP, {xD, l, xD1}, x1}},
                                    Term::app("merge", {xP, yP}),
                                    {xD, l, xD1},
                                    Term::app("merge", {x1, yP}),
                                    {}});
      spec.curried_rules.push_back({"merge_r_" + l,
                                    {{yP, {xD, l, xD1}, y1}},
                                    Term::app("merge", {xP, yP}),
                                    {xD, l, xD1},
                                    Term::app("merge", {xP, y1}),
                                    {}});
    }
  }
  return spec;
}

// Disjoint extension of the core: the core operators are declared, all core
// rules are present (up to renaming of variables), and no further rule
// defines a core operator.
inline void require_disjoint_core_extension(const SpecFile& curried) {
  if (curried.flavor != RuleFlavor::Curried)
    throw SpecError("axiom schema expects a curried specification");
  for (const char* op : {kZeroOp, kPlusOp, kCheckOp, kUpdateOp})
    if (!curried.sig.find_op(op))
      throw SpecError(std::string("core operator missing from signature: ") + op);

  SpecFile core = bccspd_spec(curried.sig.labels, curried.sig.data_constants);
  std::set<std::string> expected;
  for (const CurriedRule& r : core.curried_rules)
    expected.insert(detail::rule_canonical_string(r));

  std::set<std::string> found;
  for (const CurriedRule& r : curried.curried_rules) {
    bool core_defining =
        r.src.is_app() && (r.src.is_prefix() || r.src.head == kZeroOp || r.src.head == kPlusOp ||
                           r.src.head == kCheckOp || r.src.head == kUpdateOp);
    if (!core_defining) continue;
    std::string canon = detail::rule_canonical_string(r);
    if (!expected.count(canon))
      throw SpecError("rule " + r.name + " redefines a core operator");
    found.insert(canon);
  }
  if (found.size() != expected.size())
    throw SpecError("specification does not contain all core rules");
}

// One instance of the axiom schema: expand f applied to a vector of head
// normal forms into the sum of the closed rule instances whose premises the
// arguments satisfy. Every target variable is instantiated with its chosen
// witness continuation, so the right-hand side is again in h.n.f.
inline Equation gsos_axiom_instance(const SpecFile& curried, const std::string& f,
                                    const std::vector<HnfSum>& args) {
  require_disjoint_core_extension(curried);
  ValidationReport v = validate_gsos_with_data(curried);
  if (!v.ok())
    throw SpecError("specification is not positive GSOS with data: " + v.issues[0].rule + ": " +
                    v.issues[0].reason);
  const OpDecl* op = curried.sig.find_op(f);
  if (!op) throw SpecError("unknown operator: " + f);
  if (op->arg_sorts.size() != args.size())
    throw SpecError("arity mismatch for " + f);
  for (Sort s : op->arg_sorts)
    if (s != Sort::Process)
      throw SpecError("axiom schema handles process arguments only");

  std::vector<Term> arg_terms;
  for (const HnfSum& a : args) arg_terms.push_back(hnf_term(a));
  Term lhs = Term::app(f, arg_terms);

  HnfSum rhs;
  std::vector<std::string> used_rules;
  for (const CurriedRule& inst : close_labels_for_op(curried, f)) {
    Substitution base;
    for (size_t i = 0; i < inst.src.args.size(); ++i)
      base[inst.src.args[i].head] = arg_terms[i];

    bool tick = true;
    for (size_t k = 0; k < args.size() && tick; ++k)
      tick = check_tick(args[k], k, inst).has_value();
    if (!tick) continue;

    // One summand per witness assignment: an argument may discharge a
    // premise with several summands whose continuations differ, and each
    // choice is a transition of f(args) the right-hand side must match.
    std::vector<std::vector<std::pair<std::string, Term>>> choices;
    for (const CurriedPremise& pr : inst.premises) {
      size_t k = 0;
      for (size_t i = 0; i < inst.src.args.size(); ++i)
        if (inst.src.args[i].is_var() && inst.src.args[i].head == pr.source.head) k = i;
      std::vector<std::pair<std::string, Term>> alts;
      for (const HnfSummand& s : args[k].summands)
        if (s.before == pr.label.before.head && s.action == pr.label.action &&
            s.after == pr.label.after.head)
          alts.push_back({pr.target.head, s.cont});
      choices.push_back(std::move(alts));
    }
    std::function<void(size_t, Substitution)> expand = [&](size_t i, Substitution sigma) {
      if (i == choices.size()) {
        rhs.summands.push_back({inst.label.after.head, inst.label.before.head,
                                inst.label.action, apply_subst(sigma, inst.tgt)});
        return;
      }
      for (const auto& [var, cont] : choices[i]) {
        Substitution next = sigma;
        next[var] = cont;
        expand(i + 1, next);
      }
    };
    expand(0, base);
    used_rules.push_back(inst.name);
  }
  rhs.canonicalize();

  std::string why = "schema(" + f + ")";
  for (const std::string& r : used_rules) why += " " + r;
  return {lhs, hnf_term(rhs), why};
}

}  // namespace sosd
