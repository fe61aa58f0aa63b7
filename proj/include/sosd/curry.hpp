#pragma once

// Currying: move the data component of configurations into triple labels,
// and close the resulting rules over the finite data carrier.

#include <functional>
#include <string>
#include <vector>

#include "sosd/rules.hpp"
#include "sosd/term.hpp"

namespace sosd {

// (t_P, t_D) -l-> (t_P', t_D') premises become t_P -(t_D,l,t_D')-> t_P';
// the process skeleton is untouched.
inline CurriedRule curry_rule(const RuleWithData& rule) {
  CurriedRule out;
  out.name = rule.name;
  for (const DataPremise& pr : rule.premises)
    out.premises.push_back({pr.source, {pr.source_data, pr.action, pr.target_data}, pr.target});
  out.src = rule.src;
  out.label = {rule.src_data, rule.action, rule.tgt_data};
  out.tgt = rule.tgt;
  out.conditions = rule.conditions;
  return out;
}

inline SpecFile curry_spec(const SpecFile& spec) {
  if (spec.flavor == RuleFlavor::Curried) return spec;
  SpecFile out;
  out.sig = spec.sig;
  out.flavor = RuleFlavor::Curried;
  out.defs = spec.defs;
  for (const RuleWithData& r : spec.data_rules) out.curried_rules.push_back(curry_rule(r));
  return out;
}

namespace detail {

inline void collect_rule_data_vars(const CurriedRule& rule, std::vector<Term>& vars) {
  auto take = [&vars](const Term& t) {
    std::vector<Term> vs;
    collect_vars(t, vs);
    for (const Term& v : vs)
      if (v.sort == Sort::Data) collect_vars(v, vars);
  };
  take(rule.src);
  take(rule.label.before);
  take(rule.label.after);
  for (const CurriedPremise& pr : rule.premises) {
    take(pr.source);
    take(pr.label.before);
    take(pr.label.after);
    take(pr.target);
  }
  take(rule.tgt);
  for (const SideCondition& c : rule.conditions)
    for (const Term& a : c.args) take(a);
}

inline bool conditions_hold(const Signature& sig, const std::vector<SideCondition>& conds,
                            const Substitution& subst) {
  for (const SideCondition& c : conds) {
    for (const Term& a : c.args) {
      Term ground = apply_subst(subst, a);
      if (!is_closed(ground)) throw SpecError("side condition argument not closed: " + to_string(a));
      if (!sig.pred_holds(c.pred, ground.head)) return false;
    }
  }
  return true;
}

}  // namespace detail

// Enumerates all assignments of the rule's data variables to carrier
// constants, in carrier declaration order, invoking `fn` for each
// assignment that satisfies the side conditions.
inline void for_each_data_closure(const Signature& sig, const CurriedRule& rule,
                                  const std::function<void(const Substitution&)>& fn) {
  std::vector<Term> vars;
  detail::collect_rule_data_vars(rule, vars);
  std::vector<Term> carrier = enumerate_closed_data(sig);
  Substitution subst;
  std::function<void(size_t)> go = [&](size_t i) {
    if (i == vars.size()) {
      if (detail::conditions_hold(sig, rule.conditions, subst)) fn(subst);
      return;
    }
    for (const Term& d : carrier) {
      subst[vars[i].head] = d;
      go(i + 1);
    }
    subst.erase(vars[i].head);
  };
  go(0);
}

inline CurriedRule instantiate_rule(const CurriedRule& rule, const Substitution& xi) {
  CurriedRule out;
  out.name = rule.name;
  for (const CurriedPremise& pr : rule.premises)
    out.premises.push_back({apply_subst(xi, pr.source),
                            {apply_subst(xi, pr.label.before), pr.label.action,
                             apply_subst(xi, pr.label.after)},
                            apply_subst(xi, pr.target)});
  out.src = apply_subst(xi, rule.src);
  out.label = {apply_subst(xi, rule.label.before), rule.label.action,
               apply_subst(xi, rule.label.after)};
  out.tgt = apply_subst(xi, rule.tgt);
  // side conditions were decided at closure time
  return out;
}

// The materialized closed-label rule set cl(R^c): one instance per data
// substitution into the carrier that passes the side conditions. The step
// engine generates these lazily; this explicit form exists for audit
// output and for the axiom schema, and both views must agree.
inline std::vector<CurriedRule> close_labels(const SpecFile& curried) {
  if (curried.flavor != RuleFlavor::Curried)
    throw SpecError("close_labels expects a curried specification");
  std::vector<CurriedRule> out;
  for (const CurriedRule& rule : curried.curried_rules) {
    for_each_data_closure(curried.sig, rule, [&](const Substitution& xi) {
      CurriedRule inst = instantiate_rule(rule, xi);
      // double underscore: carrier names may contain single underscores
      std::string suffix;
      for (const auto& [name, value] : xi) suffix += "__" + value.head;
      if (!xi.empty()) inst.name += suffix;
      out.push_back(std::move(inst));
    });
  }
  return out;
}

// Closed-label instances of one operation's defining rules, for the axiom
// schema.
inline std::vector<CurriedRule> close_labels_for_op(const SpecFile& curried,
                                                    const std::string& op) {
  std::vector<CurriedRule> out;
  for (const CurriedRule& rule : curried.curried_rules) {
    if (rule.src.is_var() || rule.src.head != op) continue;
    for_each_data_closure(curried.sig, rule, [&](const Substitution& xi) {
      out.push_back(instantiate_rule(rule, xi));
    });
  }
  return out;
}

}  // namespace sosd
