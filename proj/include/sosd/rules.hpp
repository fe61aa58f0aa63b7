#pragma once

// Transition rules in the two flavors handled by the workbench: rules over
// (process, data) configurations and curried rules with triple labels. Also
// the positive-GSOS-with-data validator both flavors share.

#include <set>
#include <string>
#include <vector>

#include "sosd/term.hpp"

namespace sosd {

struct SideCondition {
  std::string pred;
  std::vector<Term> args;  // flat data terms
};

// Premise (source, source_data) -action-> (target, target_data).
struct DataPremise {
  Term source;
  Term source_data;
  std::string action;
  Term target;  // a fresh process variable
  Term target_data;
};

struct RuleWithData {
  std::string name;
  std::vector<DataPremise> premises;
  Term src;
  Term src_data;
  std::string action;
  Term tgt;
  Term tgt_data;
  std::vector<SideCondition> conditions;
};

// Label triple (data-before, action, data-after); open form used in rules.
struct LabelTriple {
  Term before;
  std::string action;
  Term after;
};

struct CurriedPremise {
  Term source;
  LabelTriple label;
  Term target;
};

struct CurriedRule {
  std::string name;
  std::vector<CurriedPremise> premises;
  Term src;
  LabelTriple label;
  Term tgt;
  std::vector<SideCondition> conditions;
};

// Ground label triple as it appears on LTS edges.
struct CurriedLabel {
  std::string before;
  std::string action;
  std::string after;

  friend bool operator==(const CurriedLabel& a, const CurriedLabel& b) {
    return a.before == b.before && a.action == b.action && a.after == b.after;
  }
  friend bool operator<(const CurriedLabel& a, const CurriedLabel& b) {
    if (a.before != b.before) return a.before < b.before;
    if (a.action != b.action) return a.action < b.action;
    return a.after < b.after;
  }
  std::string str() const { return "(" + before + "," + action + "," + after + ")"; }
};

enum class RuleFlavor { WithData, Curried };

// A parsed or generated specification: signature, rules of one flavor, and
// optional named term definitions for CLI convenience.
struct SpecFile {
  Signature sig;
  RuleFlavor flavor = RuleFlavor::WithData;
  std::vector<RuleWithData> data_rules;
  std::vector<CurriedRule> curried_rules;
  std::vector<std::pair<std::string, Term>> defs;

  size_t rule_count() const {
    return flavor == RuleFlavor::WithData ? data_rules.size() : curried_rules.size();
  }
  std::vector<std::string> rule_names() const {
    std::vector<std::string> out;
    if (flavor == RuleFlavor::WithData)
      for (const auto& r : data_rules) out.push_back(r.name);
    else
      for (const auto& r : curried_rules) out.push_back(r.name);
    return out;
  }
};

struct RuleIssue {
  std::string rule;
  std::string reason;
};

struct ValidationReport {
  std::vector<RuleIssue> issues;
  bool ok() const { return issues.empty(); }
};

namespace detail {

inline bool is_flat_data(const Term& t) {
  return t.sort == Sort::Data && (t.is_var() || t.args.empty());
}

// Shared GSOS shape checks, phrased on the decomposed rule parts.
struct GsosChecker {
  const Signature& sig;
  ValidationReport& report;
  const std::string& rule;

  std::vector<std::string> source_process_vars;  // the x_i of process sort
  std::vector<std::string> source_all_vars;
  std::vector<std::string> target_vars;  // the y_ij

  void issue(const std::string& reason) { report.issues.push_back({rule, reason}); }

  bool check_conclusion_source(const Term& src) {
    if (src.is_var()) {
      issue("conclusion source must be an operator application");
      return false;
    }
    const OpDecl* op = sig.find_op(src.head);
    if (!op && !src.is_prefix()) {
      issue("conclusion source uses unknown operator " + src.head);
      return false;
    }
    std::set<std::string> seen;
    for (const Term& a : src.args) {
      // Process arguments must be distinct variables. Data arguments may
      // also be carrier constants: closed-label instances and the atoms of
      // the case study pin the store value in the source.
      if (!a.is_var()) {
        if (a.sort == Sort::Data && a.args.empty() && sig.has_data_constant(a.head)) continue;
        issue("conclusion source argument is not a variable: " + to_string(a));
        return false;
      }
      if (!seen.insert(a.head).second) {
        issue("repeated variable in conclusion source: " + a.head);
        return false;
      }
      source_all_vars.push_back(a.head);
      if (a.sort == Sort::Process) source_process_vars.push_back(a.head);
    }
    return true;
  }

  void check_premise_source(const Term& source) {
    if (!source.is_var() || source.sort != Sort::Process ||
        std::find(source_process_vars.begin(), source_process_vars.end(), source.head) ==
            source_process_vars.end())
      issue("premise tests non-argument: " + to_string(source));
  }

  void check_premise_target(const Term& target) {
    if (!target.is_var() || target.sort != Sort::Process) {
      issue("premise target must be a process variable: " + to_string(target));
      return;
    }
    if (std::find(source_all_vars.begin(), source_all_vars.end(), target.head) !=
        source_all_vars.end()) {
      issue("premise target shadows a source argument: " + target.head);
      return;
    }
    if (std::find(target_vars.begin(), target_vars.end(), target.head) != target_vars.end()) {
      issue("duplicate target variable: " + target.head);
      return;
    }
    target_vars.push_back(target.head);
  }

  void check_conclusion_target(const Term& tgt) {
    std::vector<Term> vars;
    collect_vars(tgt, vars);
    for (const Term& v : vars) {
      if (v.sort == Sort::Data) continue;  // data variables are closed by label closure
      bool known =
          std::find(source_process_vars.begin(), source_process_vars.end(), v.head) !=
              source_process_vars.end() ||
          std::find(target_vars.begin(), target_vars.end(), v.head) != target_vars.end();
      if (!known) issue("conclusion target uses unbound process variable " + v.head);
    }
  }

  void check_action(const std::string& action) {
    if (!sig.has_label(action)) issue("unknown label: " + action);
  }

  void check_data_term(const Term& t, const char* where) {
    if (!is_flat_data(t)) {
      issue(std::string(where) + " data term must be flat: " + to_string(t));
      return;
    }
    if (t.is_app() && !sig.has_data_constant(t.head))
      issue(std::string(where) + " uses unknown data constant " + t.head);
  }

  void check_conditions(const std::vector<SideCondition>& conds) {
    for (const SideCondition& c : conds) {
      if (!sig.find_pred(c.pred)) {
        issue("unknown predicate: " + c.pred);
        continue;
      }
      if (c.args.size() != 1) issue("predicate " + c.pred + " expects one data argument");
      for (const Term& a : c.args) check_data_term(a, "side condition");
    }
  }

  // Open terms appear in rules, so sort/arity checking must tolerate
  // variables anywhere a subterm is allowed.
  void check_shape(const Term& t) {
    if (t.is_var()) return;
    if (t.sort == Sort::Data) {
      if (!detail::is_flat_data(t) || (t.is_app() && !sig.has_data_constant(t.head)))
        issue("ill-formed data term: " + to_string(t));
      return;
    }
    if (t.is_prefix()) {
      if (!sig.has_label(t.prefix_label())) issue("unknown label: " + t.prefix_label());
      if (t.args.size() == 1)
        check_shape(t.args[0]);
      else
        issue("prefix takes one argument");
      return;
    }
    const OpDecl* op = sig.find_op(t.head);
    if (!op) {
      issue("unknown operator: " + t.head);
      return;
    }
    if (op->arg_sorts.size() != t.args.size()) {
      issue("arity mismatch for " + t.head);
      return;
    }
    for (size_t i = 0; i < t.args.size(); ++i) {
      if (t.args[i].sort != op->arg_sorts[i])
        issue("sort mismatch in argument " + std::to_string(i + 1) + " of " + t.head);
      check_shape(t.args[i]);
    }
  }
};

}  // namespace detail

// Positive GSOS with data: conclusion source f(x1,...,xn) with pairwise
// distinct variables, premises testing only the process arguments, pairwise
// distinct fresh premise targets, and a conclusion target built from the
// x_i, y_ij and data variables. The same shape applies to curried rules.
inline ValidationReport validate_gsos_with_data(const SpecFile& spec) {
  ValidationReport report;
  std::set<std::string> names;
  auto check_name = [&](const std::string& n) {
    if (!names.insert(n).second) report.issues.push_back({n, "duplicate rule name"});
  };

  if (spec.flavor == RuleFlavor::WithData) {
    for (const RuleWithData& r : spec.data_rules) {
      check_name(r.name);
      detail::GsosChecker ck{spec.sig, report, r.name, {}, {}, {}};
      if (!ck.check_conclusion_source(r.src)) continue;
      ck.check_data_term(r.src_data, "conclusion source");
      ck.check_action(r.action);
      for (const DataPremise& pr : r.premises) {
        ck.check_premise_source(pr.source);
        ck.check_data_term(pr.source_data, "premise source");
        ck.check_action(pr.action);
        ck.check_premise_target(pr.target);
        ck.check_data_term(pr.target_data, "premise target");
      }
      ck.check_conclusion_target(r.tgt);
      ck.check_shape(r.tgt);
      ck.check_data_term(r.tgt_data, "conclusion target");
      ck.check_conditions(r.conditions);
    }
  } else {
    for (const CurriedRule& r : spec.curried_rules) {
      check_name(r.name);
      detail::GsosChecker ck{spec.sig, report, r.name, {}, {}, {}};
      if (!ck.check_conclusion_source(r.src)) continue;
      ck.check_data_term(r.label.before, "conclusion label");
      ck.check_data_term(r.label.after, "conclusion label");
      ck.check_action(r.label.action);
      for (const CurriedPremise& pr : r.premises) {
        ck.check_premise_source(pr.source);
        ck.check_data_term(pr.label.before, "premise label");
        ck.check_data_term(pr.label.after, "premise label");
        ck.check_action(pr.label.action);
        ck.check_premise_target(pr.target);
      }
      ck.check_conclusion_target(r.tgt);
      ck.check_shape(r.tgt);
      ck.check_conditions(r.conditions);
    }
  }
  return report;
}

}  // namespace sosd
