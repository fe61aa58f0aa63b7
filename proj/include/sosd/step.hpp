#pragma once

// One-step transition derivation for validated positive-GSOS specs, in both
// flavors, plus bounded breadth-first LTS exploration. Premises only test
// proper arguments, so the recursive evaluation is well-founded.

#include <deque>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sosd/curry.hpp"
#include "sosd/rules.hpp"
#include "sosd/term.hpp"

namespace sosd {

// A transition (action, data-after, target) of a configuration (p, d).
struct StepTransition {
  std::string action;
  Term data_after;
  Term target;

  friend bool operator==(const StepTransition& a, const StepTransition& b) {
    return a.action == b.action && a.data_after == b.data_after && a.target == b.target;
  }
  friend bool operator<(const StepTransition& a, const StepTransition& b) {
    if (a.action != b.action) return a.action < b.action;
    if (a.data_after != b.data_after) return a.data_after < b.data_after;
    return a.target < b.target;
  }
};

// A transition of a curried system: full triple label plus target.
struct CurriedTransition {
  CurriedLabel label;
  Term target;

  friend bool operator==(const CurriedTransition& a, const CurriedTransition& b) {
    return a.label == b.label && a.target == b.target;
  }
  friend bool operator<(const CurriedTransition& a, const CurriedTransition& b) {
    if (!(a.label == b.label)) return a.label < b.label;
    return a.target < b.target;
  }
};

using StepCache = std::map<std::string, std::vector<StepTransition>>;
using CurriedStepCache = std::map<std::string, std::vector<CurriedTransition>>;

namespace detail {

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Enumerate carrier values for any data variables of `vars` unbound in
// `subst`, then call fn on each full assignment.
inline void close_remaining(const Signature& sig, const std::vector<Term>& vars,
                            Substitution subst, const std::function<void(const Substitution&)>& fn) {
  std::vector<Term> missing;
  for (const Term& v : vars)
    if (v.sort == Sort::Data && !subst.count(v.head)) missing.push_back(v);
  std::vector<Term> carrier = enumerate_closed_data(sig);
  std::function<void(size_t)> go = [&](size_t i) {
    if (i == missing.size()) {
      fn(subst);
      return;
    }
    for (const Term& d : carrier) {
      subst[missing[i].head] = d;
      go(i + 1);
    }
    subst.erase(missing[i].head);
  };
  go(0);
}

inline std::vector<Term> rule_closure_vars(const RuleWithData& r) {
  std::vector<Term> vars;
  collect_vars(r.tgt_data, vars);
  collect_vars(r.tgt, vars);
  for (const SideCondition& c : r.conditions)
    for (const Term& a : c.args) collect_vars(a, vars);
  return vars;
}

inline std::vector<Term> rule_closure_vars(const CurriedRule& r) {
  std::vector<Term> vars;
  collect_vars(r.label.before, vars);
  collect_vars(r.label.after, vars);
  collect_vars(r.tgt, vars);
  for (const SideCondition& c : r.conditions)
    for (const Term& a : c.args) collect_vars(a, vars);
  return vars;
}

}  // namespace detail

// All one-step transitions of the configuration (p, d), canonically ordered.
inline std::vector<StepTransition> step(const SpecFile& spec, const Term& p, const Term& d,
                                        StepCache* cache = nullptr) {
  if (spec.flavor != RuleFlavor::WithData)
    throw SpecError("step expects a specification with data");
  if (!is_closed(p)) throw SpecError("step: process term must be closed");
  if (!d.is_app() || !spec.sig.has_data_constant(d.head))
    throw SpecError("data constant outside carrier: " + to_string(d));

  std::string key;
  if (cache) {
    key = to_string(p) + "\x1f" + d.head;
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
  }

  std::vector<StepTransition> out;
  for (const RuleWithData& rule : spec.data_rules) {
    Substitution seed;
    if (!match_extend(rule.src, p, seed)) continue;
    if (!match_extend(rule.src_data, d, seed)) continue;

    std::function<void(size_t, const Substitution&)> solve = [&](size_t i,
                                                                 const Substitution& subst) {
      if (i == rule.premises.size()) {
        detail::close_remaining(spec.sig, detail::rule_closure_vars(rule), subst,
                                [&](const Substitution& full) {
                                  if (!detail::conditions_hold(spec.sig, rule.conditions, full))
                                    return;
                                  out.push_back({rule.action, apply_subst(full, rule.tgt_data),
                                                 apply_subst(full, rule.tgt)});
                                });
        return;
      }
      const DataPremise& pr = rule.premises[i];
      Term sub = apply_subst(subst, pr.source);
      Term sd = apply_subst(subst, pr.source_data);
      auto attempt = [&](const Substitution& with_sd, const Term& sd_ground) {
        for (const StepTransition& tr : step(spec, sub, sd_ground, cache)) {
          if (tr.action != pr.action) continue;
          Substitution next = with_sd;
          if (!match_extend(pr.target_data, tr.data_after, next)) continue;
          if (!match_extend(pr.target, tr.target, next)) continue;
          solve(i + 1, next);
        }
      };
      if (is_closed(sd)) {
        attempt(subst, sd);
      } else {
        for (const Term& dc : enumerate_closed_data(spec.sig)) {
          Substitution with_sd = subst;
          if (match_extend(sd, dc, with_sd)) attempt(with_sd, dc);
        }
      }
    };
    solve(0, seed);
  }
  detail::sort_unique(out);
  if (cache) (*cache)[key] = out;
  return out;
}

// One-step transitions of p in the closed-label curried system. Label
// closure happens lazily here: carrier values for data variables that the
// matching leaves open are enumerated on demand, which is observably the
// same as stepping in the materialized cl(T^c).
inline std::vector<CurriedTransition> curried_step(const SpecFile& spec, const Term& p,
                                                   CurriedStepCache* cache = nullptr) {
  if (spec.flavor != RuleFlavor::Curried)
    throw SpecError("curried_step expects a curried specification");
  if (!is_closed(p)) throw SpecError("curried_step: process term must be closed");

  std::string key;
  if (cache) {
    key = to_string(p);
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
  }

  std::vector<CurriedTransition> out;
  for (const CurriedRule& rule : spec.curried_rules) {
    Substitution seed;
    if (!match_extend(rule.src, p, seed)) continue;

    std::function<void(size_t, const Substitution&)> solve = [&](size_t i,
                                                                 const Substitution& subst) {
      if (i == rule.premises.size()) {
        detail::close_remaining(spec.sig, detail::rule_closure_vars(rule), subst,
                                [&](const Substitution& full) {
                                  if (!detail::conditions_hold(spec.sig, rule.conditions, full))
                                    return;
                                  Term before = apply_subst(full, rule.label.before);
                                  Term after = apply_subst(full, rule.label.after);
                                  out.push_back({{before.head, rule.label.action, after.head},
                                                 apply_subst(full, rule.tgt)});
                                });
        return;
      }
      const CurriedPremise& pr = rule.premises[i];
      Term sub = apply_subst(subst, pr.source);
      for (const CurriedTransition& tr : curried_step(spec, sub, cache)) {
        if (tr.label.action != pr.label.action) continue;
        Substitution next = subst;
        if (!match_extend(pr.label.before, Term::data_const(tr.label.before), next)) continue;
        if (!match_extend(pr.label.after, Term::data_const(tr.label.after), next)) continue;
        if (!match_extend(pr.target, tr.target, next)) continue;
        solve(i + 1, next);
      }
    };
    solve(0, seed);
  }
  detail::sort_unique(out);
  if (cache) (*cache)[key] = out;
  return out;
}

struct LtsEdge {
  size_t src;
  CurriedLabel label;
  size_t dst;

  friend bool operator<(const LtsEdge& a, const LtsEdge& b) {
    if (a.src != b.src) return a.src < b.src;
    if (!(a.label == b.label)) return a.label < b.label;
    return a.dst < b.dst;
  }
  friend bool operator==(const LtsEdge& a, const LtsEdge& b) {
    return a.src == b.src && a.label == b.label && a.dst == b.dst;
  }
};

// Explored transition graph. States are closed process terms; edges carry
// full triple labels in both flavors (a with-data spec is explored over
// every carrier constant). States and edges are canonically sorted, so the
// result is independent of exploration order.
struct Lts {
  std::vector<Term> states;
  std::vector<LtsEdge> edges;
  std::vector<size_t> roots;
  bool truncated = false;

  size_t index_of(const Term& t) const {
    auto it = std::lower_bound(states.begin(), states.end(), t);
    if (it == states.end() || !(*it == t)) throw SpecError("state not in LTS: " + to_string(t));
    return static_cast<size_t>(it - states.begin());
  }
};

struct ExploreBounds {
  size_t max_states = 100000;
  size_t max_edges = 1000000;
};

inline Lts build_lts(const SpecFile& spec, const std::vector<Term>& roots,
                     const ExploreBounds& bounds = {}) {
  if (bounds.max_states == 0 || bounds.max_edges == 0)
    throw SpecError("exploration bounds must be positive");
  for (const Term& r : roots) {
    if (!is_closed(r)) throw SpecError("root must be closed: " + to_string(r));
    spec.sig.check_term(r);
  }

  StepCache scache;
  CurriedStepCache ccache;
  std::vector<Term> carrier = enumerate_closed_data(spec.sig);
  auto outgoing = [&](const Term& p) {
    std::vector<CurriedTransition> out;
    if (spec.flavor == RuleFlavor::Curried) {
      out = curried_step(spec, p, &ccache);
    } else {
      for (const Term& d : carrier)
        for (const StepTransition& tr : step(spec, p, d, &scache))
          out.push_back({{d.head, tr.action, tr.data_after.head}, tr.target});
      detail::sort_unique(out);
    }
    return out;
  };

  std::map<std::string, Term> seen;
  std::deque<Term> frontier;
  bool truncated = false;
  auto discover = [&](const Term& t) {
    std::string k = to_string(t);
    if (seen.count(k)) return true;
    if (seen.size() >= bounds.max_states) {
      truncated = true;
      return false;
    }
    seen.emplace(k, t);
    frontier.push_back(t);
    return true;
  };
  for (const Term& r : roots) discover(r);

  struct RawEdge {
    Term src;
    CurriedLabel label;
    Term dst;
  };
  std::vector<RawEdge> raw;
  while (!frontier.empty()) {
    Term p = frontier.front();
    frontier.pop_front();
    for (const CurriedTransition& tr : outgoing(p)) {
      if (!discover(tr.target)) continue;
      if (raw.size() >= bounds.max_edges) {
        truncated = true;
        continue;
      }
      raw.push_back({p, tr.label, tr.target});
    }
  }

  Lts lts;
  lts.truncated = truncated;
  for (const auto& [k, t] : seen) lts.states.push_back(t);
  std::sort(lts.states.begin(), lts.states.end());
  for (const RawEdge& e : raw)
    lts.edges.push_back({lts.index_of(e.src), e.label, lts.index_of(e.dst)});
  detail::sort_unique(lts.edges);
  // under truncation a root may not have fitted into the state set
  for (const Term& r : roots)
    if (seen.count(to_string(r))) lts.roots.push_back(lts.index_of(r));
  detail::sort_unique(lts.roots);
  return lts;
}

}  // namespace sosd
