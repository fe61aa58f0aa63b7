#pragma once

// The bundled case study: a tuple-space coordination language with
// ask/nask/tell/get primitives over a shared store, nondeterministic
// choice, sequential and parallel composition, and a termination predicate
// encoded as a `term`-labelled transition to the reserved SINK process.
//
// The store is realized as the powerset of a finite tuple alphabet (the
// union with a singleton is then closed over the carrier); a bounded
// multiset mode is available for sensitivity checks, where an insertion
// beyond the multiplicity cap makes the rule inapplicable.

#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sosd/bisim.hpp"
#include "sosd/comm_form.hpp"
#include "sosd/curry.hpp"
#include "sosd/rules.hpp"
#include "sosd/term.hpp"

namespace sosd {
namespace linda {

// A store value: multiplicity per tuple, aligned with the alphabet.
using Counts = std::vector<int>;

inline std::string store_name(const std::vector<std::string>& alphabet, const Counts& c) {
  std::string out;
  for (size_t i = 0; i < alphabet.size(); ++i)
    for (int k = 0; k < c[i]; ++k) out += (out.empty() ? "" : "_") + alphabet[i];
  return out.empty() ? "o" : out;
}

// All store values with multiplicities in [0, cap], counting with the first
// tuple least significant; cap 1 with idempotent insertion is the set mode.
inline std::vector<Counts> enumerate_stores(size_t alphabet_size, int cap) {
  std::vector<Counts> out;
  Counts c(alphabet_size, 0);
  while (true) {
    out.push_back(c);
    size_t i = 0;
    while (i < alphabet_size && c[i] == cap) c[i++] = 0;
    if (i == alphabet_size) break;
    ++c[i];
  }
  return out;
}

struct LindaOptions {
  std::vector<std::string> alphabet;
  int multiset_cap = 0;  // 0: powerset-of-alphabet store; B>=1: multiset with cap B
};

inline void validate_alphabet(const std::vector<std::string>& alphabet) {
  if (alphabet.empty()) throw SpecError("empty tuple alphabet");
  static const std::set<std::string> reserved = {"o",    "tau",  "term", "eps",  "ask", "nask",
                                                 "tell", "get",  "plus", "seq",  "par", "SINK",
                                                 "where", "sorts", "data", "labels", "ops",
                                                 "pred", "rule", "def"};
  std::set<std::string> seen;
  for (const std::string& t : alphabet) {
    if (t.empty()) throw SpecError("empty tuple name");
    for (char c : t)
      if (!std::isalnum(static_cast<unsigned char>(c)))
        throw SpecError("tuple names must be alphanumeric: " + t);
    if (reserved.count(t)) throw SpecError("tuple name is reserved: " + t);
    if (!seen.insert(t).second) throw SpecError("duplicate tuple: " + t);
  }
}

// The 15 transition rules over {eps, ask, nask, tell, get, plus, seq, par}.
// ask and nask keep the store variable and carry a membership side
// condition; tell and get are pre-evaluated into the carrier, grouped into
// a single rule when the store image is constant.
inline SpecFile linda_tss(const LindaOptions& opt) {
  validate_alphabet(opt.alphabet);
  const std::vector<std::string>& alpha = opt.alphabet;
  int cap = opt.multiset_cap > 0 ? opt.multiset_cap : 1;
  bool sets = opt.multiset_cap == 0;

  SpecFile spec;
  spec.flavor = RuleFlavor::WithData;
  Signature& sig = spec.sig;

  std::vector<Counts> stores = enumerate_stores(alpha.size(), cap);
  for (const Counts& c : stores) sig.data_constants.push_back(store_name(alpha, c));
  sig.labels = {"tau", kTermAction};
  sig.process_ops = {{"eps", {}},
                     {"ask", {Sort::Data}},
                     {"nask", {Sort::Data}},
                     {"tell", {Sort::Data}},
                     {"get", {Sort::Data}},
                     {"plus", {Sort::Process, Sort::Process}},
                     {"seq", {Sort::Process, Sort::Process}},
                     {"par", {Sort::Process, Sort::Process}},
                     {kSinkOp, {}}};

  for (size_t i = 0; i < alpha.size(); ++i) {
    PredDecl has{"has_" + alpha[i], {}};
    PredDecl no{"no_" + alpha[i], {}};
    for (const Counts& c : stores)
      (c[i] > 0 ? has : no).table.push_back(store_name(alpha, c));
    sig.predicates.push_back(std::move(has));
    sig.predicates.push_back(std::move(no));
  }

  Term xP = Term::var("xP", Sort::Process);
  Term yP = Term::var("yP", Sort::Process);
  Term x1 = Term::var("x1", Sort::Process);
  Term y1 = Term::var("y1", Sort::Process);
  Term z1 = Term::var("z1", Sort::Process);
  Term z2 = Term::var("z2", Sort::Process);
  Term xD = Term::var("xD", Sort::Data);
  Term xD1 = Term::var("xD1", Sort::Data);
  Term w1 = Term::var("w1", Sort::Data);
  Term w2 = Term::var("w2", Sort::Data);
  Term eps = Term::app("eps", {});
  Term sink = Term::app(kSinkOp, {});

  auto atom = [](const char* op, const std::string& tuple) {
    return Term::app(op, {Term::data_const(tuple)});
  };

  // (1) the terminating process
  spec.data_rules.push_back({"r1", {}, eps, xD, kTermAction, sink, xD});

  for (size_t i = 0; i < alpha.size(); ++i) {
    const std::string& t = alpha[i];

    // (2) ask: store must contain the tuple, store unchanged
    spec.data_rules.push_back(
        {"r2_" + t, {}, atom("ask", t), xD, "tau", eps, xD,
         {{"has_" + t, {xD}}}});

    // (3) tell: insert the tuple; inapplicable above the multiplicity cap
    struct Ground {
      Counts from, to;
    };
    std::vector<Ground> tells;
    for (const Counts& c : stores) {
      Counts to = c;
      if (sets)
        to[i] = 1;
      else if (c[i] == cap)
        continue;  // insertion beyond the cap
      else
        ++to[i];
      tells.push_back({c, to});
    }
    bool constant_image =
        tells.size() == stores.size() &&
        std::all_of(tells.begin(), tells.end(),
                    [&](const Ground& g) { return g.to == tells.front().to; });
    if (constant_image) {
      spec.data_rules.push_back({"r3_" + t, {}, atom("tell", t), xD, "tau", eps,
                                 Term::data_const(store_name(alpha, tells.front().to))});
    } else {
      for (const Ground& g : tells)
        spec.data_rules.push_back({"r3_" + t + "_" + store_name(alpha, g.from),
                                   {},
                                   atom("tell", t),
                                   Term::data_const(store_name(alpha, g.from)),
                                   "tau",
                                   eps,
                                   Term::data_const(store_name(alpha, g.to))});
    }

    // (4) get: remove one occurrence
    std::vector<Ground> gets;
    for (const Counts& c : stores) {
      if (c[i] == 0) continue;
      Counts to = c;
      --to[i];
      gets.push_back({c, to});
    }
    for (const Ground& g : gets) {
      std::string name = gets.size() == 1 ? "r4_" + t : "r4_" + t + "_" + store_name(alpha, g.from);
      spec.data_rules.push_back({name,
                                 {},
                                 atom("get", t),
                                 Term::data_const(store_name(alpha, g.from)),
                                 "tau",
                                 eps,
                                 Term::data_const(store_name(alpha, g.to))});
    }

    // (5) nask: store must not contain the tuple
    spec.data_rules.push_back(
        {"r5_" + t, {}, atom("nask", t), xD, "tau", eps, xD,
         {{"no_" + t, {xD}}}});
  }

  Term plus_xy = Term::app("plus", {xP, yP});
  Term seq_xy = Term::app("seq", {xP, yP});
  Term par_xy = Term::app("par", {xP, yP});

  // (6)/(7) choice terminates when either side does
  spec.data_rules.push_back(
      {"r6", {{xP, xD, kTermAction, z1, w1}}, plus_xy, xD, kTermAction, sink, xD});
  spec.data_rules.push_back(
      {"r7", {{yP, xD, kTermAction, z1, w1}}, plus_xy, xD, kTermAction, sink, xD});
  // (8)/(9) choice steps
  spec.data_rules.push_back({"r8", {{xP, xD, "tau", x1, xD1}}, plus_xy, xD, "tau", x1, xD1});
  spec.data_rules.push_back({"r9", {{yP, xD, "tau", y1, xD1}}, plus_xy, xD, "tau", y1, xD1});
  // (10)-(12) sequencing
  spec.data_rules.push_back({"r10",
                             {{xP, xD, "tau", x1, xD1}},
                             seq_xy,
                             xD,
                             "tau",
                             Term::app("seq", {x1, yP}),
                             xD1});
  spec.data_rules.push_back({"r11",
                             {{xP, xD, kTermAction, z1, w1}, {yP, xD, "tau", y1, xD1}},
                             seq_xy,
                             xD,
                             "tau",
                             y1,
                             xD1});
  spec.data_rules.push_back({"r12",
                             {{xP, xD, kTermAction, z1, w1}, {yP, xD, kTermAction, z2, w2}},
                             seq_xy,
                             xD,
                             kTermAction,
                             sink,
                             xD});
  // (13)-(15) parallel composition
  spec.data_rules.push_back({"r13",
                             {{xP, xD, "tau", x1, xD1}},
                             par_xy,
                             xD,
                             "tau",
                             Term::app("par", {x1, yP}),
                             xD1});
  spec.data_rules.push_back({"r14",
                             {{yP, xD, "tau", y1, xD1}},
                             par_xy,
                             xD,
                             "tau",
                             Term::app("par", {xP, y1}),
                             xD1});
  spec.data_rules.push_back({"r15",
                             {{xP, xD, kTermAction, z1, w1}, {yP, xD, kTermAction, z2, w2}},
                             par_xy,
                             xD,
                             kTermAction,
                             sink,
                             xD});
  return spec;
}

inline SpecFile linda_tss(const std::vector<std::string>& alphabet, int multiset_cap = 0) {
  return linda_tss(LindaOptions{alphabet, multiset_cap});
}

// Deterministic generator for closed process terms, used by the regression
// suite and the acceptance checks. Only mt19937 outputs are consumed, so
// sequences are identical across platforms.
struct TermGen {
  std::mt19937 rng;
  std::vector<std::string> alphabet;

  TermGen(uint32_t seed, std::vector<std::string> alpha)
      : rng(seed), alphabet(std::move(alpha)) {}

  size_t pick(size_t n) { return static_cast<size_t>(rng() % n); }

  Term atom() {
    switch (pick(5)) {
      case 0: return Term::app("eps", {});
      case 1: return Term::app("ask", {Term::data_const(alphabet[pick(alphabet.size())])});
      case 2: return Term::app("nask", {Term::data_const(alphabet[pick(alphabet.size())])});
      case 3: return Term::app("tell", {Term::data_const(alphabet[pick(alphabet.size())])});
      default: return Term::app("get", {Term::data_const(alphabet[pick(alphabet.size())])});
    }
  }

  Term gen(size_t depth) {
    if (depth == 0 || pick(3) == 0) return atom();
    static const char* ops[] = {"plus", "seq", "par"};
    const char* op = ops[pick(3)];
    return Term::app(op, {gen(depth - 1), gen(depth - 1)});
  }
};

struct SuiteRow {
  std::string property;
  std::string equation;
  size_t samples = 0;
  size_t passed = 0;
  std::vector<std::string> failures;  // printed instance pairs
};

struct SuiteReport {
  std::vector<SuiteRow> rows;
  bool comm_plus_par_pass = false;
  bool comm_seq_fails = false;
  std::string comm_seq_missing_rule;
  bool all_pass = false;
};

// The algebraic-property regression suite: every table row is checked on
// random closed instantiations through both bisimilarity routes.
inline SuiteReport linda_regression_suite(const LindaOptions& opt, size_t samples,
                                          uint32_t seed = 20240601,
                                          const ExploreBounds& bounds = {}) {
  if (opt.alphabet.size() > 2)
    throw SpecError("the regression suite runs at desk scale: alphabet of size at most 2");
  SpecFile spec = linda_tss(opt);
  SpecFile curried = curry_spec(spec);
  TermGen gen(seed, opt.alphabet);

  auto seq = [](Term a, Term b) { return Term::app("seq", {std::move(a), std::move(b)}); };
  auto par = [](Term a, Term b) { return Term::app("par", {std::move(a), std::move(b)}); };
  auto alt = [](Term a, Term b) { return Term::app("plus", {std::move(a), std::move(b)}); };
  Term eps = Term::app("eps", {});

  struct RowSpec {
    std::string name;
    std::string equation;
    size_t vars;
    std::function<std::pair<Term, Term>(const std::vector<Term>&)> make;
  };
  std::vector<RowSpec> rowspecs = {
      {"associativity of seq", "seq(x, seq(y, z)) = seq(seq(x, y), z)", 3,
       [&](const std::vector<Term>& v) {
         return std::make_pair(seq(v[0], seq(v[1], v[2])), seq(seq(v[0], v[1]), v[2]));
       }},
      {"associativity of plus", "x + (y + z) = (x + y) + z", 3,
       [&](const std::vector<Term>& v) {
         return std::make_pair(alt(v[0], alt(v[1], v[2])), alt(alt(v[0], v[1]), v[2]));
       }},
      {"associativity of par", "par(x, par(y, z)) = par(par(x, y), z)", 3,
       [&](const std::vector<Term>& v) {
         return std::make_pair(par(v[0], par(v[1], v[2])), par(par(v[0], v[1]), v[2]));
       }},
      {"idempotence of plus", "x + x = x", 1,
       [&](const std::vector<Term>& v) { return std::make_pair(alt(v[0], v[0]), v[0]); }},
      {"unit of seq", "seq(eps, x) = x", 1,
       [&](const std::vector<Term>& v) { return std::make_pair(seq(eps, v[0]), v[0]); }},
      {"distributivity of plus over seq", "seq(x + y, z) = seq(x, z) + seq(y, z)", 3,
       [&](const std::vector<Term>& v) {
         return std::make_pair(seq(alt(v[0], v[1]), v[2]), alt(seq(v[0], v[2]), seq(v[1], v[2])));
       }},
  };

  SuiteReport report;
  for (const RowSpec& rs : rowspecs) {
    SuiteRow row;
    row.property = rs.name;
    row.equation = rs.equation;
    row.samples = samples;
    for (size_t i = 0; i < samples; ++i) {
      std::vector<Term> vars;
      for (size_t k = 0; k < rs.vars; ++k) vars.push_back(gen.gen(2));
      auto [lhs, rhs] = rs.make(vars);
      bool direct = stateless_bisim_direct(spec, lhs, rhs, bounds);
      bool curried_route = stateless_via_curry(spec, lhs, rhs, bounds);
      if (direct && curried_route)
        ++row.passed;
      else
        row.failures.push_back(to_string(lhs) + "  vs  " + to_string(rhs) +
                               (direct != curried_route ? "  (routes disagree)" : ""));
    }
    report.rows.push_back(std::move(row));
  }

  CommReport comm = check_comm_form(curried, {"plus", "par"});
  report.comm_plus_par_pass = comm.pass;
  CommReport seq_comm = check_comm_form(curried, {"seq"});
  report.comm_seq_fails = !seq_comm.pass;
  for (const CommOpResult& r : seq_comm.per_op)
    for (const RuleIssue& i : r.issues)
      if (report.comm_seq_missing_rule.empty()) report.comm_seq_missing_rule = i.rule;

  report.all_pass = report.comm_plus_par_pass && report.comm_seq_fails;
  for (const SuiteRow& r : report.rows)
    if (r.passed != r.samples) report.all_pass = false;
  return report;
}

}  // namespace linda
}  // namespace sosd
