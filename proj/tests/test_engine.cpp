#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "sosd/bisim.hpp"
#include "sosd/curry.hpp"
#include "sosd/linda.hpp"
#include "sosd/axioms.hpp"
#include "sosd/rules.hpp"
#include "sosd/step.hpp"

using namespace sosd;

namespace {

Term dc(const std::string& name) { return Term::data_const(name); }
Term pv(const std::string& name) { return Term::var(name, Sort::Process); }
Term dv(const std::string& name) { return Term::var(name, Sort::Data); }

std::set<std::tuple<std::string, std::string, std::string>> as_triples(
    const std::vector<StepTransition>& ts) {
  std::set<std::tuple<std::string, std::string, std::string>> out;
  for (const StepTransition& t : ts) out.insert({t.action, t.data_after.head, to_string(t.target)});
  return out;
}

}  // namespace

TEST_CASE("gsos validation accepts the case study in both flavors") {
  SpecFile spec = linda::linda_tss({"u", "v"});
  CHECK(validate_gsos_with_data(spec).ok());
  CHECK(validate_gsos_with_data(curry_spec(spec)).ok());
}

TEST_CASE("gsos validation rejects malformed rules") {
  SpecFile spec = linda::linda_tss({"u"});

  SUBCASE("premise testing a non-argument variable") {
    RuleWithData bad;
    bad.name = "bad";
    bad.src = Term::app("plus", {pv("xP"), pv("yP")});
    bad.src_data = dv("xD");
    bad.action = "tau";
    bad.tgt = pv("x1");
    bad.tgt_data = dv("xD");
    // the premise source is a target variable, not an argument
    bad.premises = {{pv("x1"), dv("xD"), "tau", pv("x2"), dv("xD1")}};
    spec.data_rules.push_back(bad);
    ValidationReport r = validate_gsos_with_data(spec);
    REQUIRE_FALSE(r.ok());
    CHECK(r.issues[0].reason.find("premise tests non-argument") != std::string::npos);
  }

  SUBCASE("duplicate target variable") {
    RuleWithData bad;
    bad.name = "bad";
    bad.src = Term::app("plus", {pv("xP"), pv("yP")});
    bad.src_data = dv("xD");
    bad.action = "tau";
    bad.tgt = pv("y1");
    bad.tgt_data = dv("xD");
    bad.premises = {{pv("xP"), dv("xD"), "tau", pv("y1"), dv("w1")},
                    {pv("yP"), dv("xD"), "tau", pv("y1"), dv("w2")}};
    spec.data_rules.push_back(bad);
    ValidationReport r = validate_gsos_with_data(spec);
    REQUIRE_FALSE(r.ok());
    bool found = false;
    for (const RuleIssue& i : r.issues)
      if (i.reason.find("duplicate target variable") != std::string::npos) found = true;
    CHECK(found);
  }

  SUBCASE("unbound variable in conclusion target") {
    RuleWithData bad;
    bad.name = "bad";
    bad.src = Term::app("plus", {pv("xP"), pv("yP")});
    bad.src_data = dv("xD");
    bad.action = "tau";
    bad.tgt = pv("ghost");
    bad.tgt_data = dv("xD");
    spec.data_rules.push_back(bad);
    CHECK_FALSE(validate_gsos_with_data(spec).ok());
  }
}

TEST_CASE("one-step transitions of the case study") {
  SpecFile spec = linda::linda_tss({"u", "v"});

  SUBCASE("tell inserts into the store") {
    auto got = as_triples(step(spec, Term::app("tell", {dc("u")}), dc("o")));
    CHECK(got == decltype(got){{"tau", "u", "eps"}});
  }

  SUBCASE("nask is blocked when the tuple is present") {
    CHECK(step(spec, Term::app("nask", {dc("u")}), dc("u")).empty());
    CHECK(step(spec, Term::app("nask", {dc("u")}), dc("u_v")).empty());
  }

  SUBCASE("choice collects both branches") {
    Term t = Term::app("plus", {Term::app("ask", {dc("u")}), Term::app("tell", {dc("v")})});
    auto got = as_triples(step(spec, t, dc("u")));
    CHECK(got == decltype(got){{"tau", "u", "eps"}, {"tau", "u_v", "eps"}});
  }

  SUBCASE("termination is a term-labelled move to the sink") {
    for (const Term& d : enumerate_closed_data(spec.sig)) {
      auto got = as_triples(step(spec, Term::app("eps", {}), d));
      CHECK(got == decltype(got){{"term", d.head, "SINK"}});
    }
  }

  SUBCASE("data constant outside the carrier is a domain error") {
    CHECK_THROWS_AS(step(spec, Term::app("eps", {}), dc("zzz")), SpecError);
  }

  SUBCASE("determinism") {
    Term t = Term::app("par", {Term::app("tell", {dc("u")}), Term::app("get", {dc("u")})});
    CHECK(step(spec, t, dc("u")) == step(spec, t, dc("u")));
  }
}

TEST_CASE("engine agrees with the hand-coded interpreter") {
  std::vector<std::string> alphabet = {"u", "v"};
  SpecFile spec = linda::linda_tss(alphabet);
  SpecFile curried = curry_spec(spec);
  std::vector<oracles::Store> stores = {{}, {"u"}, {"v"}, {"u", "v"}};

  linda::TermGen gen(11, alphabet);
  StepCache scache;
  CurriedStepCache ccache;
  for (int i = 0; i < 120; ++i) {
    Term t = gen.gen(2);
    std::set<std::tuple<std::string, std::string, std::string, std::string>> curried_got;
    for (const CurriedTransition& tr : curried_step(curried, t, &ccache))
      curried_got.insert({tr.label.before, tr.label.action, tr.label.after, to_string(tr.target)});

    std::set<std::tuple<std::string, std::string, std::string, std::string>> engine_got, oracle_got;
    for (const oracles::Store& s : stores) {
      std::string before = oracles::store_key(alphabet, s);
      for (const StepTransition& tr : step(spec, t, dc(before), &scache))
        engine_got.insert({before, tr.action, tr.data_after.head, to_string(tr.target)});
      for (const auto& [a, s2, t2] : oracles::linda_oracle_step(t, s))
        oracle_got.insert({before, a, oracles::store_key(alphabet, s2), to_string(t2)});
    }
    REQUIRE(engine_got == oracle_got);   // engine vs independent interpreter
    REQUIRE(curried_got == oracle_got);  // curried route vs independent interpreter
  }
}

TEST_CASE("premise evaluation order does not matter") {
  SpecFile spec = linda::linda_tss({"u", "v"});
  SpecFile shuffled = spec;
  for (RuleWithData& r : shuffled.data_rules) std::reverse(r.premises.begin(), r.premises.end());
  REQUIRE(validate_gsos_with_data(shuffled).ok());

  linda::TermGen gen(23, spec.sig.data_constants);  // reuse carrier names as dummy; terms below
  linda::TermGen tgen(23, std::vector<std::string>{"u", "v"});
  for (int i = 0; i < 60; ++i) {
    Term t = tgen.gen(2);
    for (const Term& d : enumerate_closed_data(spec.sig))
      CHECK(step(spec, t, d) == step(shuffled, t, d));
  }
}

TEST_CASE("finite branching bound") {
  SpecFile spec = linda::linda_tss({"u", "v"});
  linda::TermGen gen(5, std::vector<std::string>{"u", "v"});
  size_t carrier = spec.sig.data_constants.size();
  for (int i = 0; i < 40; ++i) {
    Term t = gen.gen(2);
    for (const Term& d : enumerate_closed_data(spec.sig)) {
      auto res = step(spec, t, d);
      CHECK(res.size() <= spec.data_rules.size() * carrier * term_size(t));
    }
  }
}

TEST_CASE("bounded exploration") {
  SpecFile bccspd = bccspd_spec({"a"}, {"d0", "d1"});
  Term zero = Term::app("0", {});
  Term a0 = mk_prefix("a", zero);

  SUBCASE("deadlocked root") {
    Lts lts = build_lts(bccspd, {zero});
    CHECK(lts.states.size() == 1);
    CHECK(lts.edges.empty());
    CHECK_FALSE(lts.truncated);
  }

  SUBCASE("prefix over a two-constant carrier") {
    Lts lts = build_lts(bccspd, {a0});
    REQUIRE(lts.states.size() == 2);
    CHECK(to_string(lts.states[0]) == "0");
    CHECK(to_string(lts.states[1]) == "a.0");
    REQUIRE(lts.edges.size() == 2);
    CHECK(lts.edges[0].label.str() == "(d0,a,d0)");
    CHECK(lts.edges[1].label.str() == "(d1,a,d1)");
    CHECK(lts.edges[0].src == 1);
    CHECK(lts.edges[0].dst == 0);
  }

  SUBCASE("termination edges of the terminating process") {
    SpecFile spec = linda::linda_tss({"u"});
    Lts lts = build_lts(spec, {Term::app("eps", {})});
    REQUIRE(lts.states.size() == 2);  // eps and SINK
    REQUIRE(lts.edges.size() == 2);   // one per carrier constant
    for (const LtsEdge& e : lts.edges) {
      CHECK(e.label.action == "term");
      CHECK(e.label.before == e.label.after);
      CHECK(to_string(lts.states[e.dst]) == "SINK");
    }
  }

  SUBCASE("truncation is flagged and bisimilarity refuses to conclude") {
    Lts lts = build_lts(bccspd, {a0}, {1, 1000});
    CHECK(lts.truncated);
    CHECK_THROWS_AS(strong_bisim(bccspd, a0, zero, {1, 1000}), InconclusiveError);
  }

  SUBCASE("result does not depend on exploration order") {
    SpecFile spec = linda::linda_tss({"u", "v"});
    Term p = Term::app("par", {Term::app("tell", {dc("u")}), Term::app("get", {dc("u")})});
    Term q = Term::app("seq", {Term::app("ask", {dc("v")}), Term::app("nask", {dc("v")})});
    Lts forward = build_lts(spec, {p, q});
    Lts backward = build_lts(spec, {q, p});
    CHECK(forward.states == backward.states);
    CHECK(forward.edges == backward.edges);
    CHECK(forward.roots == backward.roots);
  }

  SUBCASE("every edge is reproducible by step on its source") {
    SpecFile spec = linda::linda_tss({"u", "v"});
    Term root = Term::app(
        "seq", {Term::app("tell", {dc("u")}),
                Term::app("par", {Term::app("get", {dc("u")}), Term::app("ask", {dc("u")})})});
    Lts lts = build_lts(spec, {root});
    CHECK(lts.edges.size() > 4);
    for (const LtsEdge& e : lts.edges) {
      auto moves = step(spec, lts.states[e.src], dc(e.label.before));
      bool found = false;
      for (const StepTransition& m : moves)
        found |= m.action == e.label.action && m.data_after.head == e.label.after &&
                 m.target == lts.states[e.dst];
      CHECK(found);
    }
  }
}
