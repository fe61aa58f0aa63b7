#include <doctest.h>

#include "sosd/bisim.hpp"
#include "sosd/linda.hpp"
#include "sosd/step.hpp"

using namespace sosd;

namespace {

Term dc(const std::string& n) { return Term::data_const(n); }

}  // namespace

TEST_CASE("generator output sizes") {
  SUBCASE("single tuple") {
    SpecFile spec = linda::linda_tss({"u"});
    CHECK(spec.data_rules.size() == 15);
    CHECK(spec.sig.data_constants == std::vector<std::string>{"o", "u"});
    std::vector<std::string> names = spec.rule_names();
    CHECK(names.front() == "r1");
    CHECK(names.back() == "r15");

    // five atomic process families and three composition operators
    size_t atoms = 0, compositions = 0;
    for (const OpDecl& op : spec.sig.process_ops) {
      if (op.name == kSinkOp) continue;
      if (op.arg_sorts.empty() || op.arg_sorts == std::vector<Sort>{Sort::Data}) ++atoms;
      if (op.arg_sorts == std::vector<Sort>{Sort::Process, Sort::Process}) ++compositions;
    }
    CHECK(atoms == 5);
    CHECK(compositions == 3);
  }

  SUBCASE("two tuples") {
    SpecFile spec = linda::linda_tss({"u", "v"});
    CHECK(spec.sig.data_constants == std::vector<std::string>{"o", "u", "v", "u_v"});
    CHECK(validate_gsos_with_data(spec).ok());
  }

  SUBCASE("alphabet validation") {
    CHECK_THROWS_AS(linda::linda_tss(std::vector<std::string>{}), SpecError);
    CHECK_THROWS_AS(linda::linda_tss({"u", "u"}), SpecError);
    CHECK_THROWS_AS(linda::linda_tss({"o"}), SpecError);
    CHECK_THROWS_AS(linda::linda_tss({"a_b"}), SpecError);
    CHECK_THROWS_AS(linda::linda_tss({"tau"}), SpecError);
  }
}

TEST_CASE("store membership drives the atoms") {
  SpecFile spec = linda::linda_tss({"u", "v"});
  Term ask_u = Term::app("ask", {dc("u")});
  Term nask_u = Term::app("nask", {dc("u")});
  Term get_u = Term::app("get", {dc("u")});

  for (const Term& d : enumerate_closed_data(spec.sig)) {
    bool has_u = d.head == "u" || d.head == "u_v";
    CHECK(step(spec, ask_u, d).empty() == !has_u);
    CHECK(step(spec, get_u, d).empty() == !has_u);
    CHECK(step(spec, nask_u, d).empty() == has_u);
  }
}

TEST_CASE("bounded multiset store mode") {
  SpecFile spec = linda::linda_tss({"u"}, 2);
  CHECK(spec.sig.data_constants == std::vector<std::string>{"o", "u", "u_u"});

  Term tell_u = Term::app("tell", {dc("u")});
  Term get_u = Term::app("get", {dc("u")});

  auto tells = step(spec, tell_u, dc("u"));
  REQUIRE(tells.size() == 1);
  CHECK(tells[0].data_after.head == "u_u");

  // insertion beyond the cap makes the rule inapplicable
  CHECK(step(spec, tell_u, dc("u_u")).empty());

  auto gets = step(spec, get_u, dc("u_u"));
  REQUIRE(gets.size() == 1);
  CHECK(gets[0].data_after.head == "u");

  // multiplicities distinguish stores that the set mode identifies
  Term two_tells = Term::app("seq", {tell_u, tell_u});
  SpecFile sets = linda::linda_tss({"u"});
  CHECK(stateless_bisim_direct(sets, two_tells, Term::app("seq", {tell_u, Term::app("ask", {dc("u")})})) ==
        false);
  CHECK(validate_gsos_with_data(spec).ok());
}

TEST_CASE("pinned algebraic-property instances") {
  SpecFile spec = linda::linda_tss({"u", "v"});
  Term ask_u = Term::app("ask", {dc("u")});
  Term tell_u = Term::app("tell", {dc("u")});
  Term tell_v = Term::app("tell", {dc("v")});
  Term get_u = Term::app("get", {dc("u")});
  Term ask_v = Term::app("ask", {dc("v")});
  auto seq = [](Term a, Term b) { return Term::app("seq", {std::move(a), std::move(b)}); };
  auto par = [](Term a, Term b) { return Term::app("par", {std::move(a), std::move(b)}); };
  auto alt = [](Term a, Term b) { return Term::app("plus", {std::move(a), std::move(b)}); };

  // idempotence instance
  CHECK(stateless_bisim_direct(spec, alt(tell_u, tell_u), tell_u));
  CHECK(stateless_via_curry(spec, alt(tell_u, tell_u), tell_u));

  // distributivity instance, standard reading (x + y) ; z = (x ; z) + (y ; z)
  Term lhs = seq(alt(ask_u, tell_v), get_u);
  Term rhs = alt(seq(ask_u, get_u), seq(tell_v, get_u));
  CHECK(stateless_bisim_direct(spec, lhs, rhs));
  CHECK(stateless_via_curry(spec, lhs, rhs));

  // associativity of parallel composition on three one-step processes
  Term p3l = par(tell_u, par(get_u, ask_v));
  Term p3r = par(par(tell_u, get_u), ask_v);
  CHECK(stateless_bisim_direct(spec, p3l, p3r));
  CHECK(stateless_via_curry(spec, p3l, p3r));
}

TEST_CASE("regression suite at smoke scale") {
  linda::SuiteReport report = linda::linda_regression_suite({{"u", "v"}, 0}, 6, 77);
  REQUIRE(report.rows.size() == 6);
  for (const linda::SuiteRow& row : report.rows) {
    CHECK_MESSAGE(row.passed == row.samples, row.property, " failed: ",
                  row.failures.empty() ? "" : row.failures.front());
  }
  CHECK(report.comm_plus_par_pass);
  CHECK(report.comm_seq_fails);
  CHECK(report.comm_seq_missing_rule == "r10");
  CHECK(report.all_pass);
}
