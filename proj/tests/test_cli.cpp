#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sosd/cli.hpp"

using namespace sosd;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("exit codes: positive, negative, usage") {
  CHECK(run({"bisim", "specs/linda.sos", "--mode", "stateless", "ask(u)", "ask(u)"}).code == 0);
  CHECK(run({"bisim", "specs/linda.sos", "--mode", "stateless", "ask(u)", "tell(u)"}).code == 1);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"bisim", "specs/linda.sos", "--mode", "strong", "ask(u)", "ask(u)"}).code == 2);
  CHECK(run({"parse", "specs/no_such_file.sos"}).code == 2);
}

TEST_CASE("parse reports located errors on stderr") {
  std::ofstream("build/broken.sos") << "sorts P D\ndata { d0 }\nlabels { a }\nops { 0/0 }\n"
                                       "rule r { --- (0, xD) -zap-> (0, xD) }\n";
  RunResult r = run({"parse", "build/broken.sos"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 5") != std::string::npos);
  CHECK(r.err.find("unknown label") != std::string::npos);
}

TEST_CASE("parse emits the canonical form and a json summary") {
  RunResult r = run({"parse", "specs/linda.sos"});
  CHECK(r.code == 0);
  std::ifstream in("specs/linda.sos", std::ios::binary);
  std::stringstream want;
  want << in.rdbuf();
  CHECK(r.out == want.str());

  RunResult j = run({"parse", "specs/linda.sos", "--json"});
  CHECK(j.code == 0);
  CHECK(j.out.find("{\"ok\":true,\"flavor\":\"with-data\",\"rules\":15}") == 0);
}

TEST_CASE("curry output is round-trippable spec syntax") {
  RunResult r = run({"curry", "specs/linda.sos"});
  REQUIRE(r.code == 0);
  SpecFile curried = parse_spec(r.out);
  CHECK(curried.flavor == RuleFlavor::Curried);
  CHECK(curried.rule_count() == 15);

  RunResult closed = run({"curry", "specs/linda.sos", "--close"});
  REQUIRE(closed.code == 0);
  SpecFile materialized = parse_spec(closed.out);
  CHECK(materialized.rule_count() > 15);
}

TEST_CASE("lts export formats") {
  RunResult jsonl = run({"lts", "specs/bccspd.sos", "--root", "a.0"});
  CHECK(jsonl.code == 0);
  CHECK(jsonl.out ==
        "{\"src\":\"a.0\",\"pre\":\"d0\",\"act\":\"a\",\"post\":\"d0\",\"dst\":\"0\"}\n"
        "{\"src\":\"a.0\",\"pre\":\"d1\",\"act\":\"a\",\"post\":\"d1\",\"dst\":\"0\"}\n");

  RunResult empty = run({"lts", "specs/bccspd.sos", "--root", "0"});
  CHECK(empty.code == 0);
  CHECK(empty.out.empty());

  RunResult dot = run({"lts", "specs/bccspd.sos", "--root", "a.0", "--format", "dot"});
  CHECK(dot.code == 0);
  CHECK(dot.out.rfind("digraph lts {", 0) == 0);
  CHECK(dot.out.find("\"a.0\" -> \"0\" [label=\"(d0,a,d0)\"];") != std::string::npos);
  CHECK(dot.out.back() == '\n');
  size_t opens = std::count(dot.out.begin(), dot.out.end(), '{');
  size_t closes = std::count(dot.out.begin(), dot.out.end(), '}');
  CHECK(opens == closes);
}

TEST_CASE("byte-identical output across runs") {
  std::vector<std::string> cmd = {"lts", "specs/linda_uv.sos", "--root", "par(tell(u), get(u))"};
  CHECK(run(cmd).out == run(cmd).out);
  std::vector<std::string> suite = {"linda-suite", "--alphabet", "u", "--samples", "3"};
  CHECK(run(suite).out == run(suite).out);
}

TEST_CASE("bisim modes and the witness dump") {
  CHECK(run({"bisim", "specs/bccspd.sos", "--mode", "strong", "a.0", "a.0 + a.0"}).code == 0);
  CHECK(run({"bisim", "specs/bccspd.sos", "--mode", "strong", "check(d0, a.0)", "a.0"}).code == 1);
  CHECK(run({"bisim", "specs/linda.sos", "--mode", "stateless-curried", "seq(eps, tell(u))",
             "tell(u)"})
            .code == 0);

  RunResult w = run({"bisim", "specs/bccspd.sos", "--mode", "strong", "a.0", "a.0 + a.0",
                     "--witness"});
  CHECK(w.code == 0);
  CHECK(w.out.find("equal\n") == 0);
  CHECK(w.out.find("block 0:") != std::string::npos);

  RunResult j = run({"bisim", "specs/linda.sos", "--mode", "stateless", "ask(u)", "tell(u)",
                     "--json"});
  CHECK(j.code == 1);
  CHECK(j.out.find("\"equal\":false") != std::string::npos);
}

TEST_CASE("exploration bounds make bisim inconclusive") {
  RunResult r = run({"bisim", "specs/bccspd.sos", "--mode", "strong", "a.0", "0",
                     "--max-states", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("inconclusive") != std::string::npos);

  setenv("SOSD_MAX_STATES", "1", 1);
  RunResult env = run({"bisim", "specs/bccspd.sos", "--mode", "strong", "a.0", "0"});
  unsetenv("SOSD_MAX_STATES");
  CHECK(env.code == 2);
}

TEST_CASE("check-comm text and json reports") {
  RunResult r = run({"check-comm", "specs/linda.sos", "--ops", "plus,par"});
  CHECK(r.code == 0);
  CHECK(r.out.find("comm-form plus: pass") != std::string::npos);
  CHECK(r.out.find("rule r8 mirrored by r9") != std::string::npos);

  RunResult bad = run({"check-comm", "specs/linda.sos", "--ops", "seq", "--json"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("{\"op\":\"seq\",\"pass\":false}") == 0);
  CHECK(bad.out.find("\"rule\":\"r10\",\"reason\":\"no commutative mirror\"") !=
        std::string::npos);
}

TEST_CASE("normalize, prove, axiomatize") {
  RunResult n = run({"normalize", "specs/bccspd.sos", "a.0"});
  CHECK(n.code == 0);
  CHECK(n.out == "update(d0, check(d0, a.0)) + update(d1, check(d1, a.0))\n");

  RunResult nt = run({"normalize", "specs/bccspd.sos", "check(d0, a.0 + b.0)", "--trace"});
  CHECK(nt.code == 0);
  CHECK(nt.out.find("1. (lc)") != std::string::npos);

  CHECK(run({"normalize", "specs/bccspd_merge.sos", "merge(0, 0)"}).code == 2);

  CHECK(run({"prove", "specs/bccspd.sos", "a.0 + 0", "a.0"}).code == 0);
  CHECK(run({"prove", "specs/bccspd.sos", "a.0", "b.0"}).code == 1);

  RunResult ax = run({"axiomatize", "specs/bccspd_merge.sos", "--op", "merge", "--args",
                      "update(d1, check(d0, a.0))", "--args", "0"});
  CHECK(ax.code == 0);
  CHECK(ax.out.find("= update(d1, check(d0, a.merge(0, 0)))") != std::string::npos);

  // arguments must be in head normal form
  CHECK(run({"axiomatize", "specs/bccspd_merge.sos", "--op", "merge", "--args", "a.0",
             "--args", "0"})
            .code == 2);
}

TEST_CASE("linda-suite smoke run") {
  RunResult r = run({"linda-suite", "--alphabet", "u,v", "--samples", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("pass  idempotence of plus") != std::string::npos);
  CHECK(r.out.find("comm-form rejects seq (missing mirror: r10)") != std::string::npos);

  RunResult j = run({"linda-suite", "--alphabet", "u", "--samples", "2", "--json"});
  CHECK(j.code == 0);
  CHECK(j.out.find("\"all_pass\":true") != std::string::npos);

  RunResult cap = run({"linda-suite", "--alphabet", "u", "--samples", "2", "--multiset-cap",
                       "2"});
  CHECK(cap.code == 0);
}

TEST_CASE("help is available") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"bisim", "--help"}).code == 0);
}
