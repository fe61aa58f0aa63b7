#pragma once

// Command-line driver. Kept in a header so the test suite can run commands
// in-process; tools/sosd_main.cpp is a thin wrapper.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sosd/axioms.hpp"
#include "sosd/bisim.hpp"
#include "sosd/comm_form.hpp"
#include "sosd/curry.hpp"
#include "sosd/linda.hpp"
#include "sosd/lts_export.hpp"
#include "sosd/parser.hpp"
#include "sosd/step.hpp"

namespace sosd {
namespace cli {

using Json = nlohmann::ordered_json;

inline constexpr int kOk = 0;        // positive verdict / success
inline constexpr int kNegative = 1;  // negative verdict
inline constexpr int kUsage = 2;     // usage errors and inconclusive analyses

namespace detail {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SpecFile load_spec(const std::string& path) {
  SpecFile spec = parse_spec(slurp(path));
  ValidationReport report = validate_gsos_with_data(spec);
  if (!report.ok()) {
    std::string msg = path + ": specification is not positive GSOS with data";
    for (const RuleIssue& i : report.issues) msg += "\n  rule " + i.rule + ": " + i.reason;
    throw SpecError(msg);
  }
  return spec;
}

inline ExploreBounds bounds_from_env() {
  ExploreBounds b;
  if (const char* env = std::getenv("SOSD_MAX_STATES")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v > 0) b.max_states = v;
  }
  return b;
}

inline std::string render_trace(const std::vector<TraceStep>& trace) {
  std::string out;
  for (size_t i = 0; i < trace.size(); ++i)
    out += std::to_string(i + 1) + ". " + trace[i].axiom + "  " + to_string(trace[i].lhs) +
           "  =  " + to_string(trace[i].rhs) + "\n";
  return out;
}

}  // namespace detail

inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"semantics workbench for operational rules with a store component"};
  app.require_subcommand(1);

  ExploreBounds env_bounds = detail::bounds_from_env();

  // parse
  auto* parse_cmd = app.add_subcommand("parse", "parse and validate a .sos file");
  std::string parse_file;
  bool parse_json = false;
  parse_cmd->add_option("file", parse_file)->required();
  parse_cmd->add_flag("--json", parse_json);

  // curry
  auto* curry_cmd = app.add_subcommand("curry", "print the curried form of a spec");
  std::string curry_file;
  bool curry_close = false;
  curry_cmd->add_option("file", curry_file)->required();
  curry_cmd->add_flag("--close", curry_close, "materialize the closed-label rule instances");

  // lts
  auto* lts_cmd = app.add_subcommand("lts", "explore and export the transition system");
  std::string lts_file, lts_format = "jsonl";
  std::vector<std::string> lts_roots;
  size_t lts_max_states = 0, lts_max_edges = 0;
  lts_cmd->add_option("file", lts_file)->required();
  lts_cmd->add_option("--root", lts_roots, "root term (repeatable)")->required();
  lts_cmd->add_option("--format", lts_format)->check(CLI::IsMember({"jsonl", "dot"}));
  lts_cmd->add_option("--max-states", lts_max_states);
  lts_cmd->add_option("--max-edges", lts_max_edges);

  // bisim
  auto* bisim_cmd = app.add_subcommand("bisim", "decide bisimilarity of two closed terms");
  std::string bisim_file, bisim_mode;
  std::vector<std::string> bisim_terms;
  size_t bisim_max_states = 0;
  bool bisim_witness = false, bisim_json = false;
  bisim_cmd->add_option("file", bisim_file)->required();
  bisim_cmd->add_option("--mode", bisim_mode)
      ->required()
      ->check(CLI::IsMember({"strong", "stateless", "stateless-curried"}));
  bisim_cmd->add_option("terms", bisim_terms, "the two terms to compare")->expected(2);
  bisim_cmd->add_option("--max-states", bisim_max_states);
  bisim_cmd->add_flag("--witness", bisim_witness, "print the final partition blocks");
  bisim_cmd->add_flag("--json", bisim_json);

  // check-comm
  auto* comm_cmd = app.add_subcommand("check-comm", "check the commutativity rule format");
  std::string comm_file, comm_ops_arg;
  bool comm_json = false;
  comm_cmd->add_option("file", comm_file)->required();
  comm_cmd->add_option("--ops", comm_ops_arg, "comma-separated operator names")->required();
  comm_cmd->add_flag("--json", comm_json);

  // normalize
  auto* norm_cmd = app.add_subcommand("normalize", "head-normalize a closed core term");
  std::string norm_file, norm_term;
  bool norm_trace = false, norm_json = false;
  norm_cmd->add_option("file", norm_file)->required();
  norm_cmd->add_option("term", norm_term)->required();
  norm_cmd->add_flag("--trace", norm_trace);
  norm_cmd->add_flag("--json", norm_json);

  // prove
  auto* prove_cmd = app.add_subcommand("prove", "decide equality in the equational system");
  std::string prove_file;
  std::vector<std::string> prove_terms;
  bool prove_trace = false, prove_json = false;
  prove_cmd->add_option("file", prove_file)->required();
  prove_cmd->add_option("terms", prove_terms)->expected(2);
  prove_cmd->add_flag("--trace", prove_trace);
  prove_cmd->add_flag("--json", prove_json);

  // axiomatize
  auto* ax_cmd = app.add_subcommand("axiomatize", "expand an operator application by the schema");
  std::string ax_file, ax_op;
  std::vector<std::string> ax_args;
  bool ax_json = false;
  ax_cmd->add_option("file", ax_file)->required();
  ax_cmd->add_option("--op", ax_op)->required();
  ax_cmd->add_option("--args", ax_args, "argument terms in head normal form");
  ax_cmd->add_flag("--json", ax_json);

  // linda-suite
  auto* suite_cmd = app.add_subcommand("linda-suite", "run the algebraic-property suite");
  std::string suite_alpha = "u,v";
  size_t suite_samples = 50;
  int suite_cap = 0;
  uint32_t suite_seed = 20240601;
  bool suite_json = false;
  suite_cmd->add_option("--alphabet", suite_alpha, "comma-separated tuple names");
  suite_cmd->add_option("--samples", suite_samples);
  suite_cmd->add_option("--multiset-cap", suite_cap, "bounded-multiplicity store mode");
  suite_cmd->add_option("--seed", suite_seed);
  suite_cmd->add_flag("--json", suite_json);

  std::vector<std::string> argv = args;
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    std::stringstream capture;
    int code = app.exit(e, capture, capture);
    (code == 0 ? out : err) << capture.str();
    return code == 0 ? kOk : kUsage;
  }

  auto split_csv = [](const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        if (!cur.empty()) parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
  };

  try {
    if (parse_cmd->parsed()) {
      SpecFile spec = parse_spec(detail::slurp(parse_file));
      ValidationReport report = validate_gsos_with_data(spec);
      if (parse_json) {
        Json j{{"ok", report.ok()},
               {"flavor", spec.flavor == RuleFlavor::WithData ? "with-data" : "curried"},
               {"rules", spec.rule_count()}};
        out << j.dump() << "\n";
        for (const RuleIssue& i : report.issues)
          out << Json{{"rule", i.rule}, {"reason", i.reason}}.dump() << "\n";
      } else {
        out << print_spec(spec);
        for (const RuleIssue& i : report.issues)
          err << "rule " << i.rule << ": " << i.reason << "\n";
      }
      return report.ok() ? kOk : kUsage;
    }

    if (curry_cmd->parsed()) {
      SpecFile spec = detail::load_spec(curry_file);
      SpecFile curried = curry_spec(spec);
      if (curry_close) {
        SpecFile closed = curried;
        closed.curried_rules = close_labels(curried);
        out << print_spec(closed);
      } else {
        out << print_spec(curried);
      }
      return kOk;
    }

    if (lts_cmd->parsed()) {
      SpecFile spec = detail::load_spec(lts_file);
      ExploreBounds bounds = env_bounds;
      if (lts_max_states) bounds.max_states = lts_max_states;
      if (lts_max_edges) bounds.max_edges = lts_max_edges;
      std::vector<Term> roots;
      for (const std::string& r : lts_roots) roots.push_back(parse_closed_term(spec, r));
      Lts lts = build_lts(spec, roots, bounds);
      out << (lts_format == "dot" ? export_lts_dot(lts) : export_lts_jsonl(lts));
      if (lts.truncated) err << "warning: exploration truncated\n";
      return kOk;
    }

    if (bisim_cmd->parsed()) {
      SpecFile spec = detail::load_spec(bisim_file);
      ExploreBounds bounds = env_bounds;
      if (bisim_max_states) bounds.max_states = bisim_max_states;
      Term lhs = parse_closed_term(spec, bisim_terms[0]);
      Term rhs = parse_closed_term(spec, bisim_terms[1]);

      BisimResult res;
      if (bisim_mode == "strong") {
        if (spec.flavor != RuleFlavor::Curried)
          throw SpecError("--mode strong expects a curried specification");
        res = strong_bisim_full(spec, lhs, rhs, bounds);
      } else if (bisim_mode == "stateless") {
        if (spec.flavor != RuleFlavor::WithData)
          throw SpecError("--mode stateless expects a specification with data");
        res = stateless_bisim_direct_full(spec, lhs, rhs, bounds);
      } else {
        if (spec.flavor != RuleFlavor::WithData)
          throw SpecError("--mode stateless-curried expects a specification with data");
        res = strong_bisim_full(curry_spec(spec), lhs, rhs, bounds);
      }

      if (bisim_json) {
        out << Json{{"mode", bisim_mode},
                    {"lhs", to_string(lhs)},
                    {"rhs", to_string(rhs)},
                    {"equal", res.equal}}
                   .dump()
            << "\n";
      } else {
        out << (res.equal ? "equal" : "not-equal") << "\n";
      }
      if (bisim_witness) {
        std::vector<std::vector<std::string>> blocks(res.partition.block_count);
        for (size_t s = 0; s < res.lts.states.size(); ++s)
          blocks[res.partition.block_of[s]].push_back(to_string(res.lts.states[s]));
        for (size_t b = 0; b < blocks.size(); ++b) {
          if (bisim_json) {
            out << Json{{"block", b}, {"states", blocks[b]}}.dump() << "\n";
          } else {
            out << "block " << b << ":";
            for (const std::string& s : blocks[b]) out << " " << s;
            out << "\n";
          }
        }
      }
      return res.equal ? kOk : kNegative;
    }

    if (comm_cmd->parsed()) {
      SpecFile spec = detail::load_spec(comm_file);
      SpecFile curried = curry_spec(spec);
      std::vector<std::string> ops = split_csv(comm_ops_arg);
      if (ops.empty()) throw SpecError("--ops expects at least one operator");
      CommReport report = check_comm_form(curried, {ops.begin(), ops.end()});
      for (const CommOpResult& r : report.per_op) {
        if (comm_json) {
          out << Json{{"op", r.op}, {"pass", r.pass}}.dump() << "\n";
          for (const MirrorWitness& m : r.mirrors)
            out << Json{{"op", r.op}, {"rule", m.rule}, {"mirror", m.mirror}}.dump() << "\n";
          for (const RuleIssue& i : r.issues)
            out << Json{{"op", r.op}, {"rule", i.rule}, {"reason", i.reason}}.dump() << "\n";
        } else {
          out << "comm-form " << r.op << ": " << (r.pass ? "pass" : "fail") << "\n";
          for (const MirrorWitness& m : r.mirrors)
            out << "  rule " << m.rule << " mirrored by " << m.mirror << "\n";
          for (const RuleIssue& i : r.issues)
            out << "  rule " << i.rule << ": " << i.reason << "\n";
          if (r.pass)
            out << "  sound: " << r.op << "(x0, x1) = " << r.op << "(x1, x0)\n";
        }
      }
      return report.pass ? kOk : kNegative;
    }

    if (norm_cmd->parsed()) {
      SpecFile spec = detail::load_spec(norm_file);
      Term t = parse_closed_term(spec, norm_term);
      std::vector<TraceStep> trace;
      HnfSum h = normalize_hnf(spec.sig, t, norm_trace ? &trace : nullptr);
      if (norm_json) {
        out << Json{{"input", to_string(t)}, {"hnf", to_string(hnf_term(h))}}.dump() << "\n";
        for (const TraceStep& s : trace)
          out << Json{{"axiom", s.axiom}, {"lhs", to_string(s.lhs)}, {"rhs", to_string(s.rhs)}}
                     .dump()
              << "\n";
      } else {
        if (norm_trace) out << detail::render_trace(trace);
        out << to_string(hnf_term(h)) << "\n";
      }
      return kOk;
    }

    if (prove_cmd->parsed()) {
      SpecFile spec = detail::load_spec(prove_file);
      Term lhs = parse_closed_term(spec, prove_terms[0]);
      Term rhs = parse_closed_term(spec, prove_terms[1]);
      std::vector<TraceStep> trace;
      bool equal = prove_equal(spec.sig, lhs, rhs, prove_trace ? &trace : nullptr);
      if (prove_json) {
        out << Json{{"lhs", to_string(lhs)}, {"rhs", to_string(rhs)}, {"equal", equal}}.dump()
            << "\n";
      } else {
        if (prove_trace) out << detail::render_trace(trace);
        out << (equal ? "provably equal" : "not provably equal") << "\n";
      }
      return equal ? kOk : kNegative;
    }

    if (ax_cmd->parsed()) {
      SpecFile spec = detail::load_spec(ax_file);
      SpecFile curried = curry_spec(spec);
      std::vector<HnfSum> hnf_args;
      for (const std::string& a : ax_args)
        hnf_args.push_back(hnf_from_term(parse_closed_term(curried, a)));
      Equation eq = gsos_axiom_instance(curried, ax_op, hnf_args);
      if (ax_json) {
        out << Json{{"op", ax_op},
                    {"lhs", to_string(eq.lhs)},
                    {"rhs", to_string(eq.rhs)},
                    {"justification", eq.justification}}
                   .dump()
            << "\n";
      } else {
        out << to_string(eq.lhs) << " = " << to_string(eq.rhs) << "\n";
        out << "  by " << eq.justification << "\n";
      }
      return kOk;
    }

    if (suite_cmd->parsed()) {
      linda::LindaOptions opt{split_csv(suite_alpha), suite_cap};
      ExploreBounds bounds = env_bounds;
      linda::SuiteReport report = linda::linda_regression_suite(opt, suite_samples, suite_seed,
                                                                bounds);
      if (suite_json) {
        for (const linda::SuiteRow& r : report.rows)
          out << Json{{"property", r.property},
                      {"equation", r.equation},
                      {"samples", r.samples},
                      {"passed", r.passed}}
                     .dump()
              << "\n";
        out << Json{{"comm_form_plus_par", report.comm_plus_par_pass},
                    {"comm_form_seq_missing_mirror", report.comm_seq_missing_rule},
                    {"all_pass", report.all_pass}}
                   .dump()
            << "\n";
      } else {
        for (const linda::SuiteRow& r : report.rows) {
          out << (r.passed == r.samples ? "pass" : "FAIL") << "  " << r.property << "  ["
              << r.equation << "]  " << r.passed << "/" << r.samples << "\n";
          for (const std::string& f : r.failures) out << "    counterexample: " << f << "\n";
        }
        out << (report.comm_plus_par_pass ? "pass" : "FAIL")
            << "  comm-form for plus, par\n";
        out << (report.comm_seq_fails ? "pass" : "FAIL")
            << "  comm-form rejects seq (missing mirror: " << report.comm_seq_missing_rule
            << ")\n";
      }
      return report.all_pass ? kOk : kNegative;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InconclusiveError& e) {
    err << "inconclusive: " << e.what() << "\n";
    return kUsage;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace cli
}  // namespace sosd
