#pragma once

// LTS export: line-JSON (one object per edge) and Graphviz dot. Both use
// the canonical term printing and canonical edge order, so output is
// byte-stable across runs.

#include <string>

#include "sosd/step.hpp"

namespace sosd {

namespace detail {

inline std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

}  // namespace detail

inline std::string export_lts_jsonl(const Lts& lts) {
  std::string out;
  for (const LtsEdge& e : lts.edges) {
    out += "{\"src\":" + detail::json_escape(to_string(lts.states[e.src])) +
           ",\"pre\":" + detail::json_escape(e.label.before) +
           ",\"act\":" + detail::json_escape(e.label.action) +
           ",\"post\":" + detail::json_escape(e.label.after) +
           ",\"dst\":" + detail::json_escape(to_string(lts.states[e.dst])) + "}\n";
  }
  return out;
}

inline std::string export_lts_dot(const Lts& lts) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::string out = "digraph lts {\n";
  for (const Term& s : lts.states) out += "  " + quote(to_string(s)) + ";\n";
  for (const LtsEdge& e : lts.edges)
    out += "  " + quote(to_string(lts.states[e.src])) + " -> " +
           quote(to_string(lts.states[e.dst])) + " [label=" + quote(e.label.str()) + "];\n";
  out += "}\n";
  return out;
}

}  // namespace sosd
