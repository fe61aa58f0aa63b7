#pragma once

// Strong bisimilarity on curried systems and stateless bisimilarity on
// systems with data, decided by signature refinement over the explored
// joint LTS. The curried route and the direct route must agree on every
// input; that agreement is the executable form of the currying theorem.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sosd/curry.hpp"
#include "sosd/step.hpp"

namespace sosd {

// Raised when an LTS hit an exploration bound: the verdict would not be
// trustworthy, so no boolean is produced.
struct InconclusiveError : std::runtime_error {
  explicit InconclusiveError(const std::string& what) : std::runtime_error(what) {}
};

// Coarsest partition stable under the transition signature; two states end
// up in one block iff they are bisimilar in the explored LTS.
struct Partition {
  std::vector<size_t> block_of;  // state index -> block id
  size_t block_count = 0;

  bool same_block(size_t a, size_t b) const { return block_of[a] == block_of[b]; }
};

inline Partition refine_partition(const Lts& lts) {
  size_t n = lts.states.size();
  Partition part;
  part.block_of.assign(n, 0);
  part.block_count = n == 0 ? 0 : 1;

  // Kanellakis-Smolka style: split blocks by the set of (label, target
  // block) pairs until stable. Block ids are renumbered canonically each
  // round, so the result is deterministic.
  using Signature = std::set<std::pair<CurriedLabel, size_t>>;
  while (true) {
    std::vector<Signature> sigs(n);
    for (const LtsEdge& e : lts.edges) sigs[e.src].insert({e.label, part.block_of[e.dst]});
    std::map<std::pair<size_t, Signature>, size_t> renumber;
    std::vector<size_t> next(n);
    for (size_t s = 0; s < n; ++s) {
      auto key = std::make_pair(part.block_of[s], sigs[s]);
      auto it = renumber.find(key);
      if (it == renumber.end()) it = renumber.emplace(key, renumber.size()).first;
      next[s] = it->second;
    }
    if (renumber.size() == part.block_count) {
      part.block_of = next;
      return part;
    }
    part.block_of = next;
    part.block_count = renumber.size();
  }
}

struct BisimResult {
  bool equal = false;
  Lts lts;
  Partition partition;
};

namespace detail {

inline BisimResult decide_on_lts(Lts lts, const Term& p, const Term& q, const char* what) {
  if (lts.truncated)
    throw InconclusiveError(std::string(what) + ": exploration truncated, result inconclusive");
  BisimResult res;
  res.partition = refine_partition(lts);
  res.equal = res.partition.same_block(lts.index_of(p), lts.index_of(q));
  res.lts = std::move(lts);
  return res;
}

}  // namespace detail

// Strong bisimilarity of two closed process terms in a curried system;
// labels are compared as full (before, action, after) triples.
inline BisimResult strong_bisim_full(const SpecFile& curried, const Term& p, const Term& q,
                                     const ExploreBounds& bounds = {}) {
  if (curried.flavor != RuleFlavor::Curried)
    throw SpecError("strong_bisim expects a curried specification");
  return detail::decide_on_lts(build_lts(curried, {p, q}, bounds), p, q, "strong_bisim");
}

inline bool strong_bisim(const SpecFile& curried, const Term& p, const Term& q,
                         const ExploreBounds& bounds = {}) {
  return strong_bisim_full(curried, p, q, bounds).equal;
}

// Stateless bisimilarity decided directly on the with-data step relation:
// transfer is required for every carrier constant, which is exactly the
// joint LTS whose edges quantify the data before/after in the label.
inline BisimResult stateless_bisim_direct_full(const SpecFile& spec, const Term& p, const Term& q,
                                               const ExploreBounds& bounds = {}) {
  if (spec.flavor != RuleFlavor::WithData)
    throw SpecError("stateless_bisim_direct expects a specification with data");
  return detail::decide_on_lts(build_lts(spec, {p, q}, bounds), p, q, "stateless_bisim");
}

inline bool stateless_bisim_direct(const SpecFile& spec, const Term& p, const Term& q,
                                   const ExploreBounds& bounds = {}) {
  return stateless_bisim_direct_full(spec, p, q, bounds).equal;
}

// Stateless bisimilarity via the curried route: curry, close labels, and
// decide strong bisimilarity there.
inline bool stateless_via_curry(const SpecFile& spec, const Term& p, const Term& q,
                                const ExploreBounds& bounds = {}) {
  return strong_bisim(curry_spec(spec), p, q, bounds);
}

}  // namespace sosd
