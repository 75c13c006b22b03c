#pragma once

#include <filesystem>
#include <string>

#include "bcamo/bench.hpp"

#ifndef BCAMO_BENCH_DIR
#error "BCAMO_BENCH_DIR must point at the benchmarks directory"
#endif

namespace bcamo::test {

inline std::filesystem::path bench_path(const std::string& name) {
  return std::filesystem::path(BCAMO_BENCH_DIR) / (name + ".bench");
}

inline Netlist load(const std::string& name) { return read_bench_file(bench_path(name)); }

}  // namespace bcamo::test

#include <deque>
#include <vector>

#include "bcamo/camo.hpp"
#include "bcamo/simulate.hpp"

namespace bcamo::test {

/// True when the graph holding every real edge plus every candidate edge of
/// `c` at once is acyclic.
inline bool all_candidates_acyclic(const CamoNetlist& c) {
  const Netlist& n = c.base;
  std::vector<std::vector<GateId>> succ(n.num_gates());
  std::vector<unsigned> indeg(n.num_gates(), 0);
  auto edge = [&](NetId from, GateId to) {
    const GateId d = n.net(from).driver;
    if (d == kNone) return;
    succ[d].push_back(to);
    ++indeg[to];
  };
  for (GateId g = 0; g < n.num_gates(); ++g) {
    for (NetId in : n.gate(g).inputs()) edge(in, g);
  }
  for (const PinChoice& pc : c.pin_choices) {
    for (const Candidate& cand : pc.candidates) edge(cand.net, pc.gate);
  }
  std::deque<GateId> ready;
  for (GateId g = 0; g < n.num_gates(); ++g) {
    if (indeg[g] == 0) ready.push_back(g);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    GateId g = ready.front();
    ready.pop_front();
    ++seen;
    for (GateId s : succ[g]) {
      if (--indeg[s] == 0) ready.push_back(s);
    }
  }
  return seen == n.num_gates();
}

/// Equivalence as used throughout the tests: exhaustive up to 20 inputs,
/// otherwise 10^4 random patterns.
inline bool same_function(const Netlist& a, const Netlist& b, std::uint64_t seed = 1) {
  return equivalent_auto(a, b, 10000, seed).equal;
}

}  // namespace bcamo::test
