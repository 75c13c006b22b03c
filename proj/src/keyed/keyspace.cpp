#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "bcamo/keyed.hpp"

namespace bcamo {

namespace {

struct GateOptions {
  // Per pin, the nets it may connect to; a single entry when not camouflaged.
  std::vector<std::vector<NetId>> pins;
  std::vector<TruthTable2> functions;
  unsigned bits = 0;
};

std::uint64_t count_functions(const Netlist& n, const Gate& gate, const GateOptions& opts) {
  // Symbols are the distinct non-constant nets the gate can see.
  std::vector<NetId> symbols;
  for (const auto& pin : opts.pins) {
    for (NetId net : pin) {
      if (!is_constant(n.net(net).kind) && std::find(symbols.begin(), symbols.end(), net) == symbols.end()) {
        symbols.push_back(net);
      }
    }
  }
  if (symbols.size() > 6) throw std::logic_error("too many candidate signals for one gate");
  const unsigned rows = 1u << symbols.size();
  auto value = [&](NetId net, unsigned row) {
    const NetKind kind = n.net(net).kind;
    if (is_constant(kind)) return kind == NetKind::Const1;
    const auto idx = std::find(symbols.begin(), symbols.end(), net) - symbols.begin();
    return bool((row >> idx) & 1u);
  };

  std::vector<TruthTable2> functions = opts.functions;
  if (functions.empty()) {
    functions.push_back(gate.arity() == 2 ? truth_table(gate.func)
                                          : static_cast<TruthTable2>(gate.func == GateFunc::Inv ? 0x5 : 0xA));
  }
  std::set<std::uint64_t> seen;
  std::vector<std::size_t> choice(opts.pins.size(), 0);
  while (true) {
    for (TruthTable2 tt : functions) {
      std::uint64_t table = 0;
      for (unsigned row = 0; row < rows; ++row) {
        const bool a = value(opts.pins[0][choice[0]], row);
        const bool b = opts.pins.size() > 1 ? value(opts.pins[1][choice[1]], row) : false;
        if ((tt >> (unsigned(a) + 2u * unsigned(b))) & 1u) table |= std::uint64_t{1} << row;
      }
      seen.insert(table);
    }
    std::size_t p = 0;
    while (p < choice.size() && ++choice[p] == opts.pins[p].size()) choice[p++] = 0;
    if (p == choice.size()) break;
  }
  return seen.size();
}

}  // namespace

KeySpaceStats keyspace_stats(const CamoNetlist& c) {
  const Netlist& n = c.base;
  std::map<GateId, GateOptions> gates;
  auto entry = [&](GateId g) -> GateOptions& {
    auto [it, inserted] = gates.try_emplace(g);
    if (inserted) {
      for (NetId in : n.gate(g).inputs()) it->second.pins.push_back({in});
    }
    return it->second;
  };
  KeySpaceStats stats;
  for (const PinChoice& pc : c.pin_choices) {
    GateOptions& o = entry(pc.gate);
    o.pins[pc.pin].clear();
    for (const Candidate& cand : pc.candidates) o.pins[pc.pin].push_back(cand.net);
    const unsigned bits = key_bits_for(static_cast<unsigned>(pc.candidates.size()));
    o.bits += bits;
    stats.key_width += bits;
  }
  for (const FunctionChoice& fc : c.function_choices) {
    GateOptions& o = entry(fc.gate);
    o.functions = fc.functions;
    const unsigned bits = key_bits_for(static_cast<unsigned>(fc.functions.size()));
    o.bits += bits;
    stats.key_width += bits;
  }
  for (const auto& [g, opts] : gates) {
    GateKeySpace gk;
    gk.gate = std::string(n.gate_name(g));
    gk.key_bits = opts.bits;
    gk.distinct_functions = count_functions(n, n.gate(g), opts);
    stats.log2_solution_space += std::log2(static_cast<double>(gk.distinct_functions));
    stats.gates.push_back(std::move(gk));
  }
  return stats;
}

}  // namespace bcamo
