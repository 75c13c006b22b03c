#include "bcamo/attack.hpp"
#include "bcamo/cnf.hpp"

namespace bcamo {

VerifyResult sat_equivalent(const Netlist& a, const Netlist& b, std::uint64_t conflict_budget) {
  const InterfaceMap map = match_interfaces(a, b);
  sat::Solver solver;
  TseitinEncoder<sat::Solver> enc(solver);
  const std::vector<sat::Lit> la = enc.encode(a);
  std::vector<sat::Lit> bound(b.num_nets(), sat::kUndefLit);
  for (std::size_t i = 0; i < b.inputs().size(); ++i) bound[b.inputs()[i]] = la[a.inputs()[map.input_of_b[i]]];
  const std::vector<sat::Lit> lb = enc.encode(b, bound);
  std::vector<sat::Lit> diffs;
  for (std::size_t o = 0; o < b.outputs().size(); ++o) {
    diffs.push_back(enc.xor2(la[a.outputs()[map.output_of_b[o]]], lb[b.outputs()[o]]));
  }
  solver.add_clause({enc.any(diffs)});
  solver.set_conflict_budget(conflict_budget);

  VerifyResult r;
  r.method = "sat";
  switch (solver.solve()) {
    case sat::Result::Unsat: r.equivalent = true; break;
    case sat::Result::Sat: {
      Pattern cex(a.inputs().size());
      for (std::size_t i = 0; i < a.inputs().size(); ++i) cex.set(i, solver.model_value(la[a.inputs()[i]]));
      r.counterexample = cex;
      break;
    }
    case sat::Result::Unknown: r.method = "unknown"; break;
  }
  return r;
}

VerifyResult verify_key(const KeyedNetlist& k, const Key& key, const Netlist& secret, std::uint64_t random_patterns,
                        std::uint64_t seed) {
  const Netlist candidate = apply_key(k, key);
  VerifyResult r;
  if (secret.inputs().size() <= kMaxExhaustiveInputs) {
    auto e = equivalent(secret, candidate, EquivalenceMode::exhaustive());
    r.equivalent = e.equal;
    r.counterexample = e.counterexample;
    r.method = "exhaustive";
    return r;
  }
  r = sat_equivalent(secret, candidate, 200000);
  if (r.method == "sat") return r;
  auto e = equivalent(secret, candidate, EquivalenceMode::random(random_patterns, seed));
  r.equivalent = e.equal;
  r.counterexample = e.counterexample;
  r.method = "random";
  return r;
}

}  // namespace bcamo
