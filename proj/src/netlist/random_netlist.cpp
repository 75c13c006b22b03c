#include "bcamo/random_netlist.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "bcamo/rng.hpp"

namespace bcamo {

Netlist random_netlist(const RandomNetlistSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  NetlistBuilder b("random_" + std::to_string(seed));
  std::vector<NetId> nets;
  std::vector<unsigned> fanout;
  for (unsigned i = 0; i < std::max(1u, spec.inputs); ++i) {
    nets.push_back(b.add_input("i" + std::to_string(i)));
    fanout.push_back(0);
  }
  static constexpr GateFunc kBinary[] = {GateFunc::And, GateFunc::Nand, GateFunc::Or,
                                         GateFunc::Nor, GateFunc::Xor,  GateFunc::Xnor};
  for (unsigned g = 0; g < spec.gates; ++g) {
    GateFunc func;
    if (rng.chance(spec.unary_fraction)) {
      func = rng.chance(0.5) ? GateFunc::Inv : GateFunc::Buf;
    } else {
      func = kBinary[rng.below(6)];
    }
    const std::size_t lo = nets.size() > spec.window ? nets.size() - spec.window : 0;
    std::vector<std::size_t> picked;
    unsigned want = std::min<unsigned>(arity(func), static_cast<unsigned>(nets.size()));
    if (want < arity(func)) func = GateFunc::Buf;
    while (picked.size() < want) {
      std::size_t idx = rng.chance(0.8) ? lo + rng.below(nets.size() - lo) : rng.below(nets.size());
      if (std::find(picked.begin(), picked.end(), idx) == picked.end()) picked.push_back(idx);
    }
    std::vector<NetId> ins;
    for (auto idx : picked) {
      ins.push_back(nets[idx]);
      ++fanout[idx];
    }
    b.add_gate(func, ins, "g" + std::to_string(g));
    nets.push_back(b.net("g" + std::to_string(g)));
    fanout.push_back(0);
  }
  std::vector<bool> is_out(nets.size(), false);
  unsigned count = 0;
  for (std::size_t i = spec.inputs; i < nets.size(); ++i) {
    if (fanout[i] == 0) {
      is_out[i] = true;
      ++count;
    }
  }
  for (std::size_t i = nets.size(); i-- > spec.inputs && count < spec.outputs;) {
    if (!is_out[i]) {
      is_out[i] = true;
      ++count;
    }
  }
  for (std::size_t i = 0; i < nets.size(); ++i) {
    if (is_out[i]) b.add_output(nets[i]);
  }
  if (count == 0) b.add_output(nets.back());
  return b.build();
}

}  // namespace bcamo
