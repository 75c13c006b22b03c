#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "bcamo/camo.hpp"

namespace bcamo {

namespace {

struct Identity {
  GateFunc func;
  bool constant;
};

// INV(a) and BUF(a) as a 2-input gate with one fixed input.
constexpr Identity kInvForms[] = {
    {GateFunc::Nand, true}, {GateFunc::Nor, false}, {GateFunc::Xor, true}, {GateFunc::Xnor, false}};
constexpr Identity kBufForms[] = {
    {GateFunc::And, true}, {GateFunc::Or, false}, {GateFunc::Xor, false}, {GateFunc::Xnor, true}};

}  // namespace

TransformResult transform_inv_buf(const Netlist& n, double fraction, std::uint64_t seed,
                                  const std::vector<std::string>* restrict_to) {
  if (fraction < 0.0 || fraction > 1.0) throw std::invalid_argument("fraction must lie in [0, 1]");
  std::unordered_set<std::string_view> allowed;
  if (restrict_to) allowed.insert(restrict_to->begin(), restrict_to->end());

  std::vector<GateId> eligible;
  for (GateId g = 0; g < n.num_gates(); ++g) {
    const GateFunc f = n.gate(g).func;
    if (f != GateFunc::Inv && f != GateFunc::Buf) continue;
    if (restrict_to && !allowed.contains(n.gate_name(g))) continue;
    eligible.push_back(g);
  }
  const auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(eligible.size()) - 1e-9));
  TransformResult result;
  if (count == 0) {
    result.netlist = n;
    return result;
  }

  Rng rng(derive_seed(seed, "transform-inv-buf"));
  rng.shuffle(eligible);
  eligible.resize(std::min(count, eligible.size()));
  std::sort(eligible.begin(), eligible.end());

  NetlistBuilder b(n);
  for (GateId g : eligible) {
    const Gate& gate = n.gate(g);
    const Identity& form = gate.func == GateFunc::Inv ? kInvForms[rng.below(4)] : kBufForms[rng.below(4)];
    const NetId tie = b.constant(form.constant);
    std::array<NetId, 2> ins{gate.in[0], tie};
    if (rng.chance(0.5)) std::swap(ins[0], ins[1]);
    b.replace_gate(g, form.func, ins);
    result.transformed.emplace_back(n.gate_name(g));
  }
  result.netlist = b.build();
  return result;
}

TieInsertResult insert_tie_disguise(const Netlist& n, std::size_t count, std::uint64_t seed) {
  TieInsertResult result;
  if (count == 0) {
    result.netlist = n;
    return result;
  }
  static constexpr GateFunc kTypes[] = {GateFunc::And, GateFunc::Nand, GateFunc::Or,
                                        GateFunc::Nor, GateFunc::Xor,  GateFunc::Xnor};
  Rng rng(derive_seed(seed, "tie-disguise"));
  NetlistBuilder b(n);
  for (std::size_t i = 0; i < count; ++i) {
    const GateFunc f = kTypes[rng.below(6)];
    const NetId a = b.constant(rng.chance(0.5));
    const NetId c = b.constant(rng.chance(0.5));
    std::string name = b.fresh_name(std::string(kTiePrefix) + std::to_string(i));
    b.add_gate(f, a, c, name);
    result.tie_gates.push_back(std::move(name));
  }
  result.netlist = b.build();
  return result;
}

}  // namespace bcamo
