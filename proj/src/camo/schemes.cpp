#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "bcamo/camo.hpp"

namespace bcamo {

namespace {

constexpr TruthTable2 kAnd = truth_table(GateFunc::And);
constexpr TruthTable2 kNand = truth_table(GateFunc::Nand);
constexpr TruthTable2 kOr = truth_table(GateFunc::Or);
constexpr TruthTable2 kNor = truth_table(GateFunc::Nor);
constexpr TruthTable2 kXor = truth_table(GateFunc::Xor);
constexpr TruthTable2 kXnor = truth_table(GateFunc::Xnor);
constexpr TruthTable2 kA = 0xA;
constexpr TruthTable2 kNotA = 0x5;

std::vector<GateId> lookup_gates(const Netlist& n, const std::vector<std::string>& names) {
  std::vector<GateId> ids;
  ids.reserve(names.size());
  for (const auto& name : names) {
    auto g = n.find_gate(name);
    if (!g) throw std::invalid_argument("target gate '" + name + "' not found in netlist '" + n.name() + "'");
    ids.push_back(*g);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

std::string SchemeId::to_string() const {
  switch (kind) {
    case SchemeKind::FinalPrimitive: return "final-primitive";
    case SchemeKind::Ambiguous: return "ambiguous-" + std::to_string(k);
    case SchemeKind::ChenMux: return "chen-mux";
  }
  return "?";
}

SchemeId SchemeId::parse(std::string_view text) {
  if (text == "final-primitive") return {SchemeKind::FinalPrimitive, 0};
  if (text == "chen-mux") return {SchemeKind::ChenMux, 0};
  constexpr std::string_view prefix = "ambiguous-";
  if (text.starts_with(prefix)) {
    const std::string_view num = text.substr(prefix.size());
    for (unsigned k : {2u, 3u, 4u, 8u, 16u}) {
      if (num == std::to_string(k)) return {SchemeKind::Ambiguous, k};
    }
    throw std::invalid_argument("unsupported ambiguous scheme size '" + std::string(num) +
                                "' (expected 2, 3, 4, 8 or 16)");
  }
  throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
}

std::optional<std::vector<TruthTable2>> ambiguous_function_set(unsigned k, TruthTable2 true_function) {
  std::vector<TruthTable2> set;
  switch (k) {
    case 2: set = {true_function, static_cast<TruthTable2>(~true_function & 0xF)}; break;
    case 3: set = {kXor, kNand, kNor}; break;
    case 4: set = {kXor, kNand, kNor, kXnor}; break;
    case 8: set = {kAnd, kNand, kOr, kNor, kXor, kXnor, kA, kNotA}; break;
    case 16:
      for (unsigned tt = 0; tt < 16; ++tt) set.push_back(static_cast<TruthTable2>(tt));
      break;
    default: throw std::invalid_argument("unsupported ambiguous scheme size " + std::to_string(k));
  }
  if (std::find(set.begin(), set.end(), true_function) == set.end()) return std::nullopt;
  return set;
}

std::string_view to_string(CandidateRole r) {
  switch (r) {
    case CandidateRole::Real: return "real";
    case CandidateRole::Dummy: return "dummy";
    case CandidateRole::Const0: return "const0";
    case CandidateRole::Const1: return "const1";
  }
  return "?";
}

std::optional<GateFunc> gate_func_for(TruthTable2 tt) {
  for (GateFunc f : kAllGateFuncs) {
    if (arity(f) == 2 && truth_table(f) == tt) return f;
  }
  return std::nullopt;
}

NetId emit_function(NetlistBuilder& b, TruthTable2 tt, NetId a, NetId b_net, std::string_view name_hint) {
  tt &= 0xF;
  auto gate = [&](GateFunc f, NetId x, NetId y) {
    std::string name = b.fresh_name(name_hint);
    b.add_gate(f, x, y, name);
    return *b.find_net(name);
  };
  auto inv = [&](NetId x) {
    std::string name = b.fresh_name(name_hint);
    b.add_gate(GateFunc::Inv, x, name);
    return *b.find_net(name);
  };
  if (auto f = gate_func_for(tt)) return gate(*f, a, b_net);
  switch (tt) {
    case 0x0: return b.constant(false);
    case 0xF: return b.constant(true);
    case 0xA: return a;
    case 0xC: return b_net;
    case 0x5: return inv(a);
    case 0x3: return inv(b_net);
    case 0x2: return gate(GateFunc::And, a, inv(b_net));
    case 0x4: return gate(GateFunc::And, inv(a), b_net);
    case 0xB: return gate(GateFunc::Or, a, inv(b_net));
    case 0xD: return gate(GateFunc::Or, inv(a), b_net);
  }
  throw std::logic_error("unreachable truth table");
}

void implement_function(NetlistBuilder& b, GateId gate, TruthTable2 tt) {
  tt &= 0xF;
  const Gate g = b.gate(gate);
  if (g.arity() != 2) throw std::invalid_argument("implement_function needs a 2-input gate");
  const NetId a = g.in[0];
  const NetId c = g.in[1];
  const std::string hint = "__fn_" + b.net_info(g.out).name;
  auto inv = [&](NetId x) {
    std::string name = b.fresh_name(hint);
    b.add_gate(GateFunc::Inv, x, name);
    return *b.find_net(name);
  };
  auto set = [&](GateFunc f, std::initializer_list<NetId> ins) {
    b.replace_gate(gate, f, std::span<const NetId>(ins.begin(), ins.size()));
  };
  if (auto f = gate_func_for(tt)) return set(*f, {a, c});
  switch (tt) {
    case 0x0: return set(GateFunc::Buf, {b.constant(false)});
    case 0xF: return set(GateFunc::Buf, {b.constant(true)});
    case 0xA: return set(GateFunc::Buf, {a});
    case 0xC: return set(GateFunc::Buf, {c});
    case 0x5: return set(GateFunc::Inv, {a});
    case 0x3: return set(GateFunc::Inv, {c});
    case 0x2: return set(GateFunc::And, {a, inv(c)});
    case 0x4: return set(GateFunc::And, {inv(a), c});
    case 0xB: return set(GateFunc::Or, {a, inv(c)});
    case 0xD: return set(GateFunc::Or, {inv(a), c});
  }
}

Resolution true_resolution(const CamoNetlist& c) {
  Resolution r;
  for (const auto& pc : c.pin_choices) r.pins.push_back(pc.true_index);
  for (const auto& fc : c.function_choices) r.functions.push_back(fc.true_index);
  return r;
}

Netlist resolve(const CamoNetlist& c, const Resolution& r) {
  if (r.pins.size() != c.pin_choices.size() || r.functions.size() != c.function_choices.size()) {
    throw std::invalid_argument("resolution does not match the camouflaged netlist");
  }
  NetlistBuilder b(c.base);
  for (std::size_t i = 0; i < c.pin_choices.size(); ++i) {
    const PinChoice& pc = c.pin_choices[i];
    if (r.pins[i] >= pc.candidates.size()) throw std::out_of_range("pin option out of range");
    b.set_gate_input(pc.gate, pc.pin, pc.candidates[r.pins[i]].net);
  }
  for (std::size_t i = 0; i < c.function_choices.size(); ++i) {
    const FunctionChoice& fc = c.function_choices[i];
    if (r.functions[i] >= fc.functions.size()) throw std::out_of_range("function option out of range");
    implement_function(b, fc.gate, fc.functions[r.functions[i]]);
  }
  return b.build();
}

CamoNetlist apply_final_primitive(const Netlist& n, const TargetSet& targets, const FinalPrimitiveOptions& opts) {
  std::vector<std::string> names = targets.gates;
  names.insert(names.end(), opts.must_camouflage.begin(), opts.must_camouflage.end());
  names.insert(names.end(), opts.tie_gates.begin(), opts.tie_gates.end());
  const std::vector<GateId> gates = lookup_gates(n, names);

  CamoNetlist c;
  c.scheme = {SchemeKind::FinalPrimitive, 0};
  c.scale = targets.scale;
  c.seed = opts.seed;
  if (gates.empty()) {
    c.base = n;
    return c;
  }

  NetlistBuilder builder(n);
  const NetId zero = builder.constant(false);
  const NetId one = builder.constant(true);
  c.base = builder.build();

  std::vector<GateId> tie_ids = lookup_gates(c.base, opts.tie_gates);
  DummySelector selector(c.base, opts.dummy, tie_ids);
  Rng dummy_rng(derive_seed(opts.seed, "final-primitive-dummy"));
  Rng order_rng(derive_seed(opts.seed, "final-primitive-order"));
  for (GateId g : gates) {
    const Gate& gate = c.base.gate(g);
    std::vector<NetId> dummies = selector.select_for_gate(g, dummy_rng);
    for (unsigned pin = 0; pin < gate.arity(); ++pin) {
      PinChoice pc;
      pc.gate = g;
      pc.pin = pin;
      pc.candidates = {{gate.in[pin], CandidateRole::Real},
                       {dummies[pin], CandidateRole::Dummy},
                       {zero, CandidateRole::Const0},
                       {one, CandidateRole::Const1}};
      order_rng.shuffle(pc.candidates);
      for (unsigned i = 0; i < pc.candidates.size(); ++i) {
        if (pc.candidates[i].role == CandidateRole::Real) pc.true_index = i;
      }
      c.pin_choices.push_back(std::move(pc));
    }
  }
  return c;
}

CamoNetlist apply_ambiguous_scheme(const Netlist& n, const TargetSet& targets, unsigned k, std::uint64_t seed) {
  CamoNetlist c;
  c.base = n;
  c.scheme = {SchemeKind::Ambiguous, k};
  c.scale = targets.scale;
  c.seed = seed;
  Rng rng(derive_seed(seed, "ambiguous-order"));
  for (GateId g : lookup_gates(n, targets.gates)) {
    const Gate& gate = n.gate(g);
    if (gate.arity() != 2) {
      c.log.push_back("skipped gate '" + std::string(n.gate_name(g)) + "': 1-input " +
                      std::string(to_string(gate.func)));
      continue;
    }
    const TruthTable2 tt = truth_table(gate.func);
    auto set = ambiguous_function_set(k, tt);
    if (!set) {
      c.log.push_back("skipped gate '" + std::string(n.gate_name(g)) + "': " + std::string(to_string(gate.func)) +
                      " is not in the " + std::to_string(k) + "-function set");
      continue;
    }
    FunctionChoice fc;
    fc.gate = g;
    fc.functions = std::move(*set);
    rng.shuffle(fc.functions);
    fc.true_index = static_cast<unsigned>(std::find(fc.functions.begin(), fc.functions.end(), tt) -
                                          fc.functions.begin());
    c.function_choices.push_back(std::move(fc));
  }
  return c;
}

CamoNetlist apply_chen_mux(const Netlist& n, std::size_t n_dummies, std::uint64_t seed) {
  CamoNetlist c;
  c.base = n;
  c.scheme = {SchemeKind::ChenMux, 0};
  c.seed = seed;

  std::vector<Sink> pins;
  for (GateId g = 0; g < n.num_gates(); ++g) {
    for (unsigned p = 0; p < n.gate(g).arity(); ++p) {
      if (!is_constant(n.net(n.gate(g).in[p]).kind)) pins.push_back({g, p});
    }
  }
  if (n_dummies > pins.size()) {
    throw std::invalid_argument("requested " + std::to_string(n_dummies) + " selectors but only " +
                                std::to_string(pins.size()) + " gate inputs are available");
  }
  c.scale = pins.empty() ? 0.0 : static_cast<double>(n_dummies) / static_cast<double>(pins.size());
  if (n_dummies == 0) return c;

  Rng rng(derive_seed(seed, "chen-mux"));
  rng.shuffle(pins);
  pins.resize(n_dummies);
  std::sort(pins.begin(), pins.end(), [](const Sink& a, const Sink& b) {
    return a.gate != b.gate ? a.gate < b.gate : a.pin < b.pin;
  });

  DummySelector selector(n, DummyOptions{});
  std::vector<NetId> exclude;
  GateId current = kNone;
  for (const Sink& s : pins) {
    const Gate& gate = n.gate(s.gate);
    if (s.gate != current) {
      current = s.gate;
      exclude.assign(gate.inputs().begin(), gate.inputs().end());
      exclude.push_back(gate.out);
    }
    const NetId dummy = selector.select_for_pin(s.gate, exclude, false, rng);
    exclude.push_back(dummy);
    PinChoice pc;
    pc.gate = s.gate;
    pc.pin = s.pin;
    pc.candidates = {{gate.in[s.pin], CandidateRole::Real}, {dummy, CandidateRole::Dummy}};
    rng.shuffle(pc.candidates);
    pc.true_index = pc.candidates[0].role == CandidateRole::Real ? 0 : 1;
    c.pin_choices.push_back(std::move(pc));
  }
  return c;
}

PipelineResult camouflage(const Netlist& n, const PipelineOptions& opts, const TargetSet* targets) {
  PipelineResult result;
  result.targets = targets ? *targets : select_targets(n, opts.scale, opts.seed);
  const double scale = result.targets.scale;

  switch (opts.scheme.kind) {
    case SchemeKind::FinalPrimitive: {
      TransformResult tr = transform_inv_buf(n, opts.inv_buf_fraction, opts.seed, &result.targets.gates);
      std::size_t ties = 0;
      if (!result.targets.gates.empty()) {
        ties = opts.tie_count ? *opts.tie_count
                              : static_cast<std::size_t>(std::ceil(opts.tie_fraction * static_cast<double>(n.num_gates()) - 1e-9));
      }
      TieInsertResult tie = insert_tie_disguise(tr.netlist, ties, opts.seed);
      FinalPrimitiveOptions fp;
      fp.seed = opts.seed;
      fp.dummy = opts.dummy;
      fp.must_camouflage = tr.transformed;
      fp.tie_gates = tie.tie_gates;
      result.camo = apply_final_primitive(tie.netlist, result.targets, fp);
      result.camo.scale = scale;
      if (!tr.transformed.empty()) {
        result.camo.log.push_back("transformed " + std::to_string(tr.transformed.size()) + " INV/BUF gates");
      }
      if (ties > 0) result.camo.log.push_back("inserted " + std::to_string(ties) + " TIE-in-disguise gates");
      break;
    }
    case SchemeKind::Ambiguous:
      result.camo = apply_ambiguous_scheme(n, result.targets, opts.scheme.k, opts.seed);
      break;
    case SchemeKind::ChenMux: {
      std::size_t count = 0;
      if (opts.chen_dummies) {
        count = *opts.chen_dummies;
      } else {
        std::size_t pins = 0;
        for (const Gate& g : n.gates()) {
          for (NetId in : g.inputs()) pins += is_constant(n.net(in).kind) ? 0 : 1;
        }
        count = static_cast<std::size_t>(std::ceil(scale * static_cast<double>(pins) - 1e-9));
      }
      result.camo = apply_chen_mux(n, count, opts.seed);
      break;
    }
  }
  return result;
}

}  // namespace bcamo
