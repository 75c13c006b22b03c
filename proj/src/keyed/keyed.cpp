#include "bcamo/keyed.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <unordered_map>

namespace bcamo {

namespace {

class SelectorBuilder {
 public:
  explicit SelectorBuilder(NetlistBuilder& b) : b_(b) {}

  void add_keys(std::size_t width) {
    for (std::size_t i = 0; i < width; ++i) {
      keys_.push_back(b_.add_input(std::string(kKeyInputPrefix) + std::to_string(i)));
      inverted_.push_back(kNone);
    }
  }

  const std::vector<NetId>& keys() const { return keys_; }

  // Selects options[code] where code is read MSB first from key bits
  // [first, first + width); codes past the end alias to option 0.
  NetId select(const std::vector<NetId>& options, unsigned first, unsigned width, const std::string& hint) {
    std::vector<NetId> level(std::size_t{1} << width);
    for (std::size_t code = 0; code < level.size(); ++code) level[code] = options[code < options.size() ? code : 0];
    for (unsigned i = width; i-- > 0;) {
      const unsigned bit = first + i;
      std::vector<NetId> next;
      for (std::size_t j = 0; j + 1 < level.size(); j += 2) next.push_back(mux(bit, level[j], level[j + 1], hint));
      level = std::move(next);
    }
    return level[0];
  }

 private:
  NetId gate(GateFunc f, NetId a, NetId c, const std::string& hint) {
    std::string name = b_.fresh_name(hint);
    GateId g = c == kNone ? b_.add_gate(f, a, name) : b_.add_gate(f, a, c, name);
    return b_.gate(g).out;
  }

  NetId inverted(unsigned bit) {
    if (inverted_[bit] == kNone) inverted_[bit] = gate(GateFunc::Inv, keys_[bit], kNone, "__keyinv" + std::to_string(bit));
    return inverted_[bit];
  }

  NetId mux(unsigned bit, NetId x, NetId y, const std::string& hint) {
    if (x == y) return x;
    const NetId lo = gate(GateFunc::And, inverted(bit), x, hint);
    const NetId hi = gate(GateFunc::And, keys_[bit], y, hint);
    return gate(GateFunc::Or, lo, hi, hint);
  }

  NetlistBuilder& b_;
  std::vector<NetId> keys_;
  std::vector<NetId> inverted_;
};

void write_code(Key& key, const KeyDecision& d, unsigned code) {
  for (unsigned i = 0; i < d.width; ++i) key.set(d.first_bit + i, (code >> (d.width - 1 - i)) & 1u);
}

}  // namespace

unsigned key_bits_for(unsigned options) {
  unsigned bits = 0;
  while ((1u << bits) < options) ++bits;
  return bits;
}

KeyedConversion to_keyed(const CamoNetlist& c) {
  const Netlist& base = c.base;
  KeyedConversion out;
  KeyedNetlist& k = out.keyed;
  k.scheme = c.scheme;
  k.scale = c.scale;
  k.seed = c.seed;

  unsigned width = 0;
  for (const PinChoice& pc : c.pin_choices) {
    KeyDecision d;
    d.kind = KeyDecision::Kind::Pin;
    d.gate = std::string(base.gate_name(pc.gate));
    d.pin = pc.pin;
    d.options = static_cast<unsigned>(pc.candidates.size());
    d.width = key_bits_for(d.options);
    d.first_bit = width;
    width += d.width;
    k.decisions.push_back(std::move(d));
  }
  for (const FunctionChoice& fc : c.function_choices) {
    KeyDecision d;
    d.kind = KeyDecision::Kind::Function;
    d.gate = std::string(base.gate_name(fc.gate));
    d.options = static_cast<unsigned>(fc.functions.size());
    d.width = key_bits_for(d.options);
    d.first_bit = width;
    width += d.width;
    k.decisions.push_back(std::move(d));
  }

  NetlistBuilder b(base);
  SelectorBuilder sel(b);
  sel.add_keys(width);

  std::size_t di = 0;
  for (const PinChoice& pc : c.pin_choices) {
    const KeyDecision& d = k.decisions[di++];
    std::vector<NetId> options;
    for (const Candidate& cand : pc.candidates) options.push_back(cand.net);
    const NetId chosen = sel.select(options, d.first_bit, d.width, "__mux_" + d.gate + "_" + std::to_string(pc.pin));
    b.set_gate_input(pc.gate, pc.pin, chosen);
  }
  for (const FunctionChoice& fc : c.function_choices) {
    const KeyDecision& d = k.decisions[di++];
    const Gate g = b.gate(fc.gate);
    std::vector<NetId> options;
    for (TruthTable2 tt : fc.functions) options.push_back(emit_function(b, tt, g.in[0], g.in[1], "__fn_" + d.gate));
    const NetId chosen = sel.select(options, d.first_bit, d.width, "__mux_" + d.gate);
    const NetId ins[1] = {chosen};
    b.replace_gate(fc.gate, GateFunc::Buf, ins);
  }

  k.circuit = b.build();
  k.functional_inputs.assign(base.inputs().begin(), base.inputs().end());
  k.key_inputs = sel.keys();

  out.correct_key = Key(width);
  di = 0;
  for (const PinChoice& pc : c.pin_choices) write_code(out.correct_key, k.decisions[di++], pc.true_index);
  for (const FunctionChoice& fc : c.function_choices) write_code(out.correct_key, k.decisions[di++], fc.true_index);
  return out;
}

unsigned decode_option(const KeyDecision& d, const Key& key) {
  unsigned code = 0;
  for (unsigned i = 0; i < d.width; ++i) code = (code << 1) | (key[d.first_bit + i] ? 1u : 0u);
  return code < d.options ? code : 0;
}

Resolution decode_key(const KeyedNetlist& k, const Key& key) {
  if (key.size() != k.key_width()) {
    throw std::invalid_argument("key width " + std::to_string(key.size()) + " does not match " +
                                std::to_string(k.key_width()));
  }
  Resolution r;
  for (const KeyDecision& d : k.decisions) {
    (d.kind == KeyDecision::Kind::Pin ? r.pins : r.functions).push_back(decode_option(d, key));
  }
  return r;
}

Key encode_key(const KeyedNetlist& k, const Resolution& r) {
  Key key(k.key_width());
  std::size_t pi = 0;
  std::size_t fi = 0;
  for (const KeyDecision& d : k.decisions) {
    const unsigned option = d.kind == KeyDecision::Kind::Pin ? r.pins.at(pi++) : r.functions.at(fi++);
    if (option >= d.options) throw std::out_of_range("option out of range for gate '" + d.gate + "'");
    write_code(key, d, option);
  }
  return key;
}

Netlist apply_key(const KeyedNetlist& k, const Key& key) {
  if (key.size() != k.key_width()) {
    throw std::invalid_argument("key width " + std::to_string(key.size()) + " does not match " +
                                std::to_string(k.key_width()));
  }
  return propagate_constants(k.circuit, k.key_inputs, key);
}

Netlist propagate_constants(const Netlist& n, std::span<const NetId> fixed_inputs, const BitVector& values) {
  if (fixed_inputs.size() != values.size()) throw std::invalid_argument("one value per fixed input required");

  // Each net resolves to a constant or to a representative net that survives.
  struct Rep {
    enum class Kind : std::uint8_t { Const, Net } kind = Kind::Net;
    bool value = false;
    NetId net = kNone;
  };
  struct Kept {
    GateFunc func;
    std::array<NetId, 2> in;
  };
  std::vector<Rep> rep(n.num_nets());
  std::vector<std::optional<Kept>> kept(n.num_gates());
  std::vector<bool> fixed(n.num_nets(), false);
  for (NetId id = 0; id < n.num_nets(); ++id) {
    const NetKind kind = n.net(id).kind;
    if (is_constant(kind)) {
      rep[id] = {Rep::Kind::Const, kind == NetKind::Const1, kNone};
    } else {
      rep[id] = {Rep::Kind::Net, false, id};
    }
  }
  for (std::size_t i = 0; i < fixed_inputs.size(); ++i) {
    if (n.net(fixed_inputs[i]).kind != NetKind::PrimaryInput) {
      throw std::invalid_argument("net '" + n.net(fixed_inputs[i]).name + "' is not a primary input");
    }
    rep[fixed_inputs[i]] = {Rep::Kind::Const, values[i], kNone};
    fixed[fixed_inputs[i]] = true;
  }

  auto constant = [](bool v) { return Rep{Rep::Kind::Const, v, kNone}; };
  auto alias = [](NetId x) { return Rep{Rep::Kind::Net, false, x}; };

  for (GateId g : n.topo()) {
    const Gate& gate = n.gate(g);
    const Rep a = rep[gate.in[0]];
    const NetId out = gate.out;
    auto keep = [&](GateFunc f, NetId x, NetId y) {
      kept[g] = Kept{f, {x, y}};
      rep[out] = alias(out);
    };
    if (gate.arity() == 1) {
      if (a.kind == Rep::Kind::Const) {
        rep[out] = constant(eval(gate.func, a.value));
      } else if (gate.func == GateFunc::Buf) {
        rep[out] = a;
      } else {
        keep(GateFunc::Inv, a.net, kNone);
      }
      continue;
    }
    const Rep c = rep[gate.in[1]];
    if (a.kind == Rep::Kind::Const && c.kind == Rep::Kind::Const) {
      rep[out] = constant(eval(gate.func, a.value, c.value));
      continue;
    }
    if (a.kind == Rep::Kind::Const || c.kind == Rep::Kind::Const) {
      const bool v = a.kind == Rep::Kind::Const ? a.value : c.value;
      const NetId x = a.kind == Rep::Kind::Const ? c.net : a.net;
      // f(x, v) as a function of x: constant, x, or NOT x.
      const bool f0 = eval(gate.func, false, v);
      const bool f1 = eval(gate.func, true, v);
      if (f0 == f1) {
        rep[out] = constant(f0);
      } else if (f1) {
        rep[out] = alias(x);
      } else {
        keep(GateFunc::Inv, x, kNone);
      }
      continue;
    }
    if (a.net == c.net) {
      const bool f0 = eval(gate.func, false, false);
      const bool f1 = eval(gate.func, true, true);
      if (f0 == f1) {
        rep[out] = constant(f0);
      } else if (f1) {
        rep[out] = alias(a.net);
      } else {
        keep(GateFunc::Inv, a.net, kNone);
      }
      continue;
    }
    keep(gate.func, a.net, c.net);
  }

  // Liveness from the outputs.
  std::vector<bool> live(n.num_gates(), false);
  std::vector<GateId> stack;
  auto mark = [&](NetId net) {
    const GateId d = n.net(net).driver;
    if (d != kNone && kept[d] && !live[d]) {
      live[d] = true;
      stack.push_back(d);
    }
  };
  for (NetId o : n.outputs()) {
    if (rep[o].kind == Rep::Kind::Net) mark(rep[o].net);
  }
  while (!stack.empty()) {
    GateId g = stack.back();
    stack.pop_back();
    const Kept& kg = *kept[g];
    mark(kg.in[0]);
    if (kg.in[1] != kNone) mark(kg.in[1]);
  }

  NetlistBuilder b(n.name());
  for (NetId pi : n.inputs()) {
    if (!fixed[pi]) b.add_input(n.net(pi).name);
  }
  for (GateId g : n.topo()) {
    if (!live[g]) continue;
    const Kept& kg = *kept[g];
    if (kg.in[1] == kNone) {
      b.add_gate(kg.func, b.net(n.net(kg.in[0]).name), n.net(n.gate(g).out).name);
    } else {
      b.add_gate(kg.func, b.net(n.net(kg.in[0]).name), b.net(n.net(kg.in[1]).name), n.net(n.gate(g).out).name);
    }
  }
  for (NetId o : n.outputs()) {
    const std::string& name = n.net(o).name;
    if (!b.has_net(name) || b.net_info(b.net(name)).driver == kNone) {
      if (rep[o].kind == Rep::Kind::Const) {
        if (!b.has_net(name)) b.add_constant(name, rep[o].value);
      } else if (rep[o].net != o) {
        b.add_gate(GateFunc::Buf, b.net(n.net(rep[o].net).name), name);
      }
    }
    b.add_output(b.net(name));
  }
  return b.build();
}

KeyedNetlist keyed_from_netlist(Netlist n) {
  KeyedNetlist k;
  std::vector<std::pair<std::size_t, NetId>> keys;
  for (NetId pi : n.inputs()) {
    std::string_view name = n.net(pi).name;
    if (name.starts_with(kKeyInputPrefix)) {
      std::string_view digits = name.substr(kKeyInputPrefix.size());
      std::size_t index = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
      if (!digits.empty() && ec == std::errc() && ptr == digits.data() + digits.size()) {
        keys.emplace_back(index, pi);
        continue;
      }
    }
    k.functional_inputs.push_back(pi);
  }
  std::sort(keys.begin(), keys.end());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i].first != i) {
      throw std::invalid_argument("key inputs must be numbered keyinput0..keyinput" + std::to_string(keys.size() - 1));
    }
    k.key_inputs.push_back(keys[i].second);
  }
  k.circuit = std::move(n);
  return k;
}

}  // namespace bcamo
