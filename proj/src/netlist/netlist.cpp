#include "bcamo/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace bcamo {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// Kahn's algorithm; ready gates are released in increasing id order.
// Returns a partial order when the gates contain a cycle.
std::vector<GateId> kahn(const std::vector<Net>& nets, const std::vector<Gate>& gates,
                                        const std::vector<std::uint32_t>& fanout_begin,
                                        const std::vector<Sink>& fanout) {
  std::vector<unsigned> pending(gates.size(), 0);
  for (GateId g = 0; g < gates.size(); ++g) {
    for (NetId in : gates[g].inputs()) {
      if (nets[in].kind == NetKind::GateOutput) ++pending[g];
    }
  }
  std::vector<GateId> order;
  order.reserve(gates.size());
  std::deque<GateId> ready;
  for (GateId g = 0; g < gates.size(); ++g) {
    if (pending[g] == 0) ready.push_back(g);
  }
  while (!ready.empty()) {
    GateId g = ready.front();
    ready.pop_front();
    order.push_back(g);
    NetId out = gates[g].out;
    for (auto i = fanout_begin[out]; i < fanout_begin[out + 1]; ++i) {
      if (--pending[fanout[i].gate] == 0) ready.push_back(fanout[i].gate);
    }
  }
  return order;
}

void build_fanout(const std::vector<Net>& nets, const std::vector<Gate>& gates,
                  std::vector<std::uint32_t>& begin, std::vector<Sink>& sinks) {
  begin.assign(nets.size() + 1, 0);
  for (const auto& g : gates) {
    for (NetId in : g.inputs()) ++begin[in + 1];
  }
  for (std::size_t i = 1; i < begin.size(); ++i) begin[i] += begin[i - 1];
  sinks.assign(begin.back(), Sink{kNone, 0});
  std::vector<std::uint32_t> fill(begin.begin(), begin.end() - 1);
  for (GateId g = 0; g < gates.size(); ++g) {
    for (std::uint32_t pin = 0; pin < gates[g].arity(); ++pin) {
      sinks[fill[gates[g].in[pin]]++] = Sink{g, pin};
    }
  }
}

}  // namespace

std::string_view to_string(GateFunc f) {
  switch (f) {
    case GateFunc::Inv: return "NOT";
    case GateFunc::Buf: return "BUFF";
    case GateFunc::And: return "AND";
    case GateFunc::Nand: return "NAND";
    case GateFunc::Or: return "OR";
    case GateFunc::Nor: return "NOR";
    case GateFunc::Xor: return "XOR";
    case GateFunc::Xnor: return "XNOR";
  }
  return "?";
}

std::optional<GateFunc> gate_func_from_string(std::string_view name) {
  const std::string u = upper(name);
  if (u == "NOT" || u == "INV") return GateFunc::Inv;
  if (u == "BUF" || u == "BUFF") return GateFunc::Buf;
  if (u == "AND") return GateFunc::And;
  if (u == "NAND") return GateFunc::Nand;
  if (u == "OR") return GateFunc::Or;
  if (u == "NOR") return GateFunc::Nor;
  if (u == "XOR") return GateFunc::Xor;
  if (u == "XNOR") return GateFunc::Xnor;
  return std::nullopt;
}

std::optional<NetId> Netlist::find_net(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<GateId> Netlist::find_gate(std::string_view name) const {
  auto net = find_net(name);
  if (!net || nets_[*net].driver == kNone) return std::nullopt;
  return nets_[*net].driver;
}

NetlistBuilder::NetlistBuilder(std::string name) : name_(std::move(name)) {}

NetlistBuilder::NetlistBuilder(const Netlist& source)
    : name_(source.name_),
      nets_(source.nets_),
      gates_(source.gates_),
      inputs_(source.inputs_),
      outputs_(source.outputs_),
      index_(source.index_) {}

NetId NetlistBuilder::net(std::string_view name) {
  auto [it, inserted] = index_.try_emplace(std::string(name), static_cast<NetId>(nets_.size()));
  if (inserted) nets_.push_back(Net{std::string(name), NetKind::GateOutput, kNone});
  return it->second;
}

std::optional<NetId> NetlistBuilder::find_net(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NetId NetlistBuilder::add_input(std::string_view name) {
  NetId id = net(name);
  Net& n = nets_[id];
  if (n.kind != NetKind::GateOutput || n.driver != kNone) {
    throw NetlistError(NetlistError::Kind::DuplicateDriver, "net '" + n.name + "' has more than one driver");
  }
  n.kind = NetKind::PrimaryInput;
  inputs_.push_back(id);
  return id;
}

NetId NetlistBuilder::add_constant(std::string_view name, bool value) {
  NetId id = net(name);
  Net& n = nets_[id];
  if (n.kind != NetKind::GateOutput || n.driver != kNone) {
    throw NetlistError(NetlistError::Kind::DuplicateDriver, "net '" + n.name + "' has more than one driver");
  }
  n.kind = value ? NetKind::Const1 : NetKind::Const0;
  return id;
}

NetId NetlistBuilder::constant(bool value) {
  const NetKind want = value ? NetKind::Const1 : NetKind::Const0;
  for (NetId id = 0; id < nets_.size(); ++id) {
    if (nets_[id].kind == want) return id;
  }
  return add_constant(fresh_name(value ? "tie1" : "tie0"), value);
}

void NetlistBuilder::check_arity(GateFunc func, std::size_t n) const {
  if (n != arity(func)) {
    throw NetlistError(NetlistError::Kind::Arity, std::string(to_string(func)) + " expects " +
                                                      std::to_string(arity(func)) + " inputs, got " +
                                                      std::to_string(n));
  }
}

GateId NetlistBuilder::add_gate(GateFunc func, std::span<const NetId> inputs, std::string_view out_name) {
  check_arity(func, inputs.size());
  for (NetId in : inputs) {
    if (in >= nets_.size()) throw NetlistError(NetlistError::Kind::UnknownNet, "gate input references unknown net");
  }
  NetId out = net(out_name);
  Net& n = nets_[out];
  if (n.kind != NetKind::GateOutput || n.driver != kNone) {
    throw NetlistError(NetlistError::Kind::DuplicateDriver, "net '" + n.name + "' has more than one driver");
  }
  Gate g;
  g.func = func;
  for (std::size_t i = 0; i < inputs.size(); ++i) g.in[i] = inputs[i];
  g.out = out;
  n.driver = static_cast<GateId>(gates_.size());
  gates_.push_back(g);
  return n.driver;
}

GateId NetlistBuilder::add_gate(GateFunc func, NetId a, std::string_view out_name) {
  const NetId ins[1] = {a};
  return add_gate(func, ins, out_name);
}

GateId NetlistBuilder::add_gate(GateFunc func, NetId a, NetId b, std::string_view out_name) {
  const NetId ins[2] = {a, b};
  return add_gate(func, ins, out_name);
}

void NetlistBuilder::add_output(NetId id) {
  if (id >= nets_.size()) throw NetlistError(NetlistError::Kind::UnknownNet, "output references unknown net");
  outputs_.push_back(id);
}

std::string NetlistBuilder::fresh_name(std::string_view prefix) {
  std::string candidate(prefix);
  while (index_.contains(candidate)) {
    candidate = std::string(prefix) + "_" + std::to_string(fresh_counter_++);
  }
  return candidate;
}

void NetlistBuilder::set_gate_input(GateId gate, unsigned pin, NetId id) {
  if (pin >= gates_.at(gate).arity()) throw NetlistError(NetlistError::Kind::Arity, "pin index out of range");
  if (id >= nets_.size()) throw NetlistError(NetlistError::Kind::UnknownNet, "gate input references unknown net");
  gates_[gate].in[pin] = id;
}

void NetlistBuilder::replace_gate(GateId gate, GateFunc func, std::span<const NetId> inputs) {
  check_arity(func, inputs.size());
  Gate& g = gates_.at(gate);
  g.func = func;
  g.in = {kNone, kNone};
  for (std::size_t i = 0; i < inputs.size(); ++i) g.in[i] = inputs[i];
}

Netlist NetlistBuilder::build() const {
  Netlist n;
  n.name_ = name_;
  n.nets_ = nets_;
  n.gates_ = gates_;
  n.inputs_ = inputs_;
  n.outputs_ = outputs_;
  n.index_ = index_;

  auto driven = [&](NetId id) {
    const Net& net = n.nets_[id];
    return net.kind != NetKind::GateOutput || net.driver != kNone;
  };
  for (const auto& g : n.gates_) {
    for (NetId in : g.inputs()) {
      if (!driven(in)) {
        throw NetlistError(NetlistError::Kind::UndrivenNet,
                           "net '" + n.nets_[in].name + "' is used but never driven");
      }
    }
  }
  for (NetId out : n.outputs_) {
    if (!driven(out)) {
      throw NetlistError(NetlistError::Kind::UndrivenNet, "output '" + n.nets_[out].name + "' is never driven");
    }
  }
  for (NetId id = 0; id < n.nets_.size(); ++id) {
    if (!driven(id)) {
      throw NetlistError(NetlistError::Kind::UndrivenNet, "net '" + n.nets_[id].name + "' is never driven");
    }
  }

  build_fanout(n.nets_, n.gates_, n.fanout_begin_, n.fanout_);
  auto order = kahn(n.nets_, n.gates_, n.fanout_begin_, n.fanout_);
  if (order.size() != n.gates_.size()) {
    std::vector<bool> placed(n.gates_.size(), false);
    for (GateId g : order) placed[g] = true;
    GateId stuck = static_cast<GateId>(std::find(placed.begin(), placed.end(), false) - placed.begin());
    throw NetlistError(NetlistError::Kind::Cycle, "combinational cycle through net '" +
                                                      n.nets_[n.gates_[stuck].out].name + "'");
  }
  n.topo_ = std::move(order);
  return n;
}

std::vector<GateId> topo_order(const Netlist& n) {
  std::vector<Net> nets(n.nets().begin(), n.nets().end());
  std::vector<Gate> gates(n.gates().begin(), n.gates().end());
  std::vector<std::uint32_t> begin;
  std::vector<Sink> sinks;
  build_fanout(nets, gates, begin, sinks);
  auto order = kahn(nets, gates, begin, sinks);
  if (order.size() != gates.size()) {
    throw NetlistError(NetlistError::Kind::Cycle, "combinational cycle in netlist '" + n.name() + "'");
  }
  return order;
}

bool isomorphic(const Netlist& a, const Netlist& b) {
  if (a.num_gates() != b.num_gates() || a.inputs().size() != b.inputs().size() ||
      a.outputs().size() != b.outputs().size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.inputs().size(); ++i) {
    if (a.net(a.inputs()[i]).name != b.net(b.inputs()[i]).name) return false;
  }
  for (std::size_t i = 0; i < a.outputs().size(); ++i) {
    if (a.net(a.outputs()[i]).name != b.net(b.outputs()[i]).name) return false;
  }
  for (const Net& na : a.nets()) {
    auto idb = b.find_net(na.name);
    if (!idb) return false;
    const Net& nb = b.net(*idb);
    if (na.kind != nb.kind) return false;
    if (na.driver == kNone) continue;
    const Gate& ga = a.gate(na.driver);
    const Gate& gb = b.gate(nb.driver);
    if (ga.func != gb.func) return false;
    for (unsigned p = 0; p < ga.arity(); ++p) {
      if (a.net(ga.in[p]).name != b.net(gb.in[p]).name) return false;
    }
  }
  return a.num_nets() == b.num_nets();
}

}  // namespace bcamo
