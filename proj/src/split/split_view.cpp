#include <cstdlib>
#include <map>
#include <set>

#include <json.hpp>

#include "bcamo/split.hpp"

namespace bcamo {

Point output_pin_pos(Point cell) { return {cell.x * kCellPitch + 6, cell.y * kCellPitch + 4}; }

Point input_pin_pos(Point cell, unsigned pin) {
  return {cell.x * kCellPitch + 1, cell.y * kCellPitch + 2 + 4 * static_cast<int>(pin % 2)};
}

Point tie_pin_pos(Point cell) { return {cell.x * kCellPitch + 3, cell.y * kCellPitch + 4}; }

namespace {

Point net_driver_pos(const Netlist& n, const Placement& p, NetId net) {
  const Net& info = n.net(net);
  if (info.kind == NetKind::PrimaryInput) {
    for (std::size_t i = 0; i < n.inputs().size(); ++i) {
      if (n.inputs()[i] == net) return output_pin_pos(p.inputs[i]);
    }
  }
  return output_pin_pos(p.gates[info.driver]);
}

DriverRef ref_of(const Netlist& n, NetId net) {
  switch (n.net(net).kind) {
    case NetKind::Const0: return DriverRef::constant(false);
    case NetKind::Const1: return DriverRef::constant(true);
    default: return DriverRef::of_net(net);
  }
}

// Point `dist` steps along the horizontal-then-vertical route from a to b.
Point along_route(Point a, Point b, int dist) {
  const int dx = b.x - a.x;
  const int dy = b.y - a.y;
  const int hx = std::min(dist, std::abs(dx));
  Point q{a.x + (dx < 0 ? -hx : hx), a.y};
  const int vy = std::min(dist - hx, std::abs(dy));
  q.y += dy < 0 ? -vy : vy;
  return q;
}

}  // namespace

SplitView make_split_view(const Netlist& n, const Placement& p, const SplitPolicy& policy, const CamoNetlist* camo) {
  validate_placement(n, p);
  if (camo && camo->base.num_gates() != n.num_gates()) {
    throw std::invalid_argument("split view netlist is not the camouflaged base netlist");
  }
  SplitView v;
  v.netlist = n;
  v.placement = p;

  std::map<std::pair<GateId, unsigned>, const PinChoice*> camo_pins;
  if (camo) {
    for (const PinChoice& pc : camo->pin_choices) camo_pins.emplace(std::make_pair(pc.gate, pc.pin), &pc);
  }
  std::vector<std::size_t> po_count(n.num_nets(), 0);
  for (NetId o : n.outputs()) ++po_count[o];

  if (policy.beol_fraction < 0.0 || policy.beol_fraction > 1.0) {
    throw std::invalid_argument("beol_fraction must lie in [0, 1]");
  }
  auto arity_of = [&](NetId net) { return 1 + n.fanout(net).size() + po_count[net]; };
  auto driving_gate = [&](NetId net) {
    const Net& info = n.net(net);
    return info.kind == NetKind::GateOutput ? info.driver : kNone;
  };

  // Regular connections.
  for (NetId net = 0; net < n.num_nets(); ++net) {
    if (is_constant(n.net(net).kind)) continue;
    std::vector<Sink> regular;
    for (const Sink& s : n.fanout(net)) {
      if (!camo_pins.contains({s.gate, s.pin})) regular.push_back(s);
    }
    if (regular.empty()) continue;
    const bool cut = policy.kind == SplitPolicy::Kind::AllCut ||
                     static_cast<double>(net_hpwl(n, p, net)) >= policy.threshold;
    if (!cut) continue;
    const Point from = net_driver_pos(n, p, net);
    const std::size_t arity = arity_of(net);
    for (const Sink& s : regular) {
      const Point to = input_pin_pos(p.gates[s.gate], s.pin);
      const int length = manhattan(from, to);
      const int below = static_cast<int>((1.0 - policy.beol_fraction) * length);
      const Point driver_end = along_route(from, to, below - below / 2);
      const Point sink_end = along_route(from, to, length - below / 2);
      v.drivers.push_back({DriverRef::of_net(net), driver_end, driving_gate(net), arity});
      v.sinks.push_back({s.gate, s.pin, sink_end, false, arity, DriverRef::of_net(net)});
      ++v.cut_inputs;
      if (arity == 2) v.segments.push_back({driver_end, sink_end});
    }
  }

  // Camouflaged inputs: every candidate wire is cut.
  for (const auto& [key, pc] : camo_pins) {
    const Point sink_pos = input_pin_pos(p.gates[pc->gate], pc->pin);
    const Point tie_pos = tie_pin_pos(p.gates[pc->gate]);
    v.sinks.push_back({pc->gate, pc->pin, sink_pos, true, 2, ref_of(n, pc->candidates[pc->true_index].net)});
    for (const Candidate& c : pc->candidates) {
      const DriverRef ref = ref_of(n, c.net);
      const Point pos = ref.kind == DriverRef::Kind::Net ? net_driver_pos(n, p, c.net) : tie_pos;
      v.drivers.push_back({ref, pos, ref.kind == DriverRef::Kind::Net ? driving_gate(c.net) : kNone, 2});
      v.segments.push_back({pos, sink_pos});
      ++v.cut_inputs;
    }
  }
  return v;
}

std::string split_view_to_json(const SplitView& v) {
  using nlohmann::json;
  const Netlist& n = v.netlist;
  std::set<std::pair<GateId, unsigned>> cut;
  for (const CutSink& s : v.sinks) cut.emplace(s.gate, s.pin);

  json gates = json::array();
  for (GateId g = 0; g < n.num_gates(); ++g) {
    json visible = json::array();
    const Gate& gate = n.gate(g);
    for (unsigned pin = 0; pin < gate.arity(); ++pin) {
      visible.push_back(cut.contains({g, pin}) ? json(nullptr) : json(n.net(gate.in[pin]).name));
    }
    gates.push_back({{"name", std::string(n.gate_name(g))},
                     {"func", std::string(to_string(gate.func))},
                     {"x", v.placement.gates[g].x},
                     {"y", v.placement.gates[g].y},
                     {"inputs", visible}});
  }
  json sinks = json::array();
  for (std::size_t i = 0; i < v.sinks.size(); ++i) {
    const CutSink& s = v.sinks[i];
    sinks.push_back({{"id", i},
                     {"gate", std::string(n.gate_name(s.gate))},
                     {"pin", s.pin},
                     {"x", s.pos.x},
                     {"y", s.pos.y},
                     {"net_arity", s.net_arity}});
  }
  json drivers = json::array();
  for (std::size_t i = 0; i < v.drivers.size(); ++i) {
    const DriverPin& d = v.drivers[i];
    json j = {{"id", i}, {"x", d.pos.x}, {"y", d.pos.y}, {"net_arity", d.net_arity}};
    switch (d.driver.kind) {
      case DriverRef::Kind::Const0: j["kind"] = "tie0"; break;
      case DriverRef::Kind::Const1: j["kind"] = "tie1"; break;
      case DriverRef::Kind::Net:
        j["kind"] = d.gate == kNone ? "input" : "gate";
        j["name"] = n.net(d.driver.net).name;
        break;
    }
    drivers.push_back(std::move(j));
  }
  json inputs = json::array();
  for (NetId id : n.inputs()) inputs.push_back(n.net(id).name);
  json outputs = json::array();
  for (NetId id : n.outputs()) outputs.push_back(n.net(id).name);
  json doc = {{"width", v.placement.width},
              {"height", v.placement.height},
              {"inputs", inputs},
              {"outputs", outputs},
              {"gates", gates},
              {"cut_sinks", sinks},
              {"driver_pins", drivers},
              {"cut_inputs", v.cut_inputs}};
  return doc.dump(2) + "\n";
}

}  // namespace bcamo
