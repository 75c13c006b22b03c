#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "bcamo/rng.hpp"
#include "bcamo/split.hpp"

namespace bcamo {

namespace {

void place_pins(const Netlist& n, Placement& p) {
  auto spread = [&](std::size_t count, int x) {
    std::vector<Point> pts(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double y = (static_cast<double>(i) + 0.5) * p.height / static_cast<double>(count);
      pts[i] = {x, std::min(p.height - 1, static_cast<int>(y))};
    }
    return pts;
  };
  p.inputs = spread(n.inputs().size(), -1);
  p.outputs = spread(n.outputs().size(), p.width);
}

Placement empty_grid(const Netlist& n, double slack) {
  Placement p;
  const double cells = std::max(1.0, static_cast<double>(n.num_gates()) * (1.0 + slack));
  p.width = static_cast<int>(std::ceil(std::sqrt(cells)));
  p.height = static_cast<int>(std::ceil(cells / p.width));
  place_pins(n, p);
  return p;
}

// Output positions per net, used by wirelength evaluation.
std::vector<std::vector<std::size_t>> outputs_by_net(const Netlist& n) {
  std::vector<std::vector<std::size_t>> out(n.num_nets());
  for (std::size_t i = 0; i < n.outputs().size(); ++i) out[n.outputs()[i]].push_back(i);
  return out;
}

std::vector<std::size_t> input_index(const Netlist& n) {
  std::vector<std::size_t> idx(n.num_nets(), SIZE_MAX);
  for (std::size_t i = 0; i < n.inputs().size(); ++i) idx[n.inputs()[i]] = i;
  return idx;
}

class Hpwl {
 public:
  Hpwl(const Netlist& n, const Placement& p)
      : n_(n), p_(p), outs_(outputs_by_net(n)), in_idx_(input_index(n)) {}

  std::int64_t operator()(NetId net) const {
    const Net& info = n_.net(net);
    if (is_constant(info.kind)) return 0;
    int x0 = INT32_MAX, x1 = INT32_MIN, y0 = INT32_MAX, y1 = INT32_MIN;
    int pins = 0;
    auto add = [&](Point q) {
      x0 = std::min(x0, q.x);
      x1 = std::max(x1, q.x);
      y0 = std::min(y0, q.y);
      y1 = std::max(y1, q.y);
      ++pins;
    };
    add(info.kind == NetKind::PrimaryInput ? p_.inputs[in_idx_[net]] : p_.gates[info.driver]);
    for (const Sink& s : n_.fanout(net)) add(p_.gates[s.gate]);
    for (std::size_t o : outs_[net]) add(p_.outputs[o]);
    if (pins < 2) return 0;
    return static_cast<std::int64_t>(x1 - x0) + (y1 - y0);
  }

 private:
  const Netlist& n_;
  const Placement& p_;
  std::vector<std::vector<std::size_t>> outs_;
  std::vector<std::size_t> in_idx_;
};

}  // namespace

Placement random_placement(const Netlist& n, std::uint64_t seed, double slack) {
  Placement p = empty_grid(n, slack);
  std::vector<Point> cells;
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) cells.push_back({x, y});
  }
  Rng rng(derive_seed(seed, "placement"));
  rng.shuffle(cells);
  p.gates.assign(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(n.num_gates()));
  return p;
}

Placement place(const Netlist& n, const PlaceOptions& opts) {
  Placement p = random_placement(n, opts.seed, opts.slack);
  const std::size_t g = n.num_gates();
  if (g < 2) return p;
  const std::uint64_t budget = opts.budget ? opts.budget : 200 * static_cast<std::uint64_t>(g);

  std::vector<std::vector<NetId>> nets_of(g);
  for (GateId id = 0; id < g; ++id) {
    const Gate& gate = n.gate(id);
    nets_of[id].push_back(gate.out);
    for (NetId in : gate.inputs()) {
      if (std::find(nets_of[id].begin(), nets_of[id].end(), in) == nets_of[id].end()) nets_of[id].push_back(in);
    }
  }
  std::vector<GateId> occupant(static_cast<std::size_t>(p.width) * p.height, kNone);
  auto cell = [&](Point q) { return static_cast<std::size_t>(q.y) * p.width + q.x; };
  for (GateId id = 0; id < g; ++id) occupant[cell(p.gates[id])] = id;

  Hpwl hpwl(n, p);
  Rng rng(derive_seed(opts.seed, "hill-climb"));
  std::vector<NetId> touched;
  for (std::uint64_t it = 0; it < budget; ++it) {
    const GateId a = static_cast<GateId>(rng.below(g));
    const Point target{static_cast<int>(rng.below(static_cast<std::uint64_t>(p.width))),
                       static_cast<int>(rng.below(static_cast<std::uint64_t>(p.height)))};
    const Point from = p.gates[a];
    if (target == from) continue;
    const GateId b = occupant[cell(target)];
    touched = nets_of[a];
    if (b != kNone) {
      for (NetId net : nets_of[b]) {
        if (std::find(touched.begin(), touched.end(), net) == touched.end()) touched.push_back(net);
      }
    }
    std::int64_t before = 0;
    for (NetId net : touched) before += hpwl(net);
    p.gates[a] = target;
    if (b != kNone) p.gates[b] = from;
    std::int64_t after = 0;
    for (NetId net : touched) after += hpwl(net);
    if (after <= before) {
      occupant[cell(target)] = a;
      occupant[cell(from)] = b;
    } else {
      p.gates[a] = from;
      if (b != kNone) p.gates[b] = target;
    }
  }
  return p;
}

std::int64_t net_hpwl(const Netlist& n, const Placement& p, NetId net) { return Hpwl(n, p)(net); }

std::int64_t total_hpwl(const Netlist& n, const Placement& p) {
  Hpwl hpwl(n, p);
  std::int64_t total = 0;
  for (NetId id = 0; id < n.num_nets(); ++id) total += hpwl(id);
  return total;
}

void validate_placement(const Netlist& n, const Placement& p) {
  if (p.gates.size() != n.num_gates() || p.inputs.size() != n.inputs().size() ||
      p.outputs.size() != n.outputs().size()) {
    throw std::invalid_argument("placement does not match the netlist");
  }
  std::vector<bool> used(static_cast<std::size_t>(p.width) * std::max(0, p.height), false);
  for (const Point& q : p.gates) {
    if (q.x < 0 || q.y < 0 || q.x >= p.width || q.y >= p.height) {
      throw std::invalid_argument("gate placed outside the grid");
    }
    const std::size_t c = static_cast<std::size_t>(q.y) * p.width + q.x;
    if (used[c]) throw std::invalid_argument("two gates share a cell");
    used[c] = true;
  }
}

Placement extend_placement(const Netlist& source, const Placement& p, const Netlist& target, std::uint64_t seed) {
  Placement out;
  out.width = p.width;
  out.height = p.height;
  place_pins(target, out);
  out.gates.assign(target.num_gates(), Point{-1, -1});
  std::vector<bool> used(static_cast<std::size_t>(p.width) * p.height, false);
  std::vector<GateId> pending;
  for (GateId g = 0; g < target.num_gates(); ++g) {
    auto src = source.find_gate(target.gate_name(g));
    if (src) {
      out.gates[g] = p.gates[*src];
      used[static_cast<std::size_t>(out.gates[g].y) * p.width + out.gates[g].x] = true;
    } else {
      pending.push_back(g);
    }
  }
  std::vector<Point> free;
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      if (!used[static_cast<std::size_t>(y) * p.width + x]) free.push_back({x, y});
    }
  }
  if (free.size() < pending.size()) throw std::invalid_argument("placement has too few free cells for the new gates");
  Rng rng(derive_seed(seed, "extend-placement"));
  rng.shuffle(free);
  for (std::size_t i = 0; i < pending.size(); ++i) out.gates[pending[i]] = free[i];
  return out;
}

std::string placement_to_json(const Netlist& n, const Placement& p) {
  using nlohmann::json;
  auto pins = [](const Netlist& nl, std::span<const NetId> ids, const std::vector<Point>& pts) {
    json arr = json::array();
    for (std::size_t i = 0; i < ids.size(); ++i) arr.push_back({{"name", nl.net(ids[i]).name}, {"x", pts[i].x}, {"y", pts[i].y}});
    return arr;
  };
  json gates = json::array();
  for (GateId g = 0; g < n.num_gates(); ++g) {
    gates.push_back({{"name", std::string(n.gate_name(g))}, {"x", p.gates[g].x}, {"y", p.gates[g].y}});
  }
  json doc = {{"width", p.width},
              {"height", p.height},
              {"gates", gates},
              {"inputs", pins(n, n.inputs(), p.inputs)},
              {"outputs", pins(n, n.outputs(), p.outputs)}};
  return doc.dump(2) + "\n";
}

Placement placement_from_json(const Netlist& n, std::string_view text) {
  using nlohmann::json;
  Placement p;
  try {
    const json doc = json::parse(text);
    p.width = doc.at("width").get<int>();
    p.height = doc.at("height").get<int>();
    p.gates.assign(n.num_gates(), Point{-1, -1});
    for (const json& g : doc.at("gates")) {
      auto id = n.find_gate(g.at("name").get<std::string>());
      if (!id) throw std::invalid_argument("placement names unknown gate '" + g.at("name").get<std::string>() + "'");
      p.gates[*id] = {g.at("x").get<int>(), g.at("y").get<int>()};
    }
    place_pins(n, p);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed placement: ") + e.what());
  }
  validate_placement(n, p);
  return p;
}

}  // namespace bcamo
