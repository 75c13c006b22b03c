#include <algorithm>
#include <deque>

#include "bcamo/camo.hpp"

namespace bcamo {

DummySelector::DummySelector(const Netlist& n, DummyOptions opts, std::vector<GateId> tie_gates)
    : n_(n), opts_(opts), is_tie_gate_(n.num_gates(), false), extra_fanout_(n.num_nets()) {
  std::sort(tie_gates.begin(), tie_gates.end());
  for (GateId g : tie_gates) {
    is_tie_gate_[g] = true;
    tie_outputs_.push_back(n.gate(g).out);
  }
}

std::vector<bool> DummySelector::forward_cone(GateId gate) const {
  std::vector<bool> cone(n_.num_gates(), false);
  std::vector<GateId> stack{gate};
  cone[gate] = true;
  while (!stack.empty()) {
    GateId g = stack.back();
    stack.pop_back();
    const NetId out = n_.gate(g).out;
    auto visit = [&](GateId next) {
      if (!cone[next]) {
        cone[next] = true;
        stack.push_back(next);
      }
    };
    for (const Sink& s : n_.fanout(out)) visit(s.gate);
    for (GateId extra : extra_fanout_[out]) visit(extra);
  }
  return cone;
}

std::vector<NetId> DummySelector::neighborhood(GateId gate, unsigned hops) const {
  std::vector<unsigned> dist(n_.num_gates(), ~0u);
  std::deque<GateId> queue{gate};
  dist[gate] = 0;
  std::vector<bool> in_pool(n_.num_nets(), false);
  std::vector<NetId> pool;
  auto add_net = [&](NetId net) {
    if (!in_pool[net] && !is_constant(n_.net(net).kind)) {
      in_pool[net] = true;
      pool.push_back(net);
    }
  };
  while (!queue.empty()) {
    GateId g = queue.front();
    queue.pop_front();
    const Gate& gg = n_.gate(g);
    auto touch = [&](NetId net) {
      add_net(net);
      if (dist[g] == hops || is_constant(n_.net(net).kind)) return;
      auto enqueue = [&](GateId next) {
        if (dist[next] == ~0u) {
          dist[next] = dist[g] + 1;
          queue.push_back(next);
        }
      };
      if (n_.net(net).driver != kNone) enqueue(n_.net(net).driver);
      for (const Sink& s : n_.fanout(net)) enqueue(s.gate);
    };
    for (NetId in : gg.inputs()) touch(in);
    touch(gg.out);
  }
  std::sort(pool.begin(), pool.end());
  return pool;
}

NetId DummySelector::sample(GateId gate, const std::vector<NetId>& pool, const std::vector<bool>& cone,
                            const std::vector<NetId>& exclude, Rng& rng) const {
  std::vector<NetId> eligible;
  std::vector<double> weight;
  double total = 0.0;
  for (NetId net : pool) {
    const Net& info = n_.net(net);
    if (is_constant(info.kind)) continue;
    if (info.driver != kNone && cone[info.driver]) continue;
    if (net == n_.gate(gate).out) continue;
    if (std::find(exclude.begin(), exclude.end(), net) != exclude.end()) continue;
    const double w = (info.driver != kNone && is_tie_gate_[info.driver]) ? opts_.tie_weight : 1.0;
    if (w <= 0.0) continue;
    eligible.push_back(net);
    weight.push_back(w);
    total += w;
  }
  if (eligible.empty()) return kNone;
  double r = rng.unit() * total;
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    r -= weight[i];
    if (r < 0.0) return eligible[i];
  }
  return eligible.back();
}

void DummySelector::commit(NetId net, GateId gate) { extra_fanout_[net].push_back(gate); }

NetId DummySelector::select_for_pin(GateId gate, const std::vector<NetId>& exclude, bool local, Rng& rng) {
  const std::vector<bool> cone = forward_cone(gate);
  if (local) {
    for (unsigned hops = std::max(1u, opts_.k_hops); hops <= n_.num_gates(); hops *= 2) {
      std::vector<NetId> pool = neighborhood(gate, hops);
      for (NetId t : tie_outputs_) {
        if (!std::binary_search(pool.begin(), pool.end(), t)) pool.push_back(t);
      }
      NetId pick = sample(gate, pool, cone, exclude, rng);
      if (pick != kNone) {
        commit(pick, gate);
        return pick;
      }
    }
  }
  std::vector<NetId> all(n_.num_nets());
  for (NetId i = 0; i < all.size(); ++i) all[i] = i;
  NetId pick = sample(gate, all, cone, exclude, rng);
  if (pick == kNone) {
    throw DummySelectionError("no acyclic dummy net available for gate '" + std::string(n_.gate_name(gate)) + "'");
  }
  commit(pick, gate);
  return pick;
}

std::vector<NetId> DummySelector::select_for_gate(GateId gate, Rng& rng) {
  const Gate& g = n_.gate(gate);
  std::vector<NetId> exclude(g.inputs().begin(), g.inputs().end());
  exclude.push_back(g.out);
  std::vector<NetId> picks;
  for (unsigned pin = 0; pin < g.arity(); ++pin) {
    NetId d = select_for_pin(gate, exclude, true, rng);
    exclude.push_back(d);
    picks.push_back(d);
  }
  return picks;
}

std::vector<NetId> select_dummy_nets(const Netlist& n, GateId gate, unsigned k_hops, std::uint64_t seed) {
  DummyOptions opts;
  opts.k_hops = k_hops;
  DummySelector sel(n, opts);
  Rng rng(derive_seed(seed, "dummy"));
  return sel.select_for_gate(gate, rng);
}

}  // namespace bcamo
