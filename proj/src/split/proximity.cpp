#include <algorithm>
#include <chrono>
#include <limits>
#include <queue>

#include "bcamo/rng.hpp"
#include "bcamo/split.hpp"

namespace bcamo {

namespace {

using Cost = std::int64_t;
constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;

class Matcher {
 public:
  Matcher(const SplitView& v, const MatchOptions& opts)
      : v_(v), opts_(opts), load_(v.drivers.size(), 0), assigned_(v.sinks.size(), kUnassigned),
        succ_(v.netlist.num_gates()), mark_(v.netlist.num_gates(), 0) {
    if (opts.fanout_cap == 0) throw std::invalid_argument("fan-out cap must be positive");
    Rng rng(derive_seed(opts.seed, "proximity"));
    driver_prio_.resize(v.drivers.size());
    for (auto& p : driver_prio_) p = rng.next();
    sink_prio_.resize(v.sinks.size());
    for (auto& p : sink_prio_) p = rng.next();

    std::vector<std::vector<bool>> cut(v.netlist.num_gates(), std::vector<bool>(2, false));
    for (const CutSink& s : v.sinks) cut[s.gate][s.pin] = true;
    const Netlist& n = v.netlist;
    for (GateId g = 0; g < n.num_gates(); ++g) {
      const Gate& gate = n.gate(g);
      for (unsigned pin = 0; pin < gate.arity(); ++pin) {
        if (cut[g][pin]) continue;
        const Net& in = n.net(gate.in[pin]);
        if (in.kind == NetKind::GateOutput) succ_[in.driver].push_back(g);
      }
    }
  }

  Cost cost(std::size_t s, std::size_t d) const { return manhattan(v_.sinks[s].pos, v_.drivers[d].pos); }

  bool admissible(std::size_t s, std::size_t d) const {
    return v_.drivers[d].gate == kNone || v_.drivers[d].gate != v_.sinks[s].gate;
  }

  // Admissible drivers of sink s by (distance, random priority).
  std::vector<std::size_t> ranked(std::size_t s, std::size_t limit) const {
    std::vector<std::size_t> out;
    out.reserve(v_.drivers.size());
    for (std::size_t d = 0; d < v_.drivers.size(); ++d) {
      if (admissible(s, d)) out.push_back(d);
    }
    auto less = [&](std::size_t a, std::size_t b) {
      const Cost ca = cost(s, a);
      const Cost cb = cost(s, b);
      return ca != cb ? ca < cb : driver_prio_[a] < driver_prio_[b];
    };
    if (limit < out.size()) {
      std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(limit), out.end(), less);
      out.resize(limit);
    } else {
      std::sort(out.begin(), out.end(), less);
    }
    return out;
  }

  // True when wiring driver d into sink s closes a combinational loop.
  bool closes_loop(std::size_t s, std::size_t d) {
    const GateId from = v_.drivers[d].gate;
    if (from == kNone) return false;
    const GateId to = v_.sinks[s].gate;
    if (from == to) return true;
    ++stamp_;
    std::vector<GateId> stack{to};
    mark_[to] = stamp_;
    while (!stack.empty()) {
      const GateId g = stack.back();
      stack.pop_back();
      for (GateId h : succ_[g]) {
        if (h == from) return true;
        if (mark_[h] != stamp_) {
          mark_[h] = stamp_;
          stack.push_back(h);
        }
      }
    }
    return false;
  }

  void commit(std::size_t s, std::size_t d) {
    assigned_[s] = d;
    ++load_[d];
    if (v_.drivers[d].gate != kNone) succ_[v_.drivers[d].gate].push_back(v_.sinks[s].gate);
  }

  // Greedy nearest assignment of every unassigned sink, closest pairs first.
  void greedy() {
    struct Entry {
      Cost cost;
      std::uint64_t prio;
      std::size_t sink;
      bool operator>(const Entry& o) const { return cost != o.cost ? cost > o.cost : prio > o.prio; }
    };
    constexpr std::size_t kFirst = 32;
    std::vector<std::vector<std::size_t>> lists(v_.sinks.size());
    std::vector<std::size_t> cursor(v_.sinks.size(), 0);
    std::vector<bool> full(v_.sinks.size(), false);
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    for (std::size_t s = 0; s < v_.sinks.size(); ++s) {
      if (assigned_[s] != kUnassigned) continue;
      lists[s] = ranked(s, kFirst);
      if (lists[s].empty()) throw SplitError("cut sink " + std::to_string(s) + " has no admissible driver");
      queue.push({cost(s, lists[s][0]), sink_prio_[s], s});
    }
    while (!queue.empty()) {
      const Entry e = queue.top();
      queue.pop();
      const std::size_t s = e.sink;
      const std::size_t d = lists[s][cursor[s]];
      if (load_[d] < opts_.fanout_cap && !closes_loop(s, d)) {
        commit(s, d);
        continue;
      }
      if (++cursor[s] == lists[s].size()) {
        if (full[s] || lists[s].size() < kFirst) {
          throw SplitError("no admissible driver for cut sink " + std::to_string(s) +
                           " within the fan-out cap without closing a loop");
        }
        lists[s] = ranked(s, SIZE_MAX);
        full[s] = true;
        cursor[s] = kFirst;
        if (cursor[s] >= lists[s].size()) {
          throw SplitError("no admissible driver for cut sink " + std::to_string(s) +
                           " within the fan-out cap without closing a loop");
        }
      }
      queue.push({cost(s, lists[s][cursor[s]]), sink_prio_[s], s});
    }
  }

  // Capacitated min-cost assignment over the nearest candidates of every
  // sink, built one sink at a time along shortest augmenting paths.
  void min_cost() {
    const std::size_t ns = v_.sinks.size();
    const std::size_t nd = v_.drivers.size();
    const std::size_t t = ns + nd;
    std::vector<std::vector<std::size_t>> cand(ns);
    for (std::size_t s = 0; s < ns; ++s) cand[s] = ranked(s, opts_.candidates_per_sink);
    std::vector<std::vector<std::size_t>> users(nd);  // sinks currently assigned to each driver
    std::vector<std::size_t> flow(ns, kUnassigned);
    std::vector<Cost> pot(t + 1, 0);
    std::vector<Cost> dist(t + 1, kInf);
    std::vector<std::size_t> parent(t + 1, kUnassigned);
    std::vector<bool> done(t + 1, false);
    std::vector<std::size_t> touched;

    std::vector<std::size_t> order(ns);
    for (std::size_t s = 0; s < ns; ++s) order[s] = s;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sink_prio_[a] < sink_prio_[b]; });

    using Item = std::pair<Cost, std::size_t>;
    for (std::size_t s0 : order) {
      for (std::size_t x : touched) {
        dist[x] = kInf;
        parent[x] = kUnassigned;
        done[x] = false;
      }
      touched.clear();
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      auto relax = [&](std::size_t from, std::size_t to, Cost reduced) {
        const Cost nd2 = dist[from] + reduced;
        if (nd2 < dist[to]) {
          if (dist[to] == kInf) touched.push_back(to);
          dist[to] = nd2;
          parent[to] = from;
          heap.push({nd2, to});
        }
      };
      dist[s0] = 0;
      touched.push_back(s0);
      heap.push({0, s0});
      while (!heap.empty()) {
        auto [du, u] = heap.top();
        heap.pop();
        if (done[u] || du != dist[u]) continue;
        done[u] = true;
        if (u == t) break;
        if (u < ns) {
          for (std::size_t d : cand[u]) {
            if (flow[u] == d) continue;
            relax(u, ns + d, cost(u, d) + pot[u] - pot[ns + d]);
          }
        } else {
          const std::size_t d = u - ns;
          if (users[d].size() < opts_.fanout_cap) relax(u, t, pot[u] - pot[t]);
          for (std::size_t s : users[d]) relax(u, s, -cost(s, d) + pot[u] - pot[s]);
        }
      }
      if (dist[t] == kInf) continue;  // left for the greedy pass
      const Cost dt = dist[t];
      for (std::size_t x : touched) pot[x] += std::min(dist[x], dt);
      // Unreached nodes shift by dt as well; doing so for all keeps reduced costs valid.
      for (std::size_t x = 0; x <= t; ++x) {
        if (dist[x] == kInf) pot[x] += dt;
      }
      // Augment along the path t <- d <- s <- d <- ... <- s0.
      std::size_t node = parent[t];
      while (node != kUnassigned) {
        const std::size_t d = node - ns;
        const std::size_t s = parent[node];
        if (flow[s] != kUnassigned) {
          auto& u = users[flow[s]];
          u.erase(std::find(u.begin(), u.end(), s));
        }
        flow[s] = d;
        users[d].push_back(s);
        node = s == s0 ? kUnassigned : parent[s];
      }
    }

    // Loop repair: keep the cheapest edges that stay acyclic, reassign the rest greedily.
    std::vector<std::size_t> by_cost;
    for (std::size_t s = 0; s < ns; ++s) {
      if (flow[s] != kUnassigned) by_cost.push_back(s);
    }
    std::sort(by_cost.begin(), by_cost.end(), [&](std::size_t a, std::size_t b) {
      const Cost ca = cost(a, flow[a]);
      const Cost cb = cost(b, flow[b]);
      return ca != cb ? ca < cb : sink_prio_[a] < sink_prio_[b];
    });
    for (std::size_t s : by_cost) {
      if (!closes_loop(s, flow[s])) commit(s, flow[s]);
    }
    greedy();
  }

  const std::vector<std::size_t>& assignment() const { return assigned_; }

 private:
  static constexpr std::size_t kUnassigned = SIZE_MAX;

  const SplitView& v_;
  const MatchOptions& opts_;
  std::vector<unsigned> load_;
  std::vector<std::size_t> assigned_;
  std::vector<std::vector<GateId>> succ_;
  std::vector<std::uint64_t> mark_;
  std::uint64_t stamp_ = 0;
  std::vector<std::uint64_t> driver_prio_;
  std::vector<std::uint64_t> sink_prio_;
};

}  // namespace

MatchStrategy parse_match_strategy(std::string_view s) {
  if (s == "greedy") return MatchStrategy::GreedyNearest;
  if (s == "min-cost") return MatchStrategy::MinCost;
  throw std::invalid_argument("unknown match strategy '" + std::string(s) + "' (expected greedy or min-cost)");
}

std::string_view to_string(MatchStrategy s) { return s == MatchStrategy::GreedyNearest ? "greedy" : "min-cost"; }

MatchResult proximity_match(const SplitView& v, const MatchOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Matcher m(v, opts);
  if (opts.strategy == MatchStrategy::GreedyNearest) {
    m.greedy();
  } else {
    m.min_cost();
  }
  MatchResult r;
  r.assignment = m.assignment();
  NetlistBuilder b(v.netlist);
  for (std::size_t s = 0; s < v.sinks.size(); ++s) {
    const DriverRef& got = v.drivers[r.assignment[s]].driver;
    if (got == v.sinks[s].truth) ++r.correct;
    const NetId net = got.kind == DriverRef::Kind::Net ? got.net : b.constant(got.kind == DriverRef::Kind::Const1);
    b.set_gate_input(v.sinks[s].gate, v.sinks[s].pin, net);
  }
  r.proposed = b.build();
  r.ccr_percent = v.sinks.empty() ? 100.0 : 100.0 * static_cast<double>(r.correct) / static_cast<double>(v.sinks.size());
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace bcamo
