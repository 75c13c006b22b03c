#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bcamo/camo.hpp"

namespace bcamo {

namespace {

std::size_t scaled_count(double scale, std::size_t total) {
  if (scale < 0.0 || scale > 1.0) throw std::invalid_argument("scale must lie in [0, 1]");
  // Tolerate float noise such as 0.3 * 10 = 3.0000000000000004.
  auto count = static_cast<std::size_t>(std::ceil(scale * static_cast<double>(total) - 1e-9));
  return std::min(count, total);
}

}  // namespace

TargetSet select_targets(const Netlist& n, double scale, std::uint64_t seed) {
  const std::size_t count = scaled_count(scale, n.num_gates());
  std::vector<GateId> order(n.num_gates());
  std::iota(order.begin(), order.end(), GateId{0});
  Rng rng(derive_seed(seed, "targets"));
  rng.shuffle(order);
  order.resize(count);
  std::sort(order.begin(), order.end());

  TargetSet t;
  t.benchmark = n.name();
  t.scale = scale;
  t.seed = seed;
  for (GateId g : order) t.gates.emplace_back(n.gate_name(g));
  return t;
}

}  // namespace bcamo
