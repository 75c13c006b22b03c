#pragma once

#include <cstdint>

#include "bcamo/netlist.hpp"

namespace bcamo {

struct RandomNetlistSpec {
  unsigned inputs = 8;
  unsigned gates = 50;
  /// Lower bound on primary outputs; every gate without fanout is also an output.
  unsigned outputs = 4;
  /// Fraction of INV/BUF gates among the generated ones.
  double unary_fraction = 0.15;
  /// Inputs are mostly drawn from the most recent `window` nets.
  unsigned window = 24;
};

/// Random acyclic netlist over the full 8-function vocabulary; deterministic per seed.
Netlist random_netlist(const RandomNetlistSpec& spec, std::uint64_t seed);

}  // namespace bcamo
