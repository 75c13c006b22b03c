#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bcamo/bits.hpp"
#include "bcamo/netlist.hpp"

namespace bcamo {

/// Evaluates the netlist on 64 patterns at once.
///
/// `input_words[i]` carries the values of primary input i; the result holds
/// one word per net (indexed by NetId).
std::vector<std::uint64_t> simulate_words(const Netlist& n, std::span<const std::uint64_t> input_words);

/// Throws std::invalid_argument on width mismatch.
Pattern simulate(const Netlist& n, const Pattern& inputs);

/// Elementwise equal to simulate(); packs 64 patterns per machine word.
std::vector<Pattern> simulate_batch(const Netlist& n, std::span<const Pattern> inputs);

/// Input word for exhaustive enumeration: bit j of block `block` is bit `input`
/// of the pattern index (block * 64 + j).
std::uint64_t exhaustive_word(std::size_t input, std::uint64_t block);

/// Position of each of b's primary inputs/outputs inside a's, matched by name.
struct InterfaceMap {
  std::vector<std::size_t> input_of_b;   // input_of_b[i] = index in a.inputs() of b.inputs()[i]
  std::vector<std::size_t> output_of_b;  // same for outputs
};

/// Throws NetlistError(Interface) when names or counts differ.
InterfaceMap match_interfaces(const Netlist& a, const Netlist& b);

struct EquivalenceMode {
  enum class Kind { Exhaustive, Random } kind = Kind::Exhaustive;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  static EquivalenceMode exhaustive() { return {}; }
  static EquivalenceMode random(std::uint64_t samples, std::uint64_t seed) {
    return {Kind::Random, samples, seed};
  }
};

struct EquivalenceResult {
  bool equal = true;
  /// Counterexample in a's primary-input order.
  std::optional<Pattern> counterexample;
  std::uint64_t patterns_checked = 0;
  /// True when the verdict covers the whole input space.
  bool complete = false;
};

inline constexpr std::size_t kMaxExhaustiveInputs = 20;

/// Compares two netlists with identically named interfaces.
///
/// Exhaustive mode is complete for up to kMaxExhaustiveInputs inputs and
/// throws std::invalid_argument beyond that. Random mode reports the first
/// counterexample or "no difference in n samples".
EquivalenceResult equivalent(const Netlist& a, const Netlist& b, EquivalenceMode mode);

/// Exhaustive when the input count allows it, otherwise `samples` random patterns.
EquivalenceResult equivalent_auto(const Netlist& a, const Netlist& b, std::uint64_t samples, std::uint64_t seed);

}  // namespace bcamo
