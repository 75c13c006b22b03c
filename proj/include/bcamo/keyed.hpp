#pragma once

#include <span>
#include <string>
#include <vector>

#include "bcamo/bits.hpp"
#include "bcamo/camo.hpp"

namespace bcamo {

/// Prefix of key-input names in keyed netlists: keyinput0, keyinput1, ...
inline constexpr std::string_view kKeyInputPrefix = "keyinput";

/// One secret choice and the key bits that encode it.
///
/// The option index is read MSB first: code = sum key[first_bit + i] << (width - 1 - i).
/// Codes at or beyond `options` alias to option 0.
struct KeyDecision {
  enum class Kind { Pin, Function } kind = Kind::Pin;
  std::string gate;
  unsigned pin = 0;
  unsigned first_bit = 0;
  unsigned width = 0;
  unsigned options = 0;
};

struct KeyedNetlist {
  Netlist circuit;
  std::vector<NetId> functional_inputs;
  /// keyinput<i> is key_inputs[i].
  std::vector<NetId> key_inputs;
  /// Pin decisions in camo order, then function decisions. Empty when the
  /// keyed netlist was loaded from bench text alone.
  std::vector<KeyDecision> decisions;
  SchemeId scheme;
  double scale = 0.0;
  std::uint64_t seed = 0;

  std::size_t key_width() const { return key_inputs.size(); }
};

struct KeyedConversion {
  KeyedNetlist keyed;
  Key correct_key;
};

/// Key bits needed for a decision with `options` choices.
unsigned key_bits_for(unsigned options);

/// Builds the key-programmable model: every pin choice becomes a selector
/// tree of 2:1 muxes (OR(AND(NOT s, x), AND(s, y))) over its candidates, and
/// every function choice a selector over implementations of each option.
KeyedConversion to_keyed(const CamoNetlist& c);

/// Option selected by `key` for `d`.
unsigned decode_option(const KeyDecision& d, const Key& key);

/// Resolution selected by `key`; requires the decisions table.
Resolution decode_key(const KeyedNetlist& k, const Key& key);

/// Inverse of decode_key for in-range options.
Key encode_key(const KeyedNetlist& k, const Resolution& r);

/// Ties the key inputs to `key`, folds constants, and drops the selector
/// logic. The result has the original primary inputs and outputs.
/// Throws std::invalid_argument on width mismatch.
Netlist apply_key(const KeyedNetlist& k, const Key& key);

/// Replaces the given primary inputs by constants and simplifies. Gates that
/// survive keep their names; outputs keep their names (through a BUF or a
/// constant net when folded away). Logic not reaching an output is removed.
Netlist propagate_constants(const Netlist& n, std::span<const NetId> fixed_inputs, const BitVector& values);

/// Recognizes keyinput<i> primary inputs of a plain netlist.
/// Throws std::invalid_argument when the key indices are not 0..w-1.
KeyedNetlist keyed_from_netlist(Netlist n);

struct GateKeySpace {
  std::string gate;
  unsigned key_bits = 0;
  std::uint64_t distinct_functions = 0;
};

struct KeySpaceStats {
  std::size_t key_width = 0;
  std::vector<GateKeySpace> gates;
  /// log2 of the product of per-gate distinct-function counts.
  double log2_solution_space = 0.0;
};

/// Distinct resolved functions per camouflaged gate by truth-table
/// enumeration over the gate's candidate signals.
KeySpaceStats keyspace_stats(const CamoNetlist& c);

}  // namespace bcamo
