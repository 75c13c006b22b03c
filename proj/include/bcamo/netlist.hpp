#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bcamo {

using NetId = std::uint32_t;
using GateId = std::uint32_t;
inline constexpr std::uint32_t kNone = 0xffffffffu;

enum class GateFunc : std::uint8_t { Inv, Buf, And, Nand, Or, Nor, Xor, Xnor };

inline constexpr std::array<GateFunc, 8> kAllGateFuncs = {
    GateFunc::Inv, GateFunc::Buf, GateFunc::And, GateFunc::Nand,
    GateFunc::Or,  GateFunc::Nor, GateFunc::Xor, GateFunc::Xnor};

std::string_view to_string(GateFunc f);
std::optional<GateFunc> gate_func_from_string(std::string_view name);

constexpr unsigned arity(GateFunc f) {
  return (f == GateFunc::Inv || f == GateFunc::Buf) ? 1 : 2;
}

/// Evaluates `f` bitwise on 64 patterns at once. `b` is ignored for 1-input gates.
constexpr std::uint64_t eval_word(GateFunc f, std::uint64_t a, std::uint64_t b) {
  switch (f) {
    case GateFunc::Inv: return ~a;
    case GateFunc::Buf: return a;
    case GateFunc::And: return a & b;
    case GateFunc::Nand: return ~(a & b);
    case GateFunc::Or: return a | b;
    case GateFunc::Nor: return ~(a | b);
    case GateFunc::Xor: return a ^ b;
    case GateFunc::Xnor: return ~(a ^ b);
  }
  return 0;
}

constexpr bool eval(GateFunc f, bool a, bool b = false) {
  return eval_word(f, a ? ~0ULL : 0ULL, b ? ~0ULL : 0ULL) & 1u;
}

/// Two-input truth table: bit (a + 2b) holds f(a, b).
using TruthTable2 = std::uint8_t;

constexpr TruthTable2 truth_table(GateFunc f) {
  TruthTable2 tt = 0;
  for (unsigned row = 0; row < 4; ++row) {
    if (eval(f, row & 1u, (row >> 1) & 1u)) tt |= static_cast<TruthTable2>(1u << row);
  }
  return tt;
}

enum class NetKind : std::uint8_t { PrimaryInput, GateOutput, Const0, Const1 };

constexpr bool is_constant(NetKind k) { return k == NetKind::Const0 || k == NetKind::Const1; }

struct Net {
  std::string name;
  NetKind kind = NetKind::GateOutput;
  GateId driver = kNone;
};

struct Gate {
  GateFunc func = GateFunc::Buf;
  std::array<NetId, 2> in{kNone, kNone};
  NetId out = kNone;

  unsigned arity() const { return bcamo::arity(func); }
  std::span<const NetId> inputs() const { return {in.data(), arity()}; }
};

/// A gate input pin.
struct Sink {
  GateId gate;
  std::uint32_t pin;
};

class NetlistError : public std::runtime_error {
 public:
  enum class Kind { DuplicateDriver, Cycle, UndrivenNet, UnknownNet, Arity, DuplicateName, Interface };

  NetlistError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Immutable combinational netlist of 1- and 2-input gates.
///
/// Nets and gates are addressed by dense ids. Net names are unique; a gate
/// is identified externally by the name of its output net.
class Netlist {
 public:
  Netlist() = default;

  const std::string& name() const { return name_; }

  std::span<const Net> nets() const { return nets_; }
  std::span<const Gate> gates() const { return gates_; }
  std::span<const NetId> inputs() const { return inputs_; }
  std::span<const NetId> outputs() const { return outputs_; }

  std::size_t num_nets() const { return nets_.size(); }
  std::size_t num_gates() const { return gates_.size(); }

  const Net& net(NetId id) const { return nets_[id]; }
  const Gate& gate(GateId id) const { return gates_[id]; }
  std::string_view gate_name(GateId id) const { return nets_[gates_[id].out].name; }

  std::optional<NetId> find_net(std::string_view name) const;
  /// Gate driving the net called `name`, if any.
  std::optional<GateId> find_gate(std::string_view name) const;

  /// Gate input pins fed by `net`, ordered by (gate, pin).
  std::span<const Sink> fanout(NetId net) const {
    return {fanout_.data() + fanout_begin_[net], fanout_begin_[net + 1] - fanout_begin_[net]};
  }

  /// Gates in a deterministic topological order (computed once at construction).
  std::span<const GateId> topo() const { return topo_; }

 private:
  friend class NetlistBuilder;

  std::string name_;
  std::vector<Net> nets_;
  std::vector<Gate> gates_;
  std::vector<NetId> inputs_;
  std::vector<NetId> outputs_;
  std::unordered_map<std::string, NetId> index_;
  std::vector<std::uint32_t> fanout_begin_;
  std::vector<Sink> fanout_;
  std::vector<GateId> topo_;
};

/// Mutable staging area for netlists. All netlists are created through a builder.
///
/// Nets may be referenced by name before they are driven; `build()` rejects
/// anything left undriven.
class NetlistBuilder {
 public:
  explicit NetlistBuilder(std::string name = {});
  /// Starts from a copy of `source`, preserving all net and gate ids.
  explicit NetlistBuilder(const Netlist& source);

  void set_name(std::string name) { name_ = std::move(name); }

  /// Returns the net called `name`, creating an undriven placeholder if needed.
  NetId net(std::string_view name);
  std::optional<NetId> find_net(std::string_view name) const;
  bool has_net(std::string_view name) const { return index_.contains(std::string(name)); }

  NetId add_input(std::string_view name);
  NetId add_constant(std::string_view name, bool value);
  /// Returns an existing constant net of the given value, or adds one.
  NetId constant(bool value);
  GateId add_gate(GateFunc func, std::span<const NetId> inputs, std::string_view out_name);
  GateId add_gate(GateFunc func, NetId a, std::string_view out_name);
  GateId add_gate(GateFunc func, NetId a, NetId b, std::string_view out_name);
  void add_output(NetId net);

  /// A net name starting with `prefix` that is not yet taken.
  std::string fresh_name(std::string_view prefix);

  void set_gate_input(GateId gate, unsigned pin, NetId net);
  void replace_gate(GateId gate, GateFunc func, std::span<const NetId> inputs);

  std::size_t num_gates() const { return gates_.size(); }
  std::size_t num_nets() const { return nets_.size(); }
  const Gate& gate(GateId id) const { return gates_[id]; }
  const Net& net_info(NetId id) const { return nets_[id]; }
  std::span<const NetId> inputs() const { return inputs_; }
  std::span<const NetId> outputs() const { return outputs_; }

  /// Validates and freezes the netlist. Throws NetlistError.
  Netlist build() const;

 private:
  void check_arity(GateFunc func, std::size_t n) const;

  std::string name_;
  std::vector<Net> nets_;
  std::vector<Gate> gates_;
  std::vector<NetId> inputs_;
  std::vector<NetId> outputs_;
  std::unordered_map<std::string, NetId> index_;
  std::uint64_t fresh_counter_ = 0;
};

/// Deterministic topological order of the gates. Throws NetlistError::Cycle.
std::vector<GateId> topo_order(const Netlist& n);

/// True when both netlists have the same interface and the same gates by
/// name (identical functions and input names), regardless of ids.
bool isomorphic(const Netlist& a, const Netlist& b);

}  // namespace bcamo
