#pragma once

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "bcamo/netlist.hpp"
#include "bcamo/sat.hpp"

namespace bcamo {

/// Plain clause store with the same sink interface as sat::Solver.
class CnfFormula {
 public:
  sat::Var new_var() { return num_vars_++; }
  bool add_clause(std::span<const sat::Lit> lits) {
    clauses_.emplace_back(lits.begin(), lits.end());
    return true;
  }
  bool add_clause(std::initializer_list<sat::Lit> lits) {
    return add_clause(std::span<const sat::Lit>(lits.begin(), lits.size()));
  }

  std::size_t num_vars() const { return num_vars_; }
  const std::vector<std::vector<sat::Lit>>& clauses() const { return clauses_; }

  /// Literal of every net of the encoded netlist (filled by tseitin_encode).
  std::vector<sat::Lit> net_lits;

 private:
  sat::Var num_vars_ = 0;
  std::vector<std::vector<sat::Lit>> clauses_;
};

/// Tseitin encoder with constant folding and structural hashing.
///
/// Clause templates (y is the gate variable):
///   AND   (-y a) (-y b) (y -a -b)
///   XOR   (-y a b) (-y -a -b) (y -a b) (y a -b)
/// OR, NAND, NOR and XNOR reuse these through literal negation; INV and BUF
/// need no clauses. Constants map to a single TRUE variable fixed by a unit clause.
template <class Sink>
class TseitinEncoder {
 public:
  explicit TseitinEncoder(Sink& sink) : sink_(sink) {}

  sat::Lit true_lit() {
    if (true_ == sat::kUndefLit) {
      true_ = sat::Lit::make(sink_.new_var());
      sink_.add_clause({true_});
    }
    return true_;
  }
  sat::Lit constant(bool v) { return true_lit() ^ !v; }
  sat::Lit fresh() { return sat::Lit::make(sink_.new_var()); }

  bool is_true(sat::Lit l) const { return true_ != sat::kUndefLit && l == true_; }
  bool is_false(sat::Lit l) const { return true_ != sat::kUndefLit && l == ~true_; }

  sat::Lit and2(sat::Lit a, sat::Lit b) {
    if (is_false(a) || is_false(b)) return constant(false);
    if (is_true(a)) return b;
    if (is_true(b)) return a;
    if (a == b) return a;
    if (a == ~b) return constant(false);
    if (b < a) std::swap(a, b);
    const std::uint64_t key = (std::uint64_t{a.x} << 32) | b.x;
    if (auto it = and_cache_.find(key); it != and_cache_.end()) return it->second;
    const sat::Lit y = fresh();
    sink_.add_clause({~y, a});
    sink_.add_clause({~y, b});
    sink_.add_clause({y, ~a, ~b});
    and_cache_.emplace(key, y);
    return y;
  }

  sat::Lit or2(sat::Lit a, sat::Lit b) { return ~and2(~a, ~b); }

  sat::Lit xor2(sat::Lit a, sat::Lit b) {
    if (is_false(a)) return b;
    if (is_false(b)) return a;
    if (is_true(a)) return ~b;
    if (is_true(b)) return ~a;
    if (a == b) return constant(false);
    if (a == ~b) return constant(true);
    const bool parity = a.negated() != b.negated();
    a = sat::Lit::make(a.var());
    b = sat::Lit::make(b.var());
    if (b < a) std::swap(a, b);
    const std::uint64_t key = (std::uint64_t{a.x} << 32) | b.x;
    sat::Lit y;
    if (auto it = xor_cache_.find(key); it != xor_cache_.end()) {
      y = it->second;
    } else {
      y = fresh();
      sink_.add_clause({~y, a, b});
      sink_.add_clause({~y, ~a, ~b});
      sink_.add_clause({y, ~a, b});
      sink_.add_clause({y, a, ~b});
      xor_cache_.emplace(key, y);
    }
    return y ^ parity;
  }

  sat::Lit gate(GateFunc f, sat::Lit a, sat::Lit b) {
    switch (f) {
      case GateFunc::Inv: return ~a;
      case GateFunc::Buf: return a;
      case GateFunc::And: return and2(a, b);
      case GateFunc::Nand: return ~and2(a, b);
      case GateFunc::Or: return or2(a, b);
      case GateFunc::Nor: return ~or2(a, b);
      case GateFunc::Xor: return xor2(a, b);
      case GateFunc::Xnor: return ~xor2(a, b);
    }
    return a;
  }

  /// OR of many literals as a single literal.
  sat::Lit any(std::span<const sat::Lit> lits) {
    sat::Lit acc = constant(false);
    for (sat::Lit l : lits) acc = or2(acc, l);
    return acc;
  }

  /// Encodes one copy of `n`. Nets with a value in `bound` reuse that literal;
  /// other primary inputs get fresh variables. Returns a literal per net.
  std::vector<sat::Lit> encode(const Netlist& n, const std::vector<sat::Lit>& bound = {}) {
    std::vector<sat::Lit> lit(n.num_nets(), sat::kUndefLit);
    for (NetId id = 0; id < n.num_nets(); ++id) {
      if (id < bound.size() && bound[id] != sat::kUndefLit) {
        lit[id] = bound[id];
        continue;
      }
      switch (n.net(id).kind) {
        case NetKind::Const0: lit[id] = constant(false); break;
        case NetKind::Const1: lit[id] = constant(true); break;
        case NetKind::PrimaryInput: lit[id] = fresh(); break;
        case NetKind::GateOutput: break;
      }
    }
    for (GateId g : n.topo()) {
      const Gate& gate = n.gate(g);
      if (lit[gate.out] != sat::kUndefLit) continue;
      const sat::Lit a = lit[gate.in[0]];
      const sat::Lit b = gate.arity() == 2 ? lit[gate.in[1]] : a;
      lit[gate.out] = this->gate(gate.func, a, b);
    }
    return lit;
  }

 private:
  Sink& sink_;
  sat::Lit true_ = sat::kUndefLit;
  std::unordered_map<std::uint64_t, sat::Lit> and_cache_;
  std::unordered_map<std::uint64_t, sat::Lit> xor_cache_;
};

/// Standalone CNF of one netlist copy; `net_lits` maps every net.
CnfFormula tseitin_encode(const Netlist& n);

}  // namespace bcamo
