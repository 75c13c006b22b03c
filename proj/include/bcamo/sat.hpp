#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bcamo::sat {

using Var = std::uint32_t;

/// Literal: 2 * var + (1 if negated).
struct Lit {
  std::uint32_t x = ~0u;

  static constexpr Lit make(Var v, bool negated = false) { return Lit{2 * v + (negated ? 1u : 0u)}; }
  constexpr Var var() const { return x >> 1; }
  constexpr bool negated() const { return x & 1u; }
  constexpr Lit operator~() const { return Lit{x ^ 1u}; }
  constexpr Lit operator^(bool flip) const { return Lit{x ^ (flip ? 1u : 0u)}; }
  friend constexpr bool operator==(Lit a, Lit b) = default;
  friend constexpr bool operator<(Lit a, Lit b) { return a.x < b.x; }
};

inline constexpr Lit kUndefLit{};

enum class Result { Sat, Unsat, Unknown };

struct Stats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learnt_clauses = 0;
  std::uint64_t solves = 0;
};

/// Incremental CDCL solver: two watched literals with blockers, first-UIP
/// learning with clause minimization, VSIDS, phase saving, Luby restarts,
/// LBD-based learnt-clause reduction, and solving under assumptions.
class Solver {
 public:
  Solver();

  Var new_var();
  std::size_t num_vars() const { return assigns_.size(); }
  std::size_t num_clauses() const { return num_problem_clauses_; }

  /// Returns false once the clause set is unsatisfiable at level 0.
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits) { return add_clause(std::span<const Lit>(lits.begin(), lits.size())); }

  /// Unknown only when the deadline or conflict budget is hit.
  Result solve(std::span<const Lit> assumptions = {});
  Result solve(std::initializer_list<Lit> assumptions) {
    return solve(std::span<const Lit>(assumptions.begin(), assumptions.size()));
  }

  /// Value of `v` in the last satisfying assignment.
  bool model_value(Var v) const { return model_[v]; }
  bool model_value(Lit l) const { return model_[l.var()] != l.negated(); }

  void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) { deadline_ = deadline; }
  /// Conflicts allowed per solve() call; 0 means unlimited.
  void set_conflict_budget(std::uint64_t budget) { conflict_budget_ = budget; }

  bool okay() const { return ok_; }
  const Stats& stats() const { return stats_; }

 private:
  using CRef = std::uint32_t;
  static constexpr CRef kNoReason = ~0u;
  enum class LBool : std::uint8_t { False, True, Undef };

  struct Clause {
    std::vector<Lit> lits;
    bool learnt = false;
    bool deleted = false;
    std::uint32_t lbd = 0;
    double activity = 0.0;
  };
  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  LBool value(Lit l) const {
    const LBool v = assigns_[l.var()];
    if (v == LBool::Undef) return v;
    return (v == LBool::True) != l.negated() ? LBool::True : LBool::False;
  }
  std::uint32_t decision_level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }

  void attach(CRef cr);
  void enqueue(Lit l, CRef reason);
  CRef propagate();
  void analyze(CRef confl, std::vector<Lit>& learnt, std::uint32_t& backtrack_level, std::uint32_t& lbd);
  bool redundant(Lit l) const;
  void cancel_until(std::uint32_t level);
  Lit pick_branch();
  void bump_var(Var v);
  void bump_clause(Clause& c);
  void reduce_db();
  bool locked(CRef cr) const;
  bool out_of_time();

  // Binary max-heap on activity.
  void heap_insert(Var v);
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  Var heap_pop();
  bool heap_contains(Var v) const { return heap_index_[v] != ~0u; }

  bool ok_ = true;
  std::vector<Clause> clauses_;
  std::vector<CRef> learnts_;
  std::vector<CRef> free_slots_;
  std::size_t num_problem_clauses_ = 0;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<LBool> assigns_;
  std::vector<std::uint32_t> level_;
  std::vector<CRef> reason_;
  std::vector<bool> polarity_;
  std::vector<double> activity_;
  std::vector<Lit> trail_;
  std::vector<std::uint32_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<bool> model_;
  std::vector<Var> heap_;
  std::vector<std::uint32_t> heap_index_;
  mutable std::vector<std::uint8_t> seen_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  double max_learnts_ = 0.0;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::uint64_t conflict_budget_ = 0;
  std::uint64_t time_check_ = 0;
  Stats stats_;
};

}  // namespace bcamo::sat
