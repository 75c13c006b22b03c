#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcamo/keyed.hpp"
#include "bcamo/sat.hpp"
#include "bcamo/simulate.hpp"

namespace bcamo {

/// Black-box access to a functioning chip: simulation of the secret netlist.
class Oracle {
 public:
  explicit Oracle(Netlist secret) : secret_(std::move(secret)) {}

  /// Inputs and outputs in the secret netlist's primary-input/output order.
  Pattern query(const Pattern& inputs) {
    ++queries_;
    return simulate(secret_, inputs);
  }
  std::uint64_t queries() const { return queries_; }
  const Netlist& netlist() const { return secret_; }

 private:
  Netlist secret_;
  std::uint64_t queries_ = 0;
};

enum class AttackStatus { Solved, Timeout, UnsatModelError };

std::string_view to_string(AttackStatus s);

/// Raised when a recovered key fails verification or the reference key
/// violates a learned constraint. Never caught inside the attack.
class AttackInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IterationInfo {
  std::uint64_t index = 0;
  bool double_dip = false;
  /// Distinguishing input in the keyed netlist's functional-input order.
  Pattern input;
  /// Oracle response in the keyed netlist's output order.
  Pattern response;
  /// Keys that produced the distinguishing behavior (2 or 4).
  std::vector<Key> keys;
};

struct AttackConfig {
  /// Wall-clock budget in seconds.
  double timeout_s = 172800.0;
  /// Random patterns for verification when the input count is too large for exhaustive checking.
  std::uint64_t verify_patterns = 10000;
  std::uint64_t seed = 1;
  /// When set, every learned constraint is checked against this key (debug mode).
  std::optional<Key> reference_key;
  std::function<void(const IterationInfo&)> observer;
};

struct AttackResult {
  AttackStatus status = AttackStatus::Timeout;
  std::optional<Key> key;
  /// Distinguishing inputs queried (each is one oracle query).
  std::uint64_t iterations = 0;
  /// Of those, iterations that used a double distinguishing input.
  std::uint64_t double_dip_iterations = 0;
  double cpu_time_s = 0.0;
  double wall_time_s = 0.0;
  sat::Stats solver;
  std::string message;
};

/// Iterative DIP attack over two key copies sharing the functional inputs.
AttackResult seminal_attack(const KeyedNetlist& k, Oracle& oracle, const AttackConfig& cfg = {});

/// DIP attack whose queries each rule out at least two wrong keys; falls back
/// to single DIPs once no such input exists.
AttackResult double_dip_attack(const KeyedNetlist& k, Oracle& oracle, const AttackConfig& cfg = {});

struct VerifyResult {
  bool equivalent = false;
  /// In the secret netlist's primary-input order.
  std::optional<Pattern> counterexample;
  /// "exhaustive", "sat" or "random".
  std::string method;
};

/// Functional check of `key` against the secret design: exhaustive up to 20
/// inputs, otherwise a SAT miter, falling back to random patterns if the
/// miter exceeds its conflict budget.
VerifyResult verify_key(const KeyedNetlist& k, const Key& key, const Netlist& secret,
                        std::uint64_t random_patterns = 10000, std::uint64_t seed = 1);

/// SAT miter over name-matched interfaces. `equivalent` is only meaningful
/// when method == "sat"; method "unknown" means the budget ran out.
VerifyResult sat_equivalent(const Netlist& a, const Netlist& b, std::uint64_t conflict_budget = 0);

/// Input pattern for the keyed circuit: functional bits and key bits placed at
/// their primary-input positions.
Pattern keyed_pattern(const KeyedNetlist& k, const Pattern& functional, const Key& key);

/// CPU time consumed by the calling thread.
double thread_cpu_seconds();

}  // namespace bcamo
