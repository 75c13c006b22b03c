#include <chrono>
#include <unordered_map>

#include "bcamo/attack.hpp"
#include "bcamo/cnf.hpp"

namespace bcamo {

namespace {

using sat::Lit;
using Clock = std::chrono::steady_clock;

// Solver state shared by both attacks: functional-input variables X shared by
// `copies` key copies of the keyed circuit.
class AttackEngine {
 public:
  AttackEngine(const KeyedNetlist& k, Oracle& oracle, const AttackConfig& cfg, unsigned copies)
      : k_(k), oracle_(oracle), cfg_(cfg), enc_(solver_), start_(Clock::now()), cpu_start_(thread_cpu_seconds()) {
    if (cfg.timeout_s <= 0.0) throw std::invalid_argument("attack timeout must be positive");
    map_interfaces();
    solver_.set_deadline(start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.timeout_s)));
    for (std::size_t i = 0; i < k.functional_inputs.size(); ++i) x_.push_back(enc_.fresh());
    for (unsigned c = 0; c < copies; ++c) {
      std::vector<Lit> key;
      for (std::size_t i = 0; i < k.key_width(); ++i) key.push_back(enc_.fresh());
      std::vector<Lit> bound(k.circuit.num_nets(), sat::kUndefLit);
      for (std::size_t i = 0; i < x_.size(); ++i) bound[k.functional_inputs[i]] = x_[i];
      for (std::size_t i = 0; i < key.size(); ++i) bound[k.key_inputs[i]] = key[i];
      const std::vector<Lit> lits = enc_.encode(k.circuit, bound);
      std::vector<Lit> outs;
      for (NetId o : k.circuit.outputs()) outs.push_back(lits[o]);
      keys_.push_back(std::move(key));
      outputs_.push_back(std::move(outs));
    }
  }

  TseitinEncoder<sat::Solver>& enc() { return enc_; }
  sat::Solver& solver() { return solver_; }
  const std::vector<Lit>& outputs(unsigned c) const { return outputs_[c]; }
  const std::vector<Lit>& key(unsigned c) const { return keys_[c]; }

  Lit differ(unsigned a, unsigned b) {
    std::vector<Lit> d;
    for (std::size_t o = 0; o < outputs_[a].size(); ++o) d.push_back(enc_.xor2(outputs_[a][o], outputs_[b][o]));
    return enc_.any(d);
  }

  Lit keys_differ(unsigned a, unsigned b) {
    std::vector<Lit> d;
    for (std::size_t i = 0; i < keys_[a].size(); ++i) d.push_back(enc_.xor2(keys_[a][i], keys_[b][i]));
    return enc_.any(d);
  }

  sat::Result solve(std::initializer_list<Lit> assumptions) {
    if (Clock::now() >= deadline()) return sat::Result::Unknown;
    return solver_.solve(assumptions);
  }

  Pattern model_input() const {
    Pattern p(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) p.set(i, solver_.model_value(x_[i]));
    return p;
  }

  Key model_key(unsigned c) const {
    Key key(keys_[c].size());
    for (std::size_t i = 0; i < keys_[c].size(); ++i) key.set(i, solver_.model_value(keys_[c][i]));
    return key;
  }

  Pattern query(const Pattern& x) {
    Pattern in(oracle_.netlist().inputs().size());
    for (std::size_t i = 0; i < x.size(); ++i) in.set(input_to_oracle_[i], x[i]);
    const Pattern out = oracle_.query(in);
    Pattern y(output_to_oracle_.size());
    for (std::size_t o = 0; o < y.size(); ++o) y.set(o, out[output_to_oracle_[o]]);
    return y;
  }

  // Every listed key copy must reproduce y on x.
  void learn(const Pattern& x, const Pattern& y, std::initializer_list<unsigned> copies) {
    for (unsigned c : copies) {
      std::vector<Lit> bound(k_.circuit.num_nets(), sat::kUndefLit);
      for (std::size_t i = 0; i < x.size(); ++i) bound[k_.functional_inputs[i]] = enc_.constant(x[i]);
      for (std::size_t i = 0; i < keys_[c].size(); ++i) bound[k_.key_inputs[i]] = keys_[c][i];
      const std::vector<Lit> lits = enc_.encode(k_.circuit, bound);
      const auto outs = k_.circuit.outputs();
      for (std::size_t o = 0; o < outs.size(); ++o) solver_.add_clause({lits[outs[o]] ^ !y[o]});
    }
    if (cfg_.reference_key) {
      const Pattern got = simulate(k_.circuit, keyed_pattern(k_, x, *cfg_.reference_key));
      if (got != y) {
        throw AttackInconsistency("reference key contradicts the oracle on input " + x.to_string());
      }
    }
  }

  void notify(std::uint64_t index, bool dd, const Pattern& x, const Pattern& y, std::vector<Key> keys) {
    if (!cfg_.observer) return;
    IterationInfo info;
    info.index = index;
    info.double_dip = dd;
    info.input = x;
    info.response = y;
    info.keys = std::move(keys);
    cfg_.observer(info);
  }

  void finish(AttackResult& r) {
    r.cpu_time_s = thread_cpu_seconds() - cpu_start_;
    r.wall_time_s = std::chrono::duration<double>(Clock::now() - start_).count();
    r.solver = solver_.stats();
  }

  // Extracts a key consistent with every observation and verifies it.
  void extract(AttackResult& r, std::initializer_list<Lit> assumptions) {
    switch (solve(assumptions)) {
      case sat::Result::Unknown:
        r.status = AttackStatus::Timeout;
        r.message = "timed out while extracting the key";
        return;
      case sat::Result::Unsat:
        r.status = AttackStatus::UnsatModelError;
        r.message = "no key is consistent with the oracle responses";
        return;
      case sat::Result::Sat: break;
    }
    Key key = model_key(0);
    VerifyResult v = verify_key(k_, key, oracle_.netlist(), cfg_.verify_patterns, cfg_.seed);
    if (!v.equivalent) {
      throw AttackInconsistency("recovered key " + key.to_string() + " fails " + v.method + " verification");
    }
    r.status = AttackStatus::Solved;
    r.key = std::move(key);
  }

 private:
  Clock::time_point deadline() const {
    return start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg_.timeout_s));
  }

  void map_interfaces() {
    const Netlist& o = oracle_.netlist();
    std::unordered_map<std::string_view, std::size_t> in_pos;
    std::unordered_map<std::string_view, std::size_t> out_pos;
    for (std::size_t i = 0; i < o.inputs().size(); ++i) in_pos.emplace(o.net(o.inputs()[i]).name, i);
    for (std::size_t i = 0; i < o.outputs().size(); ++i) out_pos.emplace(o.net(o.outputs()[i]).name, i);
    if (in_pos.size() != k_.functional_inputs.size() || out_pos.size() != k_.circuit.outputs().size()) {
      throw std::invalid_argument("keyed netlist and oracle interfaces differ in size");
    }
    for (NetId id : k_.functional_inputs) {
      auto it = in_pos.find(k_.circuit.net(id).name);
      if (it == in_pos.end()) throw std::invalid_argument("oracle lacks input '" + k_.circuit.net(id).name + "'");
      input_to_oracle_.push_back(it->second);
    }
    for (NetId id : k_.circuit.outputs()) {
      auto it = out_pos.find(k_.circuit.net(id).name);
      if (it == out_pos.end()) throw std::invalid_argument("oracle lacks output '" + k_.circuit.net(id).name + "'");
      output_to_oracle_.push_back(it->second);
    }
  }

  const KeyedNetlist& k_;
  Oracle& oracle_;
  const AttackConfig& cfg_;
  sat::Solver solver_;
  TseitinEncoder<sat::Solver> enc_;
  Clock::time_point start_;
  double cpu_start_;
  std::vector<Lit> x_;
  std::vector<std::vector<Lit>> keys_;
  std::vector<std::vector<Lit>> outputs_;
  std::vector<std::size_t> input_to_oracle_;
  std::vector<std::size_t> output_to_oracle_;
};

}  // namespace

AttackResult seminal_attack(const KeyedNetlist& k, Oracle& oracle, const AttackConfig& cfg) {
  AttackEngine e(k, oracle, cfg, 2);
  AttackResult r;
  const Lit act = e.enc().fresh();
  e.solver().add_clause({~act, e.differ(0, 1)});
  for (;;) {
    const sat::Result s = e.solve({act});
    if (s == sat::Result::Unknown) {
      r.status = AttackStatus::Timeout;
      r.message = "timed out while searching for distinguishing inputs";
      e.finish(r);
      return r;
    }
    if (s == sat::Result::Unsat) break;
    const Pattern x = e.model_input();
    std::vector<Key> keys{e.model_key(0), e.model_key(1)};
    const Pattern y = e.query(x);
    e.learn(x, y, {0, 1});
    e.notify(r.iterations, false, x, y, std::move(keys));
    ++r.iterations;
  }
  e.extract(r, {~act});
  e.finish(r);
  return r;
}

AttackResult double_dip_attack(const KeyedNetlist& k, Oracle& oracle, const AttackConfig& cfg) {
  // Copies: A=0, B=1, C=2, D=3. A and C form the single-DIP miter.
  AttackEngine e(k, oracle, cfg, 4);
  AttackResult r;
  const Lit act1 = e.enc().fresh();
  const Lit act2 = e.enc().fresh();
  const Lit across = e.differ(0, 2);
  e.solver().add_clause({~act1, across});
  e.solver().add_clause({~act2, across});
  e.solver().add_clause({~act2, ~e.differ(0, 1)});
  e.solver().add_clause({~act2, ~e.differ(2, 3)});
  e.solver().add_clause({~act2, e.keys_differ(0, 1)});
  e.solver().add_clause({~act2, e.keys_differ(2, 3)});

  bool two_dip = true;
  for (;;) {
    const sat::Result s = e.solve({two_dip ? act2 : act1});
    if (s == sat::Result::Unknown) {
      r.status = AttackStatus::Timeout;
      r.message = "timed out while searching for distinguishing inputs";
      e.finish(r);
      return r;
    }
    if (s == sat::Result::Unsat) {
      if (!two_dip) break;
      two_dip = false;
      e.solver().add_clause({~act2});
      continue;
    }
    const Pattern x = e.model_input();
    std::vector<Key> keys;
    for (unsigned c = 0; c < (two_dip ? 4u : 3u); c += two_dip ? 1 : 2) keys.push_back(e.model_key(c));
    const Pattern y = e.query(x);
    if (two_dip) {
      e.learn(x, y, {0, 1, 2, 3});
      ++r.double_dip_iterations;
    } else {
      e.learn(x, y, {0, 2});
    }
    e.notify(r.iterations, two_dip, x, y, std::move(keys));
    ++r.iterations;
  }
  e.extract(r, {~act1, ~act2});
  e.finish(r);
  return r;
}

}  // namespace bcamo
