#include <ctime>

#include "bcamo/attack.hpp"

namespace bcamo {

std::string_view to_string(AttackStatus s) {
  switch (s) {
    case AttackStatus::Solved: return "solved";
    case AttackStatus::Timeout: return "timeout";
    case AttackStatus::UnsatModelError: return "unsat-model-error";
  }
  return "?";
}

Pattern keyed_pattern(const KeyedNetlist& k, const Pattern& functional, const Key& key) {
  if (functional.size() != k.functional_inputs.size() || key.size() != k.key_width()) {
    throw std::invalid_argument("pattern or key width does not match the keyed netlist");
  }
  const Netlist& c = k.circuit;
  std::vector<std::size_t> position(c.num_nets(), 0);
  for (std::size_t i = 0; i < c.inputs().size(); ++i) position[c.inputs()[i]] = i;
  Pattern p(c.inputs().size());
  for (std::size_t i = 0; i < functional.size(); ++i) p.set(position[k.functional_inputs[i]], functional[i]);
  for (std::size_t i = 0; i < key.size(); ++i) p.set(position[k.key_inputs[i]], key[i]);
  return p;
}

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

}  // namespace bcamo
