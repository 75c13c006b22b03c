#include "bcamo/simulate.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "bcamo/rng.hpp"

namespace bcamo {

std::vector<std::uint64_t> simulate_words(const Netlist& n, std::span<const std::uint64_t> input_words) {
  if (input_words.size() != n.inputs().size()) {
    throw std::invalid_argument("expected " + std::to_string(n.inputs().size()) + " input words, got " +
                                std::to_string(input_words.size()));
  }
  std::vector<std::uint64_t> value(n.num_nets(), 0);
  for (NetId id = 0; id < n.num_nets(); ++id) {
    if (n.net(id).kind == NetKind::Const1) value[id] = ~std::uint64_t{0};
  }
  for (std::size_t i = 0; i < input_words.size(); ++i) value[n.inputs()[i]] = input_words[i];
  for (GateId g : n.topo()) {
    const Gate& gate = n.gate(g);
    const std::uint64_t a = value[gate.in[0]];
    const std::uint64_t b = gate.arity() == 2 ? value[gate.in[1]] : 0;
    value[gate.out] = eval_word(gate.func, a, b);
  }
  return value;
}

Pattern simulate(const Netlist& n, const Pattern& inputs) {
  if (inputs.size() != n.inputs().size()) {
    throw std::invalid_argument("pattern width " + std::to_string(inputs.size()) + " does not match " +
                                std::to_string(n.inputs().size()) + " primary inputs");
  }
  std::vector<std::uint64_t> words(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) words[i] = inputs[i] ? 1 : 0;
  auto value = simulate_words(n, words);
  Pattern out(n.outputs().size());
  for (std::size_t o = 0; o < n.outputs().size(); ++o) out.set(o, value[n.outputs()[o]] & 1u);
  return out;
}

std::vector<Pattern> simulate_batch(const Netlist& n, std::span<const Pattern> inputs) {
  std::vector<Pattern> results;
  results.reserve(inputs.size());
  const std::size_t width = n.inputs().size();
  std::vector<std::uint64_t> words(width);
  for (std::size_t base = 0; base < inputs.size(); base += 64) {
    const std::size_t count = std::min<std::size_t>(64, inputs.size() - base);
    std::fill(words.begin(), words.end(), 0);
    for (std::size_t j = 0; j < count; ++j) {
      const Pattern& p = inputs[base + j];
      if (p.size() != width) {
        throw std::invalid_argument("pattern width " + std::to_string(p.size()) + " does not match " +
                                    std::to_string(width) + " primary inputs");
      }
      for (std::size_t i = 0; i < width; ++i) {
        if (p[i]) words[i] |= std::uint64_t{1} << j;
      }
    }
    auto value = simulate_words(n, words);
    for (std::size_t j = 0; j < count; ++j) {
      Pattern out(n.outputs().size());
      for (std::size_t o = 0; o < n.outputs().size(); ++o) out.set(o, (value[n.outputs()[o]] >> j) & 1u);
      results.push_back(std::move(out));
    }
  }
  return results;
}

std::uint64_t exhaustive_word(std::size_t input, std::uint64_t block) {
  static constexpr std::uint64_t kLow[6] = {0xaaaaaaaaaaaaaaaaULL, 0xccccccccccccccccULL, 0xf0f0f0f0f0f0f0f0ULL,
                                            0xff00ff00ff00ff00ULL, 0xffff0000ffff0000ULL, 0xffffffff00000000ULL};
  if (input < 6) return kLow[input];
  return ((block >> (input - 6)) & 1u) ? ~std::uint64_t{0} : 0;
}

InterfaceMap match_interfaces(const Netlist& a, const Netlist& b) {
  auto match = [](const Netlist& x, std::span<const NetId> xs, const Netlist& y, std::span<const NetId> ys,
                  const char* what) {
    if (xs.size() != ys.size()) {
      throw NetlistError(NetlistError::Kind::Interface, std::string(what) + " count differs: " +
                                                            std::to_string(xs.size()) + " vs " +
                                                            std::to_string(ys.size()));
    }
    std::unordered_map<std::string_view, std::size_t> pos;
    for (std::size_t i = 0; i < xs.size(); ++i) pos.emplace(x.net(xs[i]).name, i);
    std::vector<std::size_t> map(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
      auto it = pos.find(y.net(ys[i]).name);
      if (it == pos.end()) {
        throw NetlistError(NetlistError::Kind::Interface,
                           std::string(what) + " '" + y.net(ys[i]).name + "' has no counterpart");
      }
      map[i] = it->second;
    }
    return map;
  };
  return {match(a, a.inputs(), b, b.inputs(), "primary input"),
          match(a, a.outputs(), b, b.outputs(), "primary output")};
}

namespace {

// Compares one block of 64 patterns; returns the mask of differing patterns.
std::uint64_t compare_block(const Netlist& a, const Netlist& b, const InterfaceMap& map,
                            const std::vector<std::uint64_t>& words_a) {
  std::vector<std::uint64_t> words_b(words_a.size());
  for (std::size_t i = 0; i < words_b.size(); ++i) words_b[i] = words_a[map.input_of_b[i]];
  auto va = simulate_words(a, words_a);
  auto vb = simulate_words(b, words_b);
  std::uint64_t diff = 0;
  for (std::size_t o = 0; o < map.output_of_b.size(); ++o) {
    diff |= va[a.outputs()[map.output_of_b[o]]] ^ vb[b.outputs()[o]];
  }
  return diff;
}

Pattern extract(const std::vector<std::uint64_t>& words, unsigned bit) {
  Pattern p(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) p.set(i, (words[i] >> bit) & 1u);
  return p;
}

}  // namespace

EquivalenceResult equivalent(const Netlist& a, const Netlist& b, EquivalenceMode mode) {
  InterfaceMap map = match_interfaces(a, b);
  const std::size_t width = a.inputs().size();
  EquivalenceResult result;
  std::vector<std::uint64_t> words(width);

  if (mode.kind == EquivalenceMode::Kind::Exhaustive) {
    if (width > kMaxExhaustiveInputs) {
      throw std::invalid_argument("exhaustive comparison supports at most " + std::to_string(kMaxExhaustiveInputs) +
                                  " inputs");
    }
    const std::uint64_t total = std::uint64_t{1} << width;
    const std::uint64_t blocks = total <= 64 ? 1 : total / 64;
    const std::uint64_t valid = total >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << total) - 1;
    for (std::uint64_t block = 0; block < blocks; ++block) {
      for (std::size_t i = 0; i < width; ++i) words[i] = exhaustive_word(i, block);
      std::uint64_t diff = compare_block(a, b, map, words) & valid;
      if (diff) {
        result.equal = false;
        result.counterexample = extract(words, static_cast<unsigned>(std::countr_zero(diff)));
        result.patterns_checked = block * 64 + static_cast<std::uint64_t>(std::countr_zero(diff)) + 1;
        return result;
      }
    }
    result.patterns_checked = total;
    result.complete = true;
    return result;
  }

  Rng rng(mode.seed);
  for (std::uint64_t done = 0; done < mode.samples; done += 64) {
    const std::uint64_t count = std::min<std::uint64_t>(64, mode.samples - done);
    const std::uint64_t valid = count == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << count) - 1;
    for (auto& w : words) w = rng.next();
    std::uint64_t diff = compare_block(a, b, map, words) & valid;
    if (diff) {
      result.equal = false;
      result.counterexample = extract(words, static_cast<unsigned>(std::countr_zero(diff)));
      result.patterns_checked = done + static_cast<std::uint64_t>(std::countr_zero(diff)) + 1;
      return result;
    }
  }
  result.patterns_checked = mode.samples;
  return result;
}

EquivalenceResult equivalent_auto(const Netlist& a, const Netlist& b, std::uint64_t samples, std::uint64_t seed) {
  if (a.inputs().size() <= kMaxExhaustiveInputs) return equivalent(a, b, EquivalenceMode::exhaustive());
  return equivalent(a, b, EquivalenceMode::random(samples, seed));
}

}  // namespace bcamo
