#include <doctest.h>

#include <bit>
#include <functional>
#include <map>

#include "bcamo/bench.hpp"
#include "bcamo/random_netlist.hpp"
#include "bcamo/rng.hpp"
#include "bcamo/simulate.hpp"
#include "test_util.hpp"

using namespace bcamo;

namespace {

// Recursive evaluator working from names only; independent of topo() and simulate_words().
bool eval_net(const Netlist& n, NetId id, const Pattern& p, std::map<NetId, bool>& memo) {
  if (auto it = memo.find(id); it != memo.end()) return it->second;
  const Net& net = n.net(id);
  bool v = false;
  switch (net.kind) {
    case NetKind::Const0: v = false; break;
    case NetKind::Const1: v = true; break;
    case NetKind::PrimaryInput:
      for (std::size_t i = 0; i < n.inputs().size(); ++i) {
        if (n.inputs()[i] == id) v = p[i];
      }
      break;
    case NetKind::GateOutput: {
      const Gate& g = n.gate(net.driver);
      bool a = eval_net(n, g.in[0], p, memo);
      bool b = g.arity() == 2 ? eval_net(n, g.in[1], p, memo) : false;
      switch (g.func) {
        case GateFunc::Inv: v = !a; break;
        case GateFunc::Buf: v = a; break;
        case GateFunc::And: v = a && b; break;
        case GateFunc::Nand: v = !(a && b); break;
        case GateFunc::Or: v = a || b; break;
        case GateFunc::Nor: v = !(a || b); break;
        case GateFunc::Xor: v = a != b; break;
        case GateFunc::Xnor: v = a == b; break;
      }
      break;
    }
  }
  memo[id] = v;
  return v;
}

Pattern reference_eval(const Netlist& n, const Pattern& p) {
  std::map<NetId, bool> memo;
  Pattern out(n.outputs().size());
  for (std::size_t o = 0; o < n.outputs().size(); ++o) out.set(o, eval_net(n, n.outputs()[o], p, memo));
  return out;
}

std::uint64_t bus(const Pattern& p, const Netlist& n, const std::vector<std::string>& names) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t k = 0; k < n.inputs().size(); ++k) {
      if (n.net(n.inputs()[k]).name == names[i] && p[k]) v |= std::uint64_t{1} << i;
    }
  }
  return v;
}

}  // namespace

TEST_CASE("parse a single NAND") {
  Netlist n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)\n");
  CHECK(n.num_gates() == 1);
  CHECK(n.inputs().size() == 2);
  CHECK(n.outputs().size() == 1);
  CHECK(n.gate(0).func == GateFunc::Nand);
}

TEST_CASE("gate names are case-insensitive with NOT and BUFF aliases") {
  Netlist n = parse_bench("INPUT(a)\nOUTPUT(y)\nOUTPUT(z)\nOUTPUT(w)\nm = not(a)\ny = Buff(m)\nz = INV(a)\nw = buf(a)\n");
  CHECK(n.gate(*n.find_gate("m")).func == GateFunc::Inv);
  CHECK(n.gate(*n.find_gate("y")).func == GateFunc::Buf);
  CHECK(n.gate(*n.find_gate("z")).func == GateFunc::Inv);
  CHECK(n.gate(*n.find_gate("w")).func == GateFunc::Buf);
}

TEST_CASE("CRLF line endings and comments") {
  Netlist n = parse_bench("# header\r\nINPUT(a)\r\nINPUT(b) # trailing\r\nOUTPUT(y)\r\ny = XOR(a, b)\r\n");
  CHECK(n.num_gates() == 1);
}

TEST_CASE("multi-input gates decompose into 2-input trees with the same function") {
  const std::map<std::string, std::function<bool(unsigned, unsigned)>> semantics = {
      {"AND", [](unsigned v, unsigned k) { return v == (1u << k) - 1; }},
      {"NAND", [](unsigned v, unsigned k) { return v != (1u << k) - 1; }},
      {"OR", [](unsigned v, unsigned) { return v != 0; }},
      {"NOR", [](unsigned v, unsigned) { return v == 0; }},
      {"XOR", [](unsigned v, unsigned) { return std::popcount(v) % 2 == 1; }},
      {"XNOR", [](unsigned v, unsigned) { return std::popcount(v) % 2 == 0; }},
  };
  for (const auto& [name, fn] : semantics) {
    for (unsigned k = 3; k <= 8; ++k) {
      std::string text;
      std::string args;
      for (unsigned i = 0; i < k; ++i) {
        text += "INPUT(x" + std::to_string(i) + ")\n";
        args += (i ? ", x" : "x") + std::to_string(i);
      }
      text += "OUTPUT(y)\ny = " + name + "(" + args + ")\n";
      Netlist n = parse_bench(text);
      CAPTURE(name);
      CAPTURE(k);
      CHECK(n.num_gates() == k - 1);
      for (const Gate& g : n.gates()) CHECK(g.arity() == 2);
      for (unsigned v = 0; v < (1u << k); ++v) {
        Pattern out = simulate(n, Pattern::from_uint(v, k));
        CHECK(out[0] == fn(v, k));
      }
      for (const Net& net : n.nets()) {
        if (net.kind == NetKind::GateOutput && net.name != "y") CHECK(net.name.starts_with(kDecompositionPrefix));
      }
    }
  }
}

TEST_CASE("structural errors") {
  CHECK_THROWS_AS(parse_bench("INPUT(a)\nOUTPUT(y)\ny = NAND(a, y)\n"), NetlistError);
  try {
    parse_bench("INPUT(a)\nOUTPUT(y)\ny = NAND(a, y)\n");
  } catch (const NetlistError& e) {
    CHECK(e.kind() == NetlistError::Kind::Cycle);
  }
  try {
    parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a, q)\n");
    FAIL("undriven net accepted");
  } catch (const NetlistError& e) {
    CHECK(e.kind() == NetlistError::Kind::UndrivenNet);
  }
  try {
    parse_bench("INPUT(a)\nOUTPUT(y)\ny = INV(a)\ny = BUF(a)\n");
    FAIL("duplicate driver accepted");
  } catch (const NetlistError& e) {
    CHECK(e.kind() == NetlistError::Kind::DuplicateDriver);
  }
  try {
    parse_bench("INPUT(a)\nOUTPUT(y)\ny = MAJ(a, a)\n");
    FAIL("unknown gate accepted");
  } catch (const BenchParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_bench("INPUT(a\n"), BenchParseError);
  CHECK_THROWS_AS(parse_bench("INPUT(a)\nOUTPUT(y)\ny = INV(a, a)\n"), BenchParseError);
}

TEST_CASE("write_bench round trip") {
  Netlist n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)\n");
  std::string text = write_bench(n);
  std::size_t count = 0;
  for (std::size_t pos = 0; (pos = text.find("= NAND(", pos)) != std::string::npos; ++pos) ++count;
  CHECK(count == 1);
  CHECK(isomorphic(parse_bench(text), n));

  for (const char* name : {"c17", "add8", "alu4", "cmp8", "mul4", "nnx200", "rnd300", "rnd600"}) {
    CAPTURE(name);
    Netlist f = test::load(name);
    Netlist again = parse_bench(write_bench(f), f.name());
    CHECK(isomorphic(f, again));
    CHECK(write_bench(again) == write_bench(f));
  }
}

TEST_CASE("constant nets round trip through the CONST extension") {
  Netlist n = parse_bench("INPUT(a)\nOUTPUT(y)\nOUTPUT(z)\ntie1 = CONST1()\nk = const0()\ny = NAND(a, tie1)\nz = OR(a, k)\n");
  CHECK(n.net(*n.find_net("tie1")).kind == NetKind::Const1);
  std::string text = write_bench(n);
  CHECK(text.find("tie1 = CONST1()") != std::string::npos);
  CHECK(text.find("k = CONST0()") != std::string::npos);
  CHECK(isomorphic(parse_bench(text), n));
  CHECK(simulate(n, Pattern::from_string("1")) == Pattern::from_string("01"));
}

TEST_CASE("topo order") {
  Netlist chain = parse_bench("INPUT(a)\nOUTPUT(g2)\ng2 = INV(g1)\ng1 = BUF(a)\n");
  auto order = topo_order(chain);
  REQUIRE(order.size() == 2);
  CHECK(chain.gate_name(order[0]) == "g1");
  CHECK(chain.gate_name(order[1]) == "g2");

  Netlist single = parse_bench("INPUT(a)\nOUTPUT(g)\ng = INV(a)\n");
  CHECK(topo_order(single).size() == 1);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Netlist n = random_netlist({.inputs = 10, .gates = 100, .outputs = 8}, seed);
    auto o = topo_order(n);
    REQUIRE(o.size() == 100);
    std::vector<std::size_t> pos(n.num_gates());
    for (std::size_t i = 0; i < o.size(); ++i) pos[o[i]] = i;
    for (GateId g = 0; g < n.num_gates(); ++g) {
      for (NetId in : n.gate(g).inputs()) {
        if (n.net(in).driver != kNone) CHECK(pos[n.net(in).driver] < pos[g]);
      }
    }
    CHECK(o == topo_order(n));
  }
}

TEST_CASE("simulate basics") {
  Netlist nand = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)\n");
  CHECK(simulate(nand, Pattern::from_string("01"))[0] == true);
  Netlist x = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = XOR(a, b)\n");
  CHECK(simulate(x, Pattern::from_string("11"))[0] == false);
  CHECK_THROWS_AS(simulate(x, Pattern::from_string("1")), std::invalid_argument);
}

TEST_CASE("simulate agrees with a recursive evaluator") {
  Netlist n = random_netlist({.inputs = 6, .gates = 20, .outputs = 4}, 42);
  Rng rng(7);
  std::vector<Pattern> batch;
  for (int i = 0; i < 64; ++i) {
    Pattern p(n.inputs().size());
    for (std::size_t k = 0; k < p.size(); ++k) p.set(k, rng.chance(0.5));
    CHECK(simulate(n, p) == reference_eval(n, p));
    batch.push_back(p);
  }
  auto outs = simulate_batch(n, batch);
  for (std::size_t i = 0; i < batch.size(); ++i) CHECK(outs[i] == reference_eval(n, batch[i]));
}

TEST_CASE("simulate_batch equals repeated simulate") {
  Netlist n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\nOUTPUT(z)\ny = AND(a, b)\nz = XNOR(a, y)\n");
  CHECK(simulate_batch(n, std::vector<Pattern>{}).empty());
  std::vector<Pattern> one{Pattern::from_string("10")};
  CHECK(simulate_batch(n, one)[0] == simulate(n, one[0]));
  std::vector<Pattern> many;
  Rng rng(3);
  for (int i = 0; i < 100000; ++i) many.push_back(Pattern::from_uint(rng.below(4), 2));
  auto outs = simulate_batch(n, many);
  REQUIRE(outs.size() == many.size());
  bool all = true;
  for (std::size_t i = 0; i < many.size(); ++i) all = all && outs[i] == simulate(n, many[i]);
  CHECK(all);
}

TEST_CASE("benchmark fixtures compute what their names say") {
  Netlist add = test::load("add8");
  Netlist mul = test::load("mul4");
  Rng rng(11);
  std::vector<std::string> a8, b8, a4, b4;
  for (int i = 0; i < 8; ++i) {
    a8.push_back("a" + std::to_string(i));
    b8.push_back("b" + std::to_string(i));
  }
  for (int i = 0; i < 4; ++i) {
    a4.push_back("a" + std::to_string(i));
    b4.push_back("b" + std::to_string(i));
  }
  for (int t = 0; t < 200; ++t) {
    Pattern p(add.inputs().size());
    for (std::size_t k = 0; k < p.size(); ++k) p.set(k, rng.chance(0.5));
    const std::uint64_t sum = bus(p, add, a8) + bus(p, add, b8) + bus(p, add, {"cin"});
    CHECK(simulate(add, p).to_uint() == sum);
  }
  for (unsigned v = 0; v < 256; ++v) {
    Pattern p = Pattern::from_uint(v, mul.inputs().size());
    CHECK(simulate(mul, p).to_uint() == bus(p, mul, a4) * bus(p, mul, b4));
  }
}

TEST_CASE("equivalence checking") {
  Netlist a = test::load("c17");
  CHECK(equivalent(a, a, EquivalenceMode::exhaustive()).equal);
  Netlist nand = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NAND(a, a)\n");
  Netlist inv = parse_bench("INPUT(a)\nOUTPUT(y)\ny = INV(a)\n");
  auto r = equivalent(nand, inv, EquivalenceMode::exhaustive());
  CHECK(r.equal);
  CHECK(r.complete);

  Netlist x = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n");
  Netlist y = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = OR(a, b)\n");
  auto d = equivalent(x, y, EquivalenceMode::exhaustive());
  CHECK_FALSE(d.equal);
  REQUIRE(d.counterexample);
  CHECK(d.counterexample->to_string() == "10");

  auto rnd = equivalent(x, y, EquivalenceMode::random(1000, 5));
  CHECK_FALSE(rnd.equal);

  Netlist renamed = parse_bench("INPUT(a)\nINPUT(c)\nOUTPUT(y)\ny = AND(a, c)\n");
  CHECK_THROWS_AS(equivalent(x, renamed, EquivalenceMode::exhaustive()), NetlistError);

  Netlist swapped = parse_bench("INPUT(b)\nINPUT(a)\nOUTPUT(y)\ny = AND(b, a)\n");
  CHECK(equivalent(x, swapped, EquivalenceMode::exhaustive()).equal);
}
