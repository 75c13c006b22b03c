#include <doctest.h>

#include <cmath>

#include "bcamo/keyed.hpp"
#include "bcamo/random_netlist.hpp"
#include "test_util.hpp"

using namespace bcamo;

namespace {

Netlist single_gate(GateFunc f) {
  NetlistBuilder b("single");
  NetId a = b.add_input("a");
  NetId c = b.add_input("b");
  b.add_input("w");
  b.add_input("x");
  b.add_gate(f, a, c, "y");
  b.add_output(b.net("y"));
  return b.build();
}

CamoNetlist camo_single(GateFunc f) {
  Netlist n = single_gate(f);
  return apply_final_primitive(n, TargetSet{"single", 1.0, 1, {"y"}}, {});
}

}  // namespace

TEST_CASE("selector decodes every code") {
  // A 4-option pin: each of the four codes must route the matching candidate.
  CamoNetlist c = camo_single(GateFunc::And);
  auto conv = to_keyed(c);
  const KeyedNetlist& k = conv.keyed;
  REQUIRE(k.key_width() == 4);
  REQUIRE(k.decisions.size() == 2);
  for (unsigned code0 = 0; code0 < 4; ++code0) {
    for (unsigned code1 = 0; code1 < 4; ++code1) {
      Key key = Key::from_uint(0, 4);
      key.set(0, (code0 >> 1) & 1u);
      key.set(1, code0 & 1u);
      key.set(2, (code1 >> 1) & 1u);
      key.set(3, code1 & 1u);
      Resolution r = decode_key(k, key);
      CHECK(r.pins == std::vector<unsigned>{code0, code1});
      CHECK(encode_key(k, r) == key);
      CHECK(test::same_function(apply_key(k, key), resolve(c, r)));
    }
  }
}

TEST_CASE("key widths per scheme") {
  auto fp = to_keyed(camo_single(GateFunc::Nand));
  CHECK(fp.keyed.key_width() == 4);
  for (auto [k, bits] : {std::pair{2u, 1u}, {3u, 2u}, {4u, 2u}, {8u, 3u}, {16u, 4u}}) {
    Netlist n = single_gate(GateFunc::Xor);
    auto conv = to_keyed(apply_ambiguous_scheme(n, TargetSet{"single", 1.0, 1, {"y"}}, k, 1));
    CHECK(conv.keyed.key_width() == bits);
    CHECK(test::same_function(apply_key(conv.keyed, conv.correct_key), n));
  }
  Netlist r = test::load("rnd300");
  auto chen = to_keyed(apply_chen_mux(r, 30, 2));
  CHECK(chen.keyed.key_width() == 30);
}

TEST_CASE("ambiguous codes past the option count alias to option 0") {
  Netlist n = single_gate(GateFunc::Nor);
  CamoNetlist c = apply_ambiguous_scheme(n, TargetSet{"single", 1.0, 1, {"y"}}, 3, 5);
  auto conv = to_keyed(c);
  REQUIRE(conv.keyed.key_width() == 2);
  Netlist zero = apply_key(conv.keyed, Key::from_string("00"));
  Netlist three = apply_key(conv.keyed, Key::from_string("11"));
  CHECK(isomorphic(zero, three));
  CHECK(decode_option(conv.keyed.decisions[0], Key::from_string("11")) == 0);
}

TEST_CASE("a NAND resolved to (1, real b) computes NOT b") {
  CamoNetlist c = camo_single(GateFunc::Nand);
  auto conv = to_keyed(c);
  Resolution r = true_resolution(c);
  for (unsigned i = 0; i < 4; ++i) {
    if (c.pin_choices[0].candidates[i].role == CandidateRole::Const1) r.pins[0] = i;
  }
  Netlist res = apply_key(conv.keyed, encode_key(conv.keyed, r));
  for (unsigned row = 0; row < 16; ++row) {
    Pattern p = Pattern::from_uint(row, 4);
    CHECK(simulate(res, p)[0] == !p[1]);
  }
  CHECK(res.inputs().size() == 4);
  CHECK(res.net(res.outputs()[0]).name == "y");
}

TEST_CASE("correct key restores the original across schemes") {
  for (const char* bench : {"c17", "alu4", "add8"}) {
    Netlist n = test::load(bench);
    for (const char* scheme : {"final-primitive", "ambiguous-2", "ambiguous-3", "ambiguous-16", "chen-mux"}) {
      for (double scale : {0.0, 0.1, 0.5, 1.0}) {
        CAPTURE(bench);
        CAPTURE(scheme);
        CAPTURE(scale);
        PipelineOptions opts;
        opts.scheme = SchemeId::parse(scheme);
        opts.scale = scale;
        opts.seed = 3;
        auto r = camouflage(n, opts);
        auto conv = to_keyed(r.camo);
        CHECK(conv.keyed.circuit.inputs().size() == n.inputs().size() + conv.keyed.key_width());
        Netlist restored = apply_key(conv.keyed, conv.correct_key);
        CHECK(test::same_function(n, restored));
        CHECK(restored.inputs().size() == n.inputs().size());
      }
    }
  }
}

TEST_CASE("random keys give valid circuits") {
  Netlist n = test::load("cmp8");
  PipelineOptions opts;
  opts.scale = 1.0;
  opts.seed = 8;
  auto conv = to_keyed(camouflage(n, opts).camo);
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    Key key(conv.keyed.key_width());
    for (std::size_t b = 0; b < key.size(); ++b) key.set(b, rng.chance(0.5));
    Netlist res = apply_key(conv.keyed, key);
    CHECK(topo_order(res).size() == res.num_gates());
    CHECK(res.outputs().size() == n.outputs().size());
  }
  CHECK_THROWS_AS(apply_key(conv.keyed, Key(3)), std::invalid_argument);
}

TEST_CASE("keyed bench round trip") {
  Netlist n = test::load("c17");
  PipelineOptions opts;
  opts.scale = 0.5;
  opts.seed = 2;
  auto conv = to_keyed(camouflage(n, opts).camo);
  std::string text = write_bench(conv.keyed.circuit);
  CHECK(text.find("INPUT(keyinput0)") != std::string::npos);
  KeyedNetlist loaded = keyed_from_netlist(parse_bench(text, "c17"));
  CHECK(loaded.key_width() == conv.keyed.key_width());
  CHECK(loaded.functional_inputs.size() == n.inputs().size());
  CHECK(test::same_function(apply_key(loaded, conv.correct_key), n));
}

TEST_CASE("key space statistics") {
  for (GateFunc f : {GateFunc::Xor, GateFunc::Xnor}) {
    auto s = keyspace_stats(camo_single(f));
    REQUIRE(s.gates.size() == 1);
    CHECK(s.gates[0].distinct_functions == 14);
    CHECK(s.key_width == 4);
  }
  for (GateFunc f : {GateFunc::And, GateFunc::Nand, GateFunc::Or, GateFunc::Nor}) {
    auto s = keyspace_stats(camo_single(f));
    CHECK(s.gates[0].distinct_functions == 10);
    CHECK(s.log2_solution_space == doctest::Approx(std::log2(10.0)));
  }
  Netlist n = test::load("c17");
  PipelineOptions opts;
  auto empty = keyspace_stats(camouflage(n, opts).camo);
  CHECK(empty.key_width == 0);
  CHECK(empty.log2_solution_space == 0.0);

  opts.scale = 1.0;
  auto full = camouflage(test::load("alu4"), opts);
  auto stats = keyspace_stats(full.camo);
  CHECK(stats.key_width == to_keyed(full.camo).keyed.key_width());
  for (const auto& g : stats.gates) CHECK(g.distinct_functions <= (std::uint64_t{1} << g.key_bits));

  Netlist x = single_gate(GateFunc::Xor);
  auto amb = keyspace_stats(apply_ambiguous_scheme(x, TargetSet{"s", 1.0, 1, {"y"}}, 16, 1));
  CHECK(amb.gates[0].distinct_functions == 16);
}
