// Acceptance checks; prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bcamo/attack.hpp"
#include "bcamo/bench.hpp"
#include "bcamo/camo.hpp"
#include "bcamo/camo_io.hpp"
#include "bcamo/cli.hpp"
#include "bcamo/keyed.hpp"
#include "bcamo/metrics.hpp"
#include "bcamo/random_netlist.hpp"
#include "bcamo/split.hpp"
#include "test_util.hpp"

using namespace bcamo;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double median_of(std::vector<double> v) { return median(std::move(v)); }

KeyedConversion keyed_instance(const Netlist& n, const std::string& scheme, double scale, std::uint64_t seed,
                               std::optional<std::size_t> chen = std::nullopt) {
  PipelineOptions po;
  po.scheme = SchemeId::parse(scheme);
  po.scale = scale;
  po.seed = seed;
  po.chen_dummies = chen;
  return to_keyed(camouflage(n, po).camo);
}

bool equivalent_to(const Netlist& a, const Netlist& b) {
  if (a.inputs().size() <= kMaxExhaustiveInputs) return equivalent(a, b, EquivalenceMode::exhaustive()).equal;
  VerifyResult r = sat_equivalent(a, b);
  return r.method == "sat" && r.equivalent;
}

// ---------------------------------------------------------------------------

Verdict criterion1() {
  Verdict v;
  const auto t0 = Clock::now();
  std::ostringstream out, err;
  const int code = cli::run({"limits", "--counts", std::string(BCAMO_DATA_DIR) + "/cell_counts.csv"}, out, err);
  if (code != 0) {
    v.fail("limits exited with " + std::to_string(code) + ": " + err.str());
    return v;
  }
  // Reference values from the published limits table.
  const std::map<std::string, std::vector<double>> expected = {{"b14_C", {68.89, 33.62, 50.01, 100.0}},
                                                               {"b15_C", {63.44, 31.46, 41.81, 100.0}}};
  const auto rows = parse_cell_counts(read_text_file(std::string(BCAMO_DATA_DIR) + "/cell_counts.csv"));
  const LimitScheme schemes[] = {LimitScheme::XorType, LimitScheme::XorNandNor, LimitScheme::Threshold,
                                 LimitScheme::Ours};
  std::size_t checked = 0;
  for (const auto& row : rows) {
    auto it = expected.find(row.benchmark);
    if (it == expected.end()) continue;
    for (std::size_t i = 0; i < 4; ++i) {
      const double got = camo_limit(row, schemes[i]);
      ++checked;
      if (std::abs(got - it->second[i]) > 0.01 + 1e-9) {
        v.fail(row.benchmark + " " + std::string(to_string(schemes[i])) + " = " + fmt("%.4f", got));
      }
    }
    // The CLI table must agree with the same reference values.
    const std::string prefix = row.benchmark + "," + std::to_string(row.total) + ",";
    const std::size_t at = out.str().find("\n" + prefix);
    if (at == std::string::npos) {
      v.fail("CLI table lacks " + row.benchmark);
      continue;
    }
    std::istringstream cells(out.str().substr(at + 1 + prefix.size()));
    for (std::size_t i = 0; i < 4; ++i) {
      std::string cell;
      std::getline(cells, cell, i < 3 ? ',' : '\n');
      if (std::abs(std::stod(cell) - it->second[i]) > 0.01 + 1e-9) v.fail("CLI " + row.benchmark + " cell " + cell);
    }
  }
  if (checked != 8) v.fail("fixture rows missing");
  const double t = seconds_since(t0);
  if (t >= 1.0) v.fail("took " + fmt("%.2f", t) + " s");
  if (v.pass) v.detail = "b14_C and b15_C limits within 0.01 points, " + fmt("%.3f", t) + " s";
  return v;
}

// Distinct functions over (a, b, w, x) of a gate whose pins choose from
// {a, w, 0, 1} and {b, x, 0, 1}.
std::size_t enumerated_functions(GateFunc f) {
  std::set<std::uint16_t> seen;
  for (unsigned c0 = 0; c0 < 4; ++c0) {
    for (unsigned c1 = 0; c1 < 4; ++c1) {
      std::uint16_t tt = 0;
      for (unsigned row = 0; row < 16; ++row) {
        const bool a = row & 1, b = row & 2, w = row & 4, x = row & 8;
        const bool p0[4] = {a, w, false, true};
        const bool p1[4] = {b, x, false, true};
        if (eval(f, p0[c0], p1[c1])) tt |= static_cast<std::uint16_t>(1u << row);
      }
      seen.insert(tt);
    }
  }
  return seen.size();
}

// Distinct functions of the keyed model over all keys.
std::size_t keyed_functions(GateFunc f) {
  NetlistBuilder b("cell");
  for (const char* pi : {"a", "b", "w", "x"}) b.add_input(pi);
  b.add_gate(f, b.net("a"), b.net("b"), "y");
  b.add_output(b.net("y"));
  const Netlist n = b.build();
  const TargetSet t{"cell", 1.0, 1, {"y"}};
  const KeyedConversion kc = to_keyed(apply_final_primitive(n, t, {}));
  std::set<std::uint64_t> seen;
  const std::size_t w = kc.keyed.key_width();
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << w); ++k) {
    const Netlist r = apply_key(kc.keyed, Pattern::from_uint(k, w));
    std::uint64_t tt = 0;
    for (unsigned row = 0; row < 16; ++row) {
      if (simulate(r, Pattern::from_uint(row, 4))[0]) tt |= std::uint64_t{1} << row;
    }
    seen.insert(tt);
  }
  return seen.size();
}

Verdict criterion2() {
  Verdict v;
  const auto t0 = Clock::now();
  for (GateFunc f : {GateFunc::Xor, GateFunc::Xnor, GateFunc::And, GateFunc::Nand, GateFunc::Or, GateFunc::Nor}) {
    const std::size_t want = (f == GateFunc::Xor || f == GateFunc::Xnor) ? 14 : 10;
    const std::size_t oracle = enumerated_functions(f);
    const std::size_t model = keyed_functions(f);
    if (oracle != want || model != want) {
      v.fail(std::string(to_string(f)) + ": enumerated " + std::to_string(oracle) + ", keyed " +
             std::to_string(model) + ", expected " + std::to_string(want));
    }
  }
  const double t = seconds_since(t0);
  if (t >= 1.0) v.fail("took " + fmt("%.2f", t) + " s");
  if (v.pass) v.detail = "XOR/XNOR 14, AND/NAND/OR/NOR 10, " + fmt("%.3f", t) + " s";
  return v;
}

Verdict criterion3() {
  Verdict v;
  const auto t0 = Clock::now();
  std::size_t runs = 0, failures = 0;
  for (const char* bench : {"alu4", "mul4", "rnd600"}) {
    const Netlist n = test::load(bench);
    for (const char* scheme : {"final-primitive", "ambiguous-3", "ambiguous-16", "chen-mux"}) {
      for (double scale : {0.2, 0.6, 1.0}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
          const KeyedConversion kc = keyed_instance(n, scheme, scale, seed);
          ++runs;
          if (!equivalent_to(n, apply_key(kc.keyed, kc.correct_key))) {
            ++failures;
            v.fail(std::string(bench) + " " + scheme + " scale " + fmt("%.1f", scale) + " seed " +
                   std::to_string(seed));
          }
        }
      }
    }
  }
  const double t = seconds_since(t0);
  if (t >= 600.0) v.fail("took " + fmt("%.0f", t) + " s");
  if (v.pass) v.detail = std::to_string(runs) + " instances, 0 failures, " + fmt("%.1f", t) + " s";
  return v;
}

Verdict criterion4() {
  Verdict v;
  const auto t0 = Clock::now();
  std::size_t cells = 0, solved = 0;
  for (const char* bench : {"cmp8", "alu4", "mul4"}) {
    const Netlist n = test::load(bench);
    if (n.inputs().size() > 16 || n.num_gates() > 300) v.fail(std::string(bench) + " exceeds the size bounds");
    const double bound = std::ldexp(1.0, static_cast<int>(n.inputs().size()));
    for (double scale : {0.1, 0.2, 0.3}) {
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const KeyedConversion kc = keyed_instance(n, "final-primitive", scale, seed);
        Oracle oracle(n);
        AttackConfig cfg;
        cfg.timeout_s = 120.0;
        cfg.seed = seed;
        const AttackResult r = seminal_attack(kc.keyed, oracle, cfg);
        ++cells;
        const std::string where = std::string(bench) + " scale " + fmt("%.1f", scale) + " seed " + std::to_string(seed);
        if (r.status != AttackStatus::Solved || !r.key) {
          v.fail(where + ": " + std::string(to_string(r.status)));
          continue;
        }
        if (!equivalent_to(n, apply_key(kc.keyed, *r.key))) v.fail(where + ": wrong key");
        if (static_cast<double>(r.iterations) > bound) v.fail(where + ": iterations above 2^|PIs|");
        ++solved;
      }
    }
  }
  const double t = seconds_since(t0);
  if (t >= 900.0) v.fail("took " + fmt("%.0f", t) + " s");
  if (v.pass) {
    v.detail = std::to_string(solved) + "/" + std::to_string(cells) + " cells solved with verified keys on cmp8, alu4, mul4, " +
               fmt("%.1f", t) + " s";
  }
  return v;
}

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = (static_cast<double>(i + j) / 2.0) + 1.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i] / n;
    my += ry[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double median_iterations(const Netlist& n, const std::string& scheme, double scale, Verdict& v) {
  std::vector<double> its;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const KeyedConversion kc = keyed_instance(n, scheme, scale, seed);
    Oracle oracle(n);
    AttackConfig cfg;
    cfg.timeout_s = 120.0;
    cfg.seed = seed;
    const AttackResult r = seminal_attack(kc.keyed, oracle, cfg);
    if (r.status != AttackStatus::Solved) v.fail(scheme + " seed " + std::to_string(seed) + " not solved");
    its.push_back(static_cast<double>(r.iterations));
  }
  return median_of(its);
}

Verdict criterion5() {
  Verdict v;
  const Netlist n = test::load("mul4");
  std::vector<double> scales = {0.1, 0.2, 0.3, 0.4};
  std::vector<double> med;
  for (double s : scales) med.push_back(median_iterations(n, "final-primitive", s, v));
  for (std::size_t i = 1; i < med.size(); ++i) {
    if (med[i] < med[i - 1]) v.fail("median iterations decrease from scale " + fmt("%.1f", scales[i - 1]));
  }
  const double rho = spearman(scales, med);
  if (rho < 0.8) v.fail("Spearman rho " + fmt("%.3f", rho));

  const double a2 = median_iterations(n, "ambiguous-2", 0.1, v);
  const double a3 = median_iterations(n, "ambiguous-3", 0.1, v);
  const double a16 = median_iterations(n, "ambiguous-16", 0.1, v);
  if (!(a2 <= a3 && a3 <= a16)) v.fail("ambiguous medians out of order");
  std::string scale_medians;
  for (double m : med) scale_medians += (scale_medians.empty() ? "" : "/") + fmt("%g", m);
  const std::string d = "mul4 medians " + scale_medians + " for 10-40%, rho " + fmt("%.2f", rho) +
                        "; ambiguous-2/3/16 at 10%: " + fmt("%g", a2) + "/" + fmt("%g", a3) + "/" + fmt("%g", a16);
  if (v.pass) {
    v.detail = d;
  } else {
    v.detail += " (" + d + ")";
  }
  return v;
}

Verdict criterion6() {
  Verdict v;
  const Netlist n = test::load("rnd2000");
  std::size_t total = 0, solved = 0;
  std::string per_n;
  for (std::size_t dummies : {30u, 100u, 500u}) {
    std::size_t ok = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const KeyedConversion kc = keyed_instance(n, "chen-mux", 0.0, seed, dummies);
      Oracle oracle(n);
      AttackConfig cfg;
      cfg.timeout_s = 60.0;
      cfg.seed = seed;
      const AttackResult r = seminal_attack(kc.keyed, oracle, cfg);
      ++total;
      worst = std::max(worst, r.wall_time_s);
      if (r.status == AttackStatus::Solved && r.key && equivalent_to(n, apply_key(kc.keyed, *r.key))) ++ok;
    }
    solved += ok;
    if (ok < 9) v.fail("N=" + std::to_string(dummies) + " solved only " + std::to_string(ok) + "/10");
    per_n += (per_n.empty() ? "" : ", ") + ("N=" + std::to_string(dummies) + " " + std::to_string(ok) + "/10 (max " +
                                            fmt("%.1f", worst) + " s)");
  }
  if (static_cast<double>(solved) < 0.95 * static_cast<double>(total)) v.fail("overall solve rate below 95%");
  if (v.pass) {
    v.detail = "rnd2000: " + per_n;
  } else {
    v.detail += " (" + per_n + ")";
  }
  return v;
}

Verdict criterion7() {
  Verdict v;
  struct Candidate {
    const char* bench;
    const char* scheme;
    double scale;
  };
  const Candidate candidates[] = {{"c17", "final-primitive", 0.34}, {"mul4", "ambiguous-16", 0.05},
                                  {"alu4", "ambiguous-4", 0.1}, {"cmp8", "ambiguous-8", 0.05}};
  std::size_t instances = 0, double_iterations = 0;
  for (const Candidate& c : candidates) {
    const Netlist n = test::load(c.bench);
    std::size_t taken = 0;
    for (std::uint64_t seed = 1; seed <= 40 && taken < 5; ++seed) {
      const KeyedConversion kc = keyed_instance(n, c.scheme, c.scale, seed);
      const std::size_t w = kc.keyed.key_width();
      if (w == 0 || w > 16) continue;
      ++taken;
      ++instances;
      std::vector<Key> consistent;
      for (std::uint64_t k = 0; k < (std::uint64_t{1} << w); ++k) consistent.push_back(Pattern::from_uint(k, w));
      const std::string where = std::string(c.bench) + " " + c.scheme + " seed " + std::to_string(seed);
      AttackConfig cfg;
      cfg.seed = seed;
      cfg.timeout_s = 300.0;
      cfg.observer = [&](const IterationInfo& it) {
        const std::size_t before = consistent.size();
        std::erase_if(consistent, [&](const Key& key) {
          return simulate(kc.keyed.circuit, keyed_pattern(kc.keyed, it.input, key)) != it.response;
        });
        const std::size_t removed = before - consistent.size();
        if (it.double_dip) {
          ++double_iterations;
          if (removed < 2) v.fail(where + ": double iteration removed " + std::to_string(removed) + " keys");
        } else if (removed < 1) {
          v.fail(where + ": iteration removed no key");
        }
      };
      Oracle oracle(n);
      const AttackResult r = double_dip_attack(kc.keyed, oracle, cfg);
      if (r.status != AttackStatus::Solved || !r.key) {
        v.fail(where + ": " + std::string(to_string(r.status)));
        continue;
      }
      if (!verify_key(kc.keyed, *r.key, n).equivalent) v.fail(where + ": final key does not verify");
    }
  }
  if (instances < 20) v.fail("only " + std::to_string(instances) + " instances with key width 1..16");
  if (double_iterations == 0) v.fail("no double iterations observed");
  if (v.pass) {
    v.detail = std::to_string(instances) + " instances, " + std::to_string(double_iterations) +
               " double iterations, zero violations";
  }
  return v;
}

struct SplitSample {
  double ccr_orig = 0, ccr_camo = 0;
  std::size_t ci_orig = 0, ci_camo = 0;
  HdOerReport hd_camo;
  std::vector<CroutingMetrics> by_scale;  // original, then 20..100%
};

SplitSample split_sample(const Netlist& n, std::uint64_t seed, double fraction, bool with_hd) {
  SplitSample s;
  const Placement p = place(n, {seed});
  const SplitPolicy policy = SplitPolicy::length(fraction * (p.width + p.height));
  MatchOptions mo;
  mo.seed = seed;
  const SplitView vo = make_split_view(n, p, policy);
  s.ccr_orig = proximity_match(vo, mo).ccr_percent;
  s.ci_orig = vo.cut_inputs;
  s.by_scale.push_back(crouting_metrics(vo));
  for (double scale : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    PipelineOptions po;
    po.scale = scale;
    po.seed = seed;
    const CamoNetlist c = camouflage(n, po).camo;
    const Placement cp = extend_placement(n, p, c.base, seed);
    const SplitView vc = make_split_view(c.base, cp, policy, &c);
    s.by_scale.push_back(crouting_metrics(vc));
    if (scale == 1.0) {
      const MatchResult m = proximity_match(vc, mo);
      s.ccr_camo = m.ccr_percent;
      s.ci_camo = vc.cut_inputs;
      if (with_hd) s.hd_camo = hd_oer(n, m.proposed, 100000, seed);
    }
  }
  return s;
}

Verdict criterion8() {
  Verdict v;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Netlist n = random_netlist({10, 60, 6}, seed);
    const HdOerReport r = hd_oer(n, n, 1000, seed);
    if (r.hd_percent != 0.0 || r.oer_percent != 0.0) v.fail("hd_oer(a, a) nonzero for seed " + std::to_string(seed));
  }
  NetlistBuilder ba("two"), bb("two");
  for (NetlistBuilder* b : {&ba, &bb}) {
    NetId x = b->add_input("x");
    NetId y = b->add_input("y");
    b->add_gate(GateFunc::And, x, y, "o1");
    b->add_gate(b == &ba ? GateFunc::Or : GateFunc::Nor, x, y, "o2");
    b->add_output(b->net("o1"));
    b->add_output(b->net("o2"));
  }
  const HdOerReport inv = hd_oer(ba.build(), bb.build());
  if (inv.hd_percent != 50.0 || inv.oer_percent != 100.0) v.fail("inverted-output case not 50/100");

  std::size_t inside = 0;
  std::string per;
  for (const char* bench : {"mul4", "alu4", "rnd300", "rnd600"}) {
    const Netlist n = test::load(bench);
    std::vector<double> hd, oer;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const SplitSample s = split_sample(n, seed, 0.1, true);
      hd.push_back(s.hd_camo.hd_percent);
      oer.push_back(s.hd_camo.oer_percent);
    }
    const double mh = median_of(hd), mo = median_of(oer);
    const bool ok = mh >= 35.0 && mh <= 65.0 && mo > 95.0;
    inside += ok ? 1 : 0;
    per += (per.empty() ? "" : ", ") + std::string(bench) + " HD " + fmt("%.1f", mh) + " OER " + fmt("%.1f", mo);
  }
  if (inside < 3) v.fail("envelope met on " + std::to_string(inside) + " benchmarks");
  if (v.pass) {
    v.detail = "identities exact; medians at 100%: " + per;
  } else {
    v.detail += " (" + per + ")";
  }
  return v;
}

Verdict criterion9() {
  Verdict v;
  std::string per;
  for (double fraction : {0.1, 0.25}) {
    for (const char* bench : {"mul4", "alu4", "rnd300"}) {
      const Netlist n = test::load(bench);
      std::vector<double> orig, camo;
      std::size_t ci_orig = 0, ci_camo = 0;
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const SplitSample s = split_sample(n, seed, fraction, false);
        orig.push_back(s.ccr_orig);
        camo.push_back(s.ccr_camo);
        ci_orig += s.ci_orig;
        ci_camo += s.ci_camo;
        const std::string where = std::string(bench) + " T=" + fmt("%g", fraction) + " seed " + std::to_string(seed);
        if (s.ci_camo < 3 * s.ci_orig) v.fail(where + ": cut inputs grew less than 3x");
        for (std::size_t i = 1; i < s.by_scale.size(); ++i) {
          const CroutingMetrics& a = s.by_scale[i - 1];
          const CroutingMetrics& b = s.by_scale[i];
          if (b.vpins < a.vpins || b.e_ls < a.e_ls || b.fom < a.fom) {
            v.fail(where + ": crouting metrics decrease at step " + std::to_string(i));
          }
        }
      }
      const double mo = median_of(orig), mc = median_of(camo);
      if (!(mc < mo)) v.fail(std::string(bench) + ": camouflaged CCR not below original");
      per += (per.empty() ? "" : ", ") + std::string(bench) + "@" + fmt("%g", fraction) + " CCR " + fmt("%.1f", mo) +
             "->" + fmt("%.1f", mc) + " CI x" + fmt("%.1f", double(ci_camo) / double(std::max<std::size_t>(1, ci_orig)));
    }
  }
  if (v.pass) {
    v.detail = per;
  } else {
    v.detail += " (" + per + ")";
  }
  return v;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_text_file(e.path());
  }
  return files;
}

Verdict criterion10() {
  Verdict v;
  const std::string b = BCAMO_BENCH_DIR;
  const std::vector<std::vector<std::string>> commands = {
      {"camouflage", "--bench", b + "/mul4.bench", "--scale", "0.5", "--seed", "7"},
      {"attack", "--bench", b + "/c17.bench," + b + "/alu4.bench", "--schemes", "final-primitive,ambiguous-3",
       "--scales", "10%,20%", "--seeds", "1-3", "--attacks", "seminal,double-dip", "--omit-timing"},
      {"split", "--bench", b + "/mul4.bench", "--seeds", "1-2", "--hd-patterns", "5000", "--omit-timing"},
  };
  std::size_t files = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const fs::path first = fs::path(BCAMO_TEST_TMP) / ("run" + std::to_string(i) + "a");
    const fs::path second = fs::path(BCAMO_TEST_TMP) / ("run" + std::to_string(i) + "b");
    fs::remove_all(first);
    fs::remove_all(second);
    auto args = commands[i];
    args.push_back("--out");
    std::ostringstream out, err;
    args.push_back(first.string());
    if (cli::run(args, out, err) != 0) v.fail(commands[i][0] + " failed: " + err.str());
    auto a = snapshot(first);
    // Re-run into the same directory after moving the first result aside.
    fs::rename(first, second);
    if (cli::run(args, out, err) != 0) v.fail(commands[i][0] + " failed on rerun: " + err.str());
    auto c = snapshot(first);
    if (a != c || a != snapshot(second)) v.fail(commands[i][0] + ": outputs differ between runs");
    if (!a.contains("config.ini")) v.fail(commands[i][0] + ": no resolved config");
    files += a.size();
  }
  if (v.pass) v.detail = "camouflage, attack, split reruns byte-identical over " + std::to_string(files) + " files";
  return v;
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  fs::create_directories(BCAMO_TEST_TMP);
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"camouflaging-limit fixture", criterion1},     {"function-set enumeration", criterion2},
      {"correct-key equivalence", criterion3},        {"attack soundness and recovery", criterion4},
      {"hardness ordering", criterion5},              {"chen-scheme vulnerability", criterion6},
      {"double-dip progress invariant", criterion7},  {"HD/OER identities and envelope", criterion8},
      {"proximity direction", criterion9},            {"determinism", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %zu (%s): %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                v.detail.c_str(), seconds_since(t0));
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
