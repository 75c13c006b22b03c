#include <doctest.h>

#include <vector>

#include "bcamo/rng.hpp"
#include "bcamo/sat.hpp"

using namespace bcamo;
using namespace bcamo::sat;

namespace {

using Cnf = std::vector<std::vector<Lit>>;

bool satisfies(const Cnf& f, std::uint64_t assignment) {
  for (const auto& c : f) {
    bool any = false;
    for (Lit l : c) any = any || (((assignment >> l.var()) & 1u) != l.negated());
    if (!any) return false;
  }
  return true;
}

// Reference: enumerate every assignment.
bool brute_force(const Cnf& f, unsigned vars, const std::vector<Lit>& assumptions = {}) {
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << vars); ++a) {
    bool ok = true;
    for (Lit l : assumptions) ok = ok && (((a >> l.var()) & 1u) != l.negated());
    if (ok && satisfies(f, a)) return true;
  }
  return false;
}

Cnf random_cnf(Rng& rng, unsigned vars, unsigned clauses, unsigned width) {
  Cnf f;
  for (unsigned i = 0; i < clauses; ++i) {
    std::vector<Lit> c;
    for (unsigned k = 0; k < width; ++k) c.push_back(Lit::make(static_cast<Var>(rng.below(vars)), rng.chance(0.5)));
    f.push_back(c);
  }
  return f;
}

std::uint64_t model_bits(const Solver& s, unsigned vars) {
  std::uint64_t a = 0;
  for (unsigned v = 0; v < vars; ++v) {
    if (s.model_value(Var(v))) a |= std::uint64_t{1} << v;
  }
  return a;
}

}  // namespace

TEST_CASE("trivial instances") {
  Solver s;
  CHECK(s.solve() == Result::Sat);
  Var a = s.new_var();
  s.add_clause({Lit::make(a)});
  CHECK(s.solve() == Result::Sat);
  CHECK(s.model_value(a));
  CHECK(s.solve({Lit::make(a, true)}) == Result::Unsat);
  CHECK(s.okay());
  CHECK_FALSE(s.add_clause({Lit::make(a, true)}));
  CHECK(s.solve() == Result::Unsat);

  Solver e;
  Var b = e.new_var();
  CHECK_FALSE(e.add_clause(std::span<const Lit>{}));
  (void)b;
}

TEST_CASE("random 3-SAT agrees with brute force") {
  Rng rng(2024);
  int sat = 0;
  int unsat = 0;
  for (int t = 0; t < 400; ++t) {
    const unsigned vars = 4 + static_cast<unsigned>(rng.below(11));
    const unsigned clauses = static_cast<unsigned>(vars * (3.0 + rng.unit() * 3.0));
    Cnf f = random_cnf(rng, vars, clauses, 3);
    Solver s;
    for (unsigned v = 0; v < vars; ++v) s.new_var();
    for (const auto& c : f) s.add_clause(c);
    const bool expect = brute_force(f, vars);
    const Result r = s.solve();
    REQUIRE(r != Result::Unknown);
    CHECK((r == Result::Sat) == expect);
    if (r == Result::Sat) {
      CHECK(satisfies(f, model_bits(s, vars)));
      ++sat;
    } else {
      ++unsat;
    }
  }
  CHECK(sat > 20);
  CHECK(unsat > 20);
}

TEST_CASE("assumptions and incremental clauses") {
  Rng rng(77);
  for (int t = 0; t < 200; ++t) {
    const unsigned vars = 10;
    Cnf f = random_cnf(rng, vars, 30, 3);
    Solver s;
    for (unsigned v = 0; v < vars; ++v) s.new_var();
    Cnf added;
    for (const auto& c : f) {
      s.add_clause(c);
      added.push_back(c);
      if (rng.chance(0.2)) {
        std::vector<Lit> assume;
        for (int k = 0; k < 3; ++k) assume.push_back(Lit::make(static_cast<Var>(rng.below(vars)), rng.chance(0.5)));
        const Result r = s.solve(assume);
        CHECK((r == Result::Sat) == brute_force(added, vars, assume));
        if (r == Result::Sat) {
          const std::uint64_t m = model_bits(s, vars);
          CHECK(satisfies(added, m));
          for (Lit l : assume) CHECK(((m >> l.var()) & 1u) != l.negated());
        }
      }
    }
    CHECK((s.solve() == Result::Sat) == brute_force(added, vars));
  }
}

TEST_CASE("pigeonhole instances are unsatisfiable") {
  for (unsigned holes = 2; holes <= 6; ++holes) {
    const unsigned pigeons = holes + 1;
    Solver s;
    auto var = [&](unsigned p, unsigned h) { return Var(p * holes + h); };
    for (unsigned i = 0; i < pigeons * holes; ++i) s.new_var();
    for (unsigned p = 0; p < pigeons; ++p) {
      std::vector<Lit> c;
      for (unsigned h = 0; h < holes; ++h) c.push_back(Lit::make(var(p, h)));
      s.add_clause(c);
    }
    for (unsigned h = 0; h < holes; ++h) {
      for (unsigned p = 0; p < pigeons; ++p) {
        for (unsigned q = p + 1; q < pigeons; ++q) s.add_clause({Lit::make(var(p, h), true), Lit::make(var(q, h), true)});
      }
    }
    CHECK(s.solve() == Result::Unsat);
    CHECK(s.stats().conflicts > 0);
  }
}

TEST_CASE("larger satisfiable instances and budgets") {
  Rng rng(5);
  const unsigned vars = 200;
  // Planted solution keeps the instance satisfiable.
  std::vector<bool> plant(vars);
  for (auto&& b : plant) b = rng.chance(0.5);
  Solver s;
  for (unsigned v = 0; v < vars; ++v) s.new_var();
  Cnf f;
  while (f.size() < 850) {
    auto c = random_cnf(rng, vars, 1, 3)[0];
    bool ok = false;
    for (Lit l : c) ok = ok || (plant[l.var()] != l.negated());
    if (ok) f.push_back(c);
  }
  for (const auto& c : f) s.add_clause(c);
  REQUIRE(s.solve() == Result::Sat);
  for (const auto& c : f) {
    bool any = false;
    for (Lit l : c) any = any || s.model_value(l);
    CHECK(any);
  }

  Solver hard;
  const unsigned holes = 9;
  for (unsigned i = 0; i < (holes + 1) * holes; ++i) hard.new_var();
  for (unsigned p = 0; p <= holes; ++p) {
    std::vector<Lit> c;
    for (unsigned h = 0; h < holes; ++h) c.push_back(Lit::make(Var(p * holes + h)));
    hard.add_clause(c);
  }
  for (unsigned h = 0; h < holes; ++h) {
    for (unsigned p = 0; p <= holes; ++p) {
      for (unsigned q = p + 1; q <= holes; ++q) {
        hard.add_clause({Lit::make(Var(p * holes + h), true), Lit::make(Var(q * holes + h), true)});
      }
    }
  }
  hard.set_conflict_budget(50);
  CHECK(hard.solve() == Result::Unknown);
  hard.set_conflict_budget(0);
  hard.set_deadline(std::chrono::steady_clock::now());
  CHECK(hard.solve() == Result::Unknown);
}
