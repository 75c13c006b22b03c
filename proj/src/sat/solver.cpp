#include "bcamo/sat.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace bcamo::sat {

namespace {

// Luby sequence 1 1 2 1 1 2 4 ... scaled by powers of y.
double luby(double y, std::uint64_t x) {
  std::uint64_t size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;
constexpr std::uint64_t kRestartUnit = 100;

}  // namespace

Solver::Solver() = default;

Var Solver::new_var() {
  const Var v = static_cast<Var>(assigns_.size());
  assigns_.push_back(LBool::Undef);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  polarity_.push_back(true);
  activity_.push_back(0.0);
  seen_.push_back(0);
  heap_index_.push_back(~0u);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

bool Solver::add_clause(std::span<const Lit> input) {
  assert(decision_level() == 0);
  if (!ok_) return false;
  std::vector<Lit> lits(input.begin(), input.end());
  std::sort(lits.begin(), lits.end());
  std::vector<Lit> kept;
  Lit prev = kUndefLit;
  for (Lit l : lits) {
    if (value(l) == LBool::True || l == ~prev) return true;
    if (value(l) == LBool::False || l == prev) continue;
    kept.push_back(l);
    prev = l;
  }
  if (kept.empty()) {
    ok_ = false;
    return false;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], kNoReason);
    if (propagate() != kNoReason) ok_ = false;
    return ok_;
  }
  Clause c;
  c.lits = std::move(kept);
  CRef cr;
  if (!free_slots_.empty()) {
    cr = free_slots_.back();
    free_slots_.pop_back();
    clauses_[cr] = std::move(c);
  } else {
    cr = static_cast<CRef>(clauses_.size());
    clauses_.push_back(std::move(c));
  }
  attach(cr);
  ++num_problem_clauses_;
  return true;
}

void Solver::attach(CRef cr) {
  const Clause& c = clauses_[cr];
  watches_[(~c.lits[0]).x].push_back({cr, c.lits[1]});
  watches_[(~c.lits[1]).x].push_back({cr, c.lits[0]});
}

void Solver::enqueue(Lit l, CRef reason) {
  const Var v = l.var();
  assigns_[v] = l.negated() ? LBool::False : LBool::True;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

Solver::CRef Solver::propagate() {
  CRef confl = kNoReason;
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = ~p;
    std::vector<Watcher>& ws = watches_[p.x];
    ++stats_.propagations;
    std::size_t i = 0;
    std::size_t j = 0;
    const std::size_t end = ws.size();
    while (i < end) {
      const Watcher w = ws[i++];
      if (value(w.blocker) == LBool::True) {
        ws[j++] = w;
        continue;
      }
      Clause& c = clauses_[w.cref];
      if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
      const Lit first = c.lits[0];
      if (first != w.blocker && value(first) == LBool::True) {
        ws[j++] = {w.cref, first};
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.lits.size(); ++k) {
        if (value(c.lits[k]) != LBool::False) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[(~c.lits[1]).x].push_back({w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {w.cref, first};
      if (value(first) == LBool::False) {
        confl = w.cref;
        qhead_ = trail_.size();
        while (i < end) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (confl != kNoReason) break;
  }
  return confl;
}

bool Solver::redundant(Lit l) const {
  const CRef r = reason_[l.var()];
  if (r == kNoReason) return false;
  const Clause& c = clauses_[r];
  for (std::size_t k = 1; k < c.lits.size(); ++k) {
    const Var v = c.lits[k].var();
    if (!seen_[v] && level_[v] > 0) return false;
  }
  return true;
}

void Solver::analyze(CRef confl, std::vector<Lit>& learnt, std::uint32_t& backtrack_level, std::uint32_t& lbd) {
  learnt.clear();
  learnt.push_back(kUndefLit);
  int path = 0;
  Lit p = kUndefLit;
  std::size_t index = trail_.size();
  do {
    Clause& c = clauses_[confl];
    if (c.learnt) bump_clause(c);
    for (std::size_t k = (p == kUndefLit ? 0 : 1); k < c.lits.size(); ++k) {
      const Lit q = c.lits[k];
      const Var v = q.var();
      if (!seen_[v] && level_[v] > 0) {
        bump_var(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level()) {
          ++path;
        } else {
          learnt.push_back(q);
        }
      }
    }
    while (!seen_[trail_[--index].var()]) {
    }
    p = trail_[index];
    confl = reason_[p.var()];
    seen_[p.var()] = 0;
    --path;
  } while (path > 0);
  learnt[0] = ~p;

  const std::vector<Lit> original(learnt.begin() + 1, learnt.end());
  std::size_t j = 1;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    if (!redundant(learnt[k])) learnt[j++] = learnt[k];
  }
  learnt.resize(j);
  for (Lit l : original) seen_[l.var()] = 0;

  backtrack_level = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < learnt.size(); ++k) {
      if (level_[learnt[k].var()] > level_[learnt[max_i].var()]) max_i = k;
    }
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level_[learnt[1].var()];
  }
  std::vector<std::uint32_t> levels;
  for (Lit l : learnt) levels.push_back(level_[l.var()]);
  std::sort(levels.begin(), levels.end());
  lbd = static_cast<std::uint32_t>(std::unique(levels.begin(), levels.end()) - levels.begin());
}

void Solver::cancel_until(std::uint32_t level) {
  if (decision_level() <= level) return;
  for (std::size_t c = trail_.size(); c-- > trail_lim_[level];) {
    const Var v = trail_[c].var();
    assigns_[v] = LBool::Undef;
    reason_[v] = kNoReason;
    polarity_[v] = trail_[c].negated();
    if (!heap_contains(v)) heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
}

Lit Solver::pick_branch() {
  while (!heap_.empty()) {
    const Var v = heap_pop();
    if (assigns_[v] == LBool::Undef) return Lit::make(v, polarity_[v]);
  }
  return kUndefLit;
}

void Solver::bump_var(Var v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_contains(v)) heap_up(heap_index_[v]);
}

void Solver::bump_clause(Clause& c) {
  c.activity += clause_inc_;
  if (c.activity > 1e20) {
    for (CRef cr : learnts_) clauses_[cr].activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

bool Solver::locked(CRef cr) const {
  const Clause& c = clauses_[cr];
  return reason_[c.lits[0].var()] == cr && value(c.lits[0]) == LBool::True;
}

void Solver::reduce_db() {
  std::sort(learnts_.begin(), learnts_.end(), [&](CRef a, CRef b) {
    const Clause& x = clauses_[a];
    const Clause& y = clauses_[b];
    if (x.lbd != y.lbd) return x.lbd > y.lbd;
    return x.activity < y.activity;
  });
  const std::size_t limit = learnts_.size() / 2;
  std::vector<CRef> kept;
  std::size_t removed = 0;
  for (std::size_t i = 0; i < learnts_.size(); ++i) {
    const CRef cr = learnts_[i];
    Clause& c = clauses_[cr];
    if (removed < limit && c.lbd > 2 && c.lits.size() > 2 && !locked(cr)) {
      c.deleted = true;
      ++removed;
    } else {
      kept.push_back(cr);
    }
  }
  if (removed == 0) return;
  for (auto& ws : watches_) {
    ws.erase(std::remove_if(ws.begin(), ws.end(), [&](const Watcher& w) { return clauses_[w.cref].deleted; }),
             ws.end());
  }
  for (CRef cr = 0; cr < clauses_.size(); ++cr) {
    if (clauses_[cr].deleted && !clauses_[cr].lits.empty()) {
      clauses_[cr].lits.clear();
      clauses_[cr].lits.shrink_to_fit();
      free_slots_.push_back(cr);
    }
  }
  learnts_ = std::move(kept);
}

bool Solver::out_of_time() {
  if (!deadline_) return false;
  if ((++time_check_ & 63) != 0) return false;
  return std::chrono::steady_clock::now() >= *deadline_;
}

Result Solver::solve(std::span<const Lit> assumptions) {
  ++stats_.solves;
  model_.clear();
  if (!ok_) return Result::Unsat;
  if (deadline_ && std::chrono::steady_clock::now() >= *deadline_) return Result::Unknown;
  max_learnts_ = std::max(max_learnts_, std::max(static_cast<double>(num_problem_clauses_) / 3.0, 5000.0));

  const std::uint64_t start_conflicts = stats_.conflicts;
  std::uint64_t restart = 0;
  std::uint64_t restart_limit = static_cast<std::uint64_t>(luby(2.0, restart) * kRestartUnit);
  std::uint64_t restart_conflicts = 0;
  std::vector<Lit> learnt;

  for (;;) {
    const CRef confl = propagate();
    if (confl != kNoReason) {
      ++stats_.conflicts;
      ++restart_conflicts;
      if (decision_level() == 0) {
        ok_ = false;
        return Result::Unsat;
      }
      std::uint32_t bt = 0;
      std::uint32_t lbd = 0;
      analyze(confl, learnt, bt, lbd);
      cancel_until(bt);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kNoReason);
      } else {
        Clause c;
        c.lits = learnt;
        c.learnt = true;
        c.lbd = lbd;
        CRef cr;
        if (!free_slots_.empty()) {
          cr = free_slots_.back();
          free_slots_.pop_back();
          clauses_[cr] = std::move(c);
        } else {
          cr = static_cast<CRef>(clauses_.size());
          clauses_.push_back(std::move(c));
        }
        learnts_.push_back(cr);
        attach(cr);
        bump_clause(clauses_[cr]);
        enqueue(learnt[0], cr);
        ++stats_.learnt_clauses;
      }
      var_inc_ /= kVarDecay;
      clause_inc_ /= kClauseDecay;
      if (static_cast<double>(learnts_.size()) >= max_learnts_) {
        reduce_db();
        max_learnts_ *= 1.1;
      }
      if ((conflict_budget_ && stats_.conflicts - start_conflicts >= conflict_budget_) || out_of_time()) {
        cancel_until(0);
        return Result::Unknown;
      }
      continue;
    }

    if (restart_conflicts >= restart_limit) {
      ++stats_.restarts;
      ++restart;
      restart_limit = static_cast<std::uint64_t>(luby(2.0, restart) * kRestartUnit);
      restart_conflicts = 0;
      cancel_until(0);
      if (out_of_time()) return Result::Unknown;
      continue;
    }

    Lit next = kUndefLit;
    while (decision_level() < assumptions.size()) {
      const Lit a = assumptions[decision_level()];
      if (value(a) == LBool::True) {
        trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
      } else if (value(a) == LBool::False) {
        cancel_until(0);
        return Result::Unsat;
      } else {
        next = a;
        break;
      }
    }
    if (next == kUndefLit) {
      if (out_of_time()) {
        cancel_until(0);
        return Result::Unknown;
      }
      ++stats_.decisions;
      next = pick_branch();
      if (next == kUndefLit) {
        model_.resize(assigns_.size());
        for (Var v = 0; v < assigns_.size(); ++v) model_[v] = assigns_[v] == LBool::True;
        cancel_until(0);
        return Result::Sat;
      }
    }
    trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
    enqueue(next, kNoReason);
  }
}

void Solver::heap_insert(Var v) {
  heap_index_[v] = static_cast<std::uint32_t>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i) {
  const Var v = heap_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (activity_[heap_[parent]] >= activity_[v]) break;
    heap_[i] = heap_[parent];
    heap_index_[heap_[i]] = static_cast<std::uint32_t>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<std::uint32_t>(i);
}

void Solver::heap_down(std::size_t i) {
  const Var v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && activity_[heap_[child + 1]] > activity_[heap_[child]]) ++child;
    if (activity_[heap_[child]] <= activity_[v]) break;
    heap_[i] = heap_[child];
    heap_index_[heap_[i]] = static_cast<std::uint32_t>(i);
    i = child;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<std::uint32_t>(i);
}

Var Solver::heap_pop() {
  const Var top = heap_[0];
  heap_index_[top] = ~0u;
  const Var last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[last] = 0;
    heap_down(0);
  }
  return top;
}

}  // namespace bcamo::sat
