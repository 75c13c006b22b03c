#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bcamo/netlist.hpp"
#include "bcamo/rng.hpp"

namespace bcamo {

// ---------------------------------------------------------------------------
// Scheme identifiers

enum class SchemeKind { FinalPrimitive, Ambiguous, ChenMux };

struct SchemeId {
  SchemeKind kind = SchemeKind::FinalPrimitive;
  /// Number of functions for Ambiguous; unused otherwise.
  unsigned k = 0;

  /// "final-primitive", "ambiguous-<k>", "chen-mux".
  std::string to_string() const;
  /// Throws std::invalid_argument for unknown names or unsupported k.
  static SchemeId parse(std::string_view text);

  friend bool operator==(const SchemeId&, const SchemeId&) = default;
};

/// Function set offered by an ambiguous cell of size k, for a gate whose true
/// function is `true_function`. Returns nullopt when that function is not in
/// the set (the gate cannot be camouflaged with this scheme).
///
///   k=2  {f, not f}
///   k=3  {XOR, NAND, NOR}
///   k=4  {XOR, NAND, NOR, XNOR}
///   k=8  {AND, NAND, OR, NOR, XOR, XNOR, A, not A}
///   k=16 all sixteen 2-input functions
std::optional<std::vector<TruthTable2>> ambiguous_function_set(unsigned k, TruthTable2 true_function);

// ---------------------------------------------------------------------------
// Target selection

/// Gates chosen for camouflaging, memorized by name so that every scheme
/// protects the same gates.
struct TargetSet {
  std::string benchmark;
  double scale = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> gates;
};

/// Picks ceil(scale * |gates|) gates uniformly without replacement.
///
/// The selection is a prefix of a seed-determined permutation, so target sets
/// for the same seed are nested across scales.
TargetSet select_targets(const Netlist& n, double scale, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Netlist transformations

struct TransformResult {
  Netlist netlist;
  /// Names of the rewritten gates; these must be camouflaged.
  std::vector<std::string> transformed;
};

/// Rewrites a random `fraction` of INV/BUF gates as 2-input gates with one
/// constant input:
///   INV(a) -> NAND(a,1) | NOR(a,0) | XOR(a,1) | XNOR(a,0)
///   BUF(a) -> AND(a,1)  | OR(a,0)  | XOR(a,0) | XNOR(a,1)
/// Gate ids and names are preserved. When `restrict_to` is given, only those
/// gates are eligible.
TransformResult transform_inv_buf(const Netlist& n, double fraction, std::uint64_t seed,
                                  const std::vector<std::string>* restrict_to = nullptr);

struct TieInsertResult {
  Netlist netlist;
  std::vector<std::string> tie_gates;
};

/// Inserts `count` random 2-input gates whose inputs are tied to random
/// constants. Their outputs have no real fanout; they only ever show up as
/// dummy candidates.
TieInsertResult insert_tie_disguise(const Netlist& n, std::size_t count, std::uint64_t seed);

/// Prefix of the names given to inserted TIE-in-disguise gates.
inline constexpr std::string_view kTiePrefix = "__tie_";

// ---------------------------------------------------------------------------
// Camouflaged netlists

enum class CandidateRole : std::uint8_t { Real, Dummy, Const0, Const1 };

std::string_view to_string(CandidateRole r);

struct Candidate {
  NetId net = kNone;
  CandidateRole role = CandidateRole::Real;
};

/// Obfuscated connection of one gate input pin.
struct PinChoice {
  GateId gate = kNone;
  unsigned pin = 0;
  std::vector<Candidate> candidates;
  unsigned true_index = 0;
};

/// Obfuscated function of one gate.
struct FunctionChoice {
  GateId gate = kNone;
  std::vector<TruthTable2> functions;
  unsigned true_index = 0;
};

struct CamoNetlist {
  /// The design after transformations; resolving every choice to its true
  /// index yields exactly this netlist.
  Netlist base;
  SchemeId scheme;
  double scale = 0.0;
  std::uint64_t seed = 0;
  /// Ordered by (gate, pin).
  std::vector<PinChoice> pin_choices;
  /// Ordered by gate.
  std::vector<FunctionChoice> function_choices;
  /// Human-readable notes (skipped gates, defaults applied).
  std::vector<std::string> log;

  bool empty() const { return pin_choices.empty() && function_choices.empty(); }
};

/// Index of the chosen option for every pin choice and every function choice.
struct Resolution {
  std::vector<unsigned> pins;
  std::vector<unsigned> functions;
};

Resolution true_resolution(const CamoNetlist& c);

/// Netlist obtained by committing to the given options.
Netlist resolve(const CamoNetlist& c, const Resolution& r);

/// Adds a net computing the 2-input function `tt` of (a, b) from the gate
/// vocabulary; may return a, b, or a constant net without adding gates.
NetId emit_function(NetlistBuilder& b, TruthTable2 tt, NetId a, NetId b_net, std::string_view name_hint);

/// Rewrites 2-input `gate` in place so that its output computes `tt` of its
/// current inputs. Helper inverters get fresh names.
void implement_function(NetlistBuilder& b, GateId gate, TruthTable2 tt);

/// The gate function whose truth table is `tt`, if one exists.
std::optional<GateFunc> gate_func_for(TruthTable2 tt);

// ---------------------------------------------------------------------------
// Dummy-net selection

class DummySelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DummyOptions {
  /// Radius of the undirected gate neighborhood searched first.
  unsigned k_hops = 4;
  /// Sampling weight of each TIE-in-disguise output relative to a neighborhood net.
  double tie_weight = 2.0;
};

/// Chooses dummy nets while keeping the graph of all candidate edges acyclic.
///
/// Every committed dummy adds an edge dummy -> gate; later selections respect
/// those edges, so any combination of candidate choices is a valid circuit.
class DummySelector {
 public:
  DummySelector(const Netlist& n, DummyOptions opts, std::vector<GateId> tie_gates = {});

  /// One dummy per input of `gate`, distinct from each other, from the gate's
  /// real inputs, and from its output. Commits the new edges.
  /// Throws DummySelectionError when no acyclic candidate exists.
  std::vector<NetId> select_for_gate(GateId gate, Rng& rng);

  /// Dummy for a single pin; `exclude` lists nets that must not be chosen.
  /// `local` restricts the search to the k-hop neighborhood first.
  NetId select_for_pin(GateId gate, const std::vector<NetId>& exclude, bool local, Rng& rng);

 private:
  std::vector<bool> forward_cone(GateId gate) const;
  std::vector<NetId> neighborhood(GateId gate, unsigned hops) const;
  NetId sample(GateId gate, const std::vector<NetId>& pool, const std::vector<bool>& cone,
               const std::vector<NetId>& exclude, Rng& rng) const;
  void commit(NetId net, GateId gate);

  const Netlist& n_;
  DummyOptions opts_;
  std::vector<bool> is_tie_gate_;
  std::vector<NetId> tie_outputs_;
  /// Extra (dummy) sinks per net, on top of the netlist's real fanout.
  std::vector<std::vector<GateId>> extra_fanout_;
};

/// One dummy net per input of `gate` on the unmodified netlist.
std::vector<NetId> select_dummy_nets(const Netlist& n, GateId gate, unsigned k_hops, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Schemes

struct FinalPrimitiveOptions {
  std::uint64_t seed = 1;
  DummyOptions dummy;
  /// Gates that must be camouflaged regardless of `targets` (transformed gates).
  std::vector<std::string> must_camouflage;
  /// TIE-in-disguise gates; camouflaged with their constant inputs as real nets.
  std::vector<std::string> tie_gates;
};

/// Gives every input of every target gate the candidate set {real, dummy, 0, 1}
/// in seed-shuffled order. Throws DummySelectionError on exhaustion.
CamoNetlist apply_final_primitive(const Netlist& n, const TargetSet& targets, const FinalPrimitiveOptions& opts);

/// Replaces each 2-input target gate with a cell that may implement any
/// function of the k-set. Gates whose function is outside the set, and
/// 1-input gates, are skipped and logged.
CamoNetlist apply_ambiguous_scheme(const Netlist& n, const TargetSet& targets, unsigned k, std::uint64_t seed);

/// Inserts `n_dummies` 2:1 selections at distinct random gate input pins,
/// each choosing between the real driver and a random acyclic dummy net.
CamoNetlist apply_chen_mux(const Netlist& n, std::size_t n_dummies, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Full camouflaging pipeline

struct PipelineOptions {
  SchemeId scheme;
  double scale = 0.0;
  std::uint64_t seed = 1;
  /// Fraction of targeted INV/BUF gates rewritten as 2-input gates.
  double inv_buf_fraction = 0.5;
  /// TIE-in-disguise count as a fraction of the gate count (rounded up).
  double tie_fraction = 0.01;
  /// Overrides tie_fraction when set.
  std::optional<std::size_t> tie_count;
  DummyOptions dummy;
  /// Number of selectors for chen-mux; defaults to ceil(scale * input pins).
  std::optional<std::size_t> chen_dummies;
};

struct PipelineResult {
  TargetSet targets;
  CamoNetlist camo;
};

/// transform -> TIE insertion -> primitive application for the final
/// primitive; target selection -> scheme application for the others.
/// `targets` overrides selection (for memorized target sets).
PipelineResult camouflage(const Netlist& n, const PipelineOptions& opts, const TargetSet* targets = nullptr);

// ---------------------------------------------------------------------------
// Camouflaging limits of library-dependent schemes

enum class LimitScheme { XorType, StfType, XorNandNor, Threshold, Ours };

std::string_view to_string(LimitScheme s);

/// Library cells relevant to a scheme (e.g. "NAND2"); empty for Ours.
const std::vector<std::string>& relevant_cells(LimitScheme s);

struct CellCounts {
  std::string benchmark;
  std::uint64_t total = 0;
  std::map<std::string, std::uint64_t> counts;
};

/// 100 * (relevant instances) / total. Throws std::invalid_argument on zero total.
double camo_limit(const CellCounts& counts, LimitScheme scheme);

class CellCountsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV with header `benchmark,total,<cell>...` and one row per benchmark.
/// Throws CellCountsError on malformed input.
std::vector<CellCounts> parse_cell_counts(std::string_view csv);

}  // namespace bcamo
