#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcamo/camo.hpp"
#include "bcamo/netlist.hpp"

namespace bcamo {

// ---------------------------------------------------------------------------
// Placement

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

inline int manhattan(Point a, Point b) { return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y); }

/// Gates on a width x height grid, one per cell. Primary inputs sit on the
/// left edge (x = -1), primary outputs on the right edge (x = width).
struct Placement {
  int width = 0;
  int height = 0;
  std::vector<Point> gates;    // by GateId
  std::vector<Point> inputs;   // by primary-input index
  std::vector<Point> outputs;  // by primary-output index

  friend bool operator==(const Placement&, const Placement&) = default;
};

struct PlaceOptions {
  std::uint64_t seed = 1;
  /// Swap attempts; 0 means 200 per gate.
  std::uint64_t budget = 0;
  /// Extra free cells relative to the gate count.
  double slack = 0.25;
};

/// Random initial placement improved by pairwise-swap hill climbing on
/// half-perimeter wirelength. Swaps that increase the wirelength are rejected.
Placement place(const Netlist& n, const PlaceOptions& opts = {});

/// Random initial placement only (budget 0 hill climbing).
Placement random_placement(const Netlist& n, std::uint64_t seed, double slack = 0.25);

/// Half-perimeter wirelength of one net (0 for nets with fewer than two pins).
std::int64_t net_hpwl(const Netlist& n, const Placement& p, NetId net);
std::int64_t total_hpwl(const Netlist& n, const Placement& p);

/// Throws std::invalid_argument when the placement does not cover `n` with
/// distinct in-range cells.
void validate_placement(const Netlist& n, const Placement& p);

/// Placement of `target` reusing the cells of equally named gates in `source`;
/// remaining gates (inserted TIE cells) take random free cells.
Placement extend_placement(const Netlist& source, const Placement& p, const Netlist& target, std::uint64_t seed);

std::string placement_to_json(const Netlist& n, const Placement& p);
Placement placement_from_json(const Netlist& n, std::string_view text);

// ---------------------------------------------------------------------------
// Split view

/// Routing tracks per placement cell along each axis. Split views use track
/// coordinates so that the pins of one cell are distinct points.
inline constexpr int kCellPitch = 8;

/// Track position of a cell's output pin and of its input pin `pin`.
Point output_pin_pos(Point cell);
Point input_pin_pos(Point cell, unsigned pin);
/// Track position of the tie cell serving constants next to `cell`.
Point tie_pin_pos(Point cell);

struct SplitPolicy {
  enum class Kind { AllCut, Length } kind = Kind::AllCut;
  /// Nets whose half-perimeter wirelength is at least this value are cut.
  double threshold = 0.0;
  /// Share of a cut regular connection routed above the split layer. The
  /// remainder is routed below it, split evenly between a stub leaving the
  /// driver and a stub entering the sink; the dangling ends sit at the tips.
  double beol_fraction = 0.25;

  static SplitPolicy all_cut() { return {}; }
  static SplitPolicy length(double t) { return {Kind::Length, t}; }
};

/// What drives a connection: a net of the view's netlist or a tie constant.
struct DriverRef {
  enum class Kind : std::uint8_t { Net, Const0, Const1 } kind = Kind::Net;
  NetId net = kNone;

  static DriverRef of_net(NetId n) { return {Kind::Net, n}; }
  static DriverRef constant(bool v) { return {v ? Kind::Const1 : Kind::Const0, kNone}; }
  friend bool operator==(const DriverRef&, const DriverRef&) = default;
};

/// Dangling driver end visible in the FEOL; one per cut wire.
struct DriverPin {
  DriverRef driver;
  Point pos;
  /// Gate driving the net, kNone for inputs and constants.
  GateId gate = kNone;
  /// Pins of the net the wire belongs to (driver plus sinks).
  std::size_t net_arity = 2;
};

/// Gate input whose connection is hidden in the BEOL.
struct CutSink {
  GateId gate = kNone;
  unsigned pin = 0;
  Point pos;
  bool camouflaged = false;
  std::size_t net_arity = 2;
  /// Ground truth; not part of the attacker-facing export.
  DriverRef truth;
};

/// Two-pin cut wire: one driver-side and one sink-side vpin.
struct Segment {
  Point driver;
  Point sink;
};

/// Pin positions in CutSink, DriverPin, and Segment are track coordinates;
/// `placement` stays in cell units.
struct SplitView {
  Netlist netlist;
  Placement placement;
  std::vector<CutSink> sinks;
  std::vector<DriverPin> drivers;
  std::vector<Segment> segments;
  /// Cut wires ending at gate inputs; every candidate wire of a camouflaged
  /// input counts once.
  std::size_t cut_inputs = 0;
};

/// Regular nets are cut per `policy`; when `camo` is given, every candidate
/// wire of every camouflaged input is cut regardless of length. Candidate
/// wires are routed entirely above the split layer, so their driver ends sit
/// on the driving cell (tie constants on the camouflaged cell itself). `p` must be a
/// placement of the netlist that is split (camo->base when camo is given).
SplitView make_split_view(const Netlist& n, const Placement& p, const SplitPolicy& policy,
                          const CamoNetlist* camo = nullptr);

/// Attacker-facing JSON: gates, cells, and dangling pins, no ground truth.
std::string split_view_to_json(const SplitView& v);

// ---------------------------------------------------------------------------
// Proximity attack

enum class MatchStrategy { GreedyNearest, MinCost };

/// "greedy" or "min-cost"; throws std::invalid_argument otherwise.
MatchStrategy parse_match_strategy(std::string_view s);
std::string_view to_string(MatchStrategy s);

class SplitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MatchOptions {
  MatchStrategy strategy = MatchStrategy::GreedyNearest;
  /// Sinks served by one driver pin at most.
  unsigned fanout_cap = 16;
  std::uint64_t seed = 1;
  /// Nearest drivers considered per sink by min-cost matching.
  unsigned candidates_per_sink = 16;
};

struct MatchResult {
  /// Driver pin index per cut sink.
  std::vector<std::size_t> assignment;
  std::size_t correct = 0;
  double ccr_percent = 0.0;
  double runtime_s = 0.0;
  /// View netlist with every cut sink wired to its assigned driver.
  Netlist proposed;
};

/// Assigns every cut sink a driver pin by Manhattan proximity subject to the
/// fan-out cap, no sink fed by its own gate, and an acyclic result.
/// Throws SplitError when some sink has no admissible driver.
MatchResult proximity_match(const SplitView& v, const MatchOptions& opts = {});

// ---------------------------------------------------------------------------
// crouting-style metrics

struct CroutingMetrics {
  std::size_t vpins = 0;
  double e_ls = 0.0;
  double fom = 0.0;
};

/// vpins are the endpoints of two-pin cut wires. Candidates of a vpin are the
/// opposite-direction vpins inside a square window of side
/// bbox_frac * (width + height) cells centered on it; FOM divides each count
/// by the window area in cells, clipped to the layout.
CroutingMetrics crouting_metrics(const SplitView& v, double bbox_frac = 0.125);

}  // namespace bcamo
