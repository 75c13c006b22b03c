#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bcamo/attack.hpp"
#include "bcamo/netlist.hpp"

namespace bcamo {

// ---------------------------------------------------------------------------
// Functional deviation

struct HdOerReport {
  /// Mismatched output bits over all compared output bits, in percent.
  double hd_percent = 0.0;
  /// Patterns with at least one mismatching output, in percent.
  double oer_percent = 0.0;
  std::uint64_t n_patterns = 0;
  std::uint64_t seed = 0;
  /// True when every input pattern was compared (|PIs| <= kMaxExhaustiveHdInputs).
  bool exhaustive = false;

  friend bool operator==(const HdOerReport&, const HdOerReport&) = default;
};

inline constexpr std::size_t kMaxExhaustiveHdInputs = 16;

/// Hamming distance and output error rate between two netlists with
/// name-matched interfaces. Exhaustive for up to 16 inputs, otherwise
/// `n_patterns` uniform random patterns. Throws NetlistError(Interface) on
/// mismatch and std::invalid_argument when n_patterns is zero.
HdOerReport hd_oer(const Netlist& a, const Netlist& b, std::uint64_t n_patterns = 100000, std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Run records

inline constexpr int kReportSchemaVersion = 1;

/// Literal used for timed-out runs in tabular output.
inline constexpr std::string_view kTimeoutMark = "t-o";

struct RunRecord {
  std::string benchmark;
  std::string scheme;
  double scale = 0.0;
  std::uint64_t seed = 0;
  /// "seminal", "double-dip", "proximity", ...
  std::string attack;
  std::size_t key_width = 0;
  AttackStatus status = AttackStatus::Solved;
  /// Recovered key as a bitstring, index 0 leftmost.
  std::optional<std::string> key;
  std::uint64_t iterations = 0;
  /// Absent when timing is omitted for reproducible output.
  std::optional<double> cpu_time_s;
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::optional<HdOerReport> hd_oer;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Record for one attack run; timing is dropped when `with_timing` is false.
RunRecord make_run_record(std::string benchmark, std::string scheme, double scale, std::uint64_t seed,
                          std::string attack, std::size_t key_width, const AttackResult& r, bool with_timing);

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ReportFormat { Json, Csv };

/// Parses "json" or "csv"; throws std::invalid_argument otherwise.
ReportFormat parse_report_format(std::string_view s);

/// Column order of the per-run CSV.
const std::vector<std::string>& run_csv_columns();

std::string runs_to_json(const std::vector<RunRecord>& records);
/// Throws ReportError on malformed input or an unknown schema version.
std::vector<RunRecord> runs_from_json(std::string_view text);
/// Header line plus one row per record; timed-out runs show "t-o" as runtime.
std::string runs_to_csv(const std::vector<RunRecord>& records);
std::string render_runs(const std::vector<RunRecord>& records, ReportFormat format);

// ---------------------------------------------------------------------------
// Aggregates

/// Summary of the runs sharing (benchmark, scheme, scale, attack).
struct AggregateRow {
  std::string benchmark;
  std::string scheme;
  double scale = 0.0;
  std::string attack;
  std::size_t runs = 0;
  std::size_t solved = 0;
  std::size_t timeouts = 0;
  std::size_t errors = 0;
  /// Over solved runs; absent when none solved or timing was omitted.
  std::optional<double> mean_cpu_s;
  std::optional<double> median_cpu_s;
  std::optional<double> mean_iterations;
  std::optional<double> median_iterations;
};

double median(std::vector<double> values);

/// Groups in first-appearance order.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records);

const std::vector<std::string>& aggregate_csv_columns();
std::string aggregates_to_json(const std::vector<AggregateRow>& rows);
/// Cells without solved runs print "t-o".
std::string aggregates_to_csv(const std::vector<AggregateRow>& rows);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace bcamo
