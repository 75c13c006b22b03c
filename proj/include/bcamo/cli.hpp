#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bcamo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

/// Environment variable read when --jobs is not given.
inline constexpr const char* kJobsEnv = "BCAMO_JOBS";

/// Name of the resolved configuration written to every output directory.
inline constexpr std::string_view kResolvedConfigName = "config.ini";

/// Invalid or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Value lists

/// Comma-separated seeds and inclusive ranges: "1-10", "3,5,9-12".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);
/// Scales given as fractions ("0.1,0.2") or percentages ("10%,20%").
std::vector<double> parse_scale_list(std::string_view text);

// ---------------------------------------------------------------------------
// Subcommand configurations

struct CamouflageConfig {
  std::filesystem::path bench;
  std::string scheme = "final-primitive";
  double scale = 0.1;
  std::uint64_t seed = 1;
  std::filesystem::path out = "out";
  /// Memorized target set to reuse instead of selecting targets.
  std::optional<std::filesystem::path> targets;
  double tie_fraction = 0.01;
  double inv_buf_fraction = 0.5;
  std::optional<std::size_t> chen_dummies;
  unsigned k_hops = 4;
};

struct AttackBatchConfig {
  std::vector<std::filesystem::path> benches;
  std::vector<std::string> schemes = {"final-primitive"};
  std::vector<double> scales = {0.1};
  std::vector<std::uint64_t> seeds = {1};
  /// "seminal" and/or "double-dip"; empty yields an empty report.
  std::vector<std::string> attacks = {"seminal"};
  double timeout_s = 3600.0;
  std::optional<std::size_t> chen_dummies;
  std::filesystem::path out = "out";
  unsigned jobs = 1;
  bool omit_timing = false;
};

struct SplitBatchConfig {
  std::vector<std::filesystem::path> benches;
  std::vector<std::uint64_t> seeds = {1};
  std::vector<double> scales = {0.2, 0.4, 0.6, 0.8, 1.0};
  bool original_only = false;
  /// Split thresholds as fractions of the grid half-perimeter; the smaller
  /// value plays the lower split layer.
  std::vector<double> thresholds = {0.1, 0.25};
  double beol_fraction = 0.25;
  std::string strategy = "greedy";
  unsigned fanout_cap = 16;
  double bbox_frac = 0.125;
  /// Patterns for HD/OER of recovered netlists; 0 skips the measurement.
  std::uint64_t hd_patterns = 100000;
  std::filesystem::path out = "out";
  unsigned jobs = 1;
  bool omit_timing = false;
};

struct LimitsConfig {
  std::filesystem::path counts;
  std::string format = "csv";
  std::optional<std::filesystem::path> out;
};

struct EvaluateConfig {
  std::filesystem::path golden;
  std::filesystem::path candidate;
  std::uint64_t patterns = 100000;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::optional<std::filesystem::path> out;
};

struct ReportConfig {
  std::filesystem::path input;
  std::string format = "csv";
  bool aggregate = false;
  std::optional<std::filesystem::path> out;
};

/// Throw ConfigError on invalid values or missing input paths.
void validate(const CamouflageConfig& c);
void validate(const AttackBatchConfig& c);
void validate(const SplitBatchConfig& c);
void validate(const LimitsConfig& c);
void validate(const EvaluateConfig& c);
void validate(const ReportConfig& c);

/// Resolved configuration in the INI syntax accepted by --config. Worker
/// counts are left out since they never change results.
std::string to_ini(const CamouflageConfig& c);
std::string to_ini(const AttackBatchConfig& c);
std::string to_ini(const SplitBatchConfig& c);

// ---------------------------------------------------------------------------
// Commands; each returns an exit code. Data errors propagate as exceptions.

int cmd_camouflage(const CamouflageConfig& c, std::ostream& log);
int cmd_attack(const AttackBatchConfig& c, std::ostream& log);
int cmd_split(const SplitBatchConfig& c, std::ostream& log);
int cmd_limits(const LimitsConfig& c, std::ostream& out);
int cmd_evaluate(const EvaluateConfig& c, std::ostream& out);
int cmd_report(const ReportConfig& c, std::ostream& out);

// ---------------------------------------------------------------------------
// Worker pool

/// Worker count from the environment variable, or 1 when unset or invalid.
unsigned jobs_from_env();

/// Runs fn(0) .. fn(count - 1) on up to `workers` threads and returns after
/// all have finished. If any call throws, the exception of the lowest index is
/// rethrown.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------------------
// Entry point

/// Parses arguments (argv[0] excluded), runs the subcommand, and maps errors
/// to exit codes: 2 for usage and configuration errors, 3 for data errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bcamo::cli
