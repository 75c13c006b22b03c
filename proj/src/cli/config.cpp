#include <charconv>
#include <cmath>
#include <sstream>

#include <CLI11.hpp>

#include "bcamo/camo.hpp"
#include "bcamo/cli.hpp"
#include "bcamo/metrics.hpp"
#include "bcamo/split.hpp"

namespace bcamo::cli {

namespace {

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string_view f = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!f.empty() && f.front() == ' ') f.remove_prefix(1);
    while (!f.empty() && f.back() == ' ') f.remove_suffix(1);
    if (!f.empty()) out.push_back(f);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

void require_file(const std::filesystem::path& p, std::string_view what) {
  if (p.empty()) throw ConfigError(std::string(what) + " path is required");
  std::error_code ec;
  if (!std::filesystem::is_regular_file(p, ec)) {
    throw ConfigError(std::string(what) + " not found: " + p.string());
  }
}

void require_out(const std::filesystem::path& p) {
  if (p.empty()) throw ConfigError("output directory is required");
  std::error_code ec;
  if (std::filesystem::exists(p, ec) && !std::filesystem::is_directory(p, ec)) {
    throw ConfigError("output path is not a directory: " + p.string());
  }
}

void require_scale(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("scale " + format_double(s) + " is outside [0, 1]");
}

void require_format(const std::string& f) {
  try {
    parse_report_format(f);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void require_scheme(const std::string& s) {
  try {
    SchemeId::parse(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::string> nonempty(const std::vector<std::string_view>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  for (std::string_view item : split_commas(text)) {
    const std::size_t dash = item.find('-');
    if (dash == std::string_view::npos) {
      seeds.push_back(parse_u64(item, "seed"));
      continue;
    }
    const std::uint64_t lo = parse_u64(item.substr(0, dash), "seed range");
    const std::uint64_t hi = parse_u64(item.substr(dash + 1), "seed range");
    if (hi < lo || hi - lo >= 1000000) throw ConfigError("invalid seed range '" + std::string(item) + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw ConfigError("seed list is empty");
  return seeds;
}

std::vector<double> parse_scale_list(std::string_view text) {
  std::vector<double> scales;
  for (std::string_view item : split_commas(text)) {
    if (item.back() == '%') {
      scales.push_back(parse_double(item.substr(0, item.size() - 1), "scale") / 100.0);
    } else {
      scales.push_back(parse_double(item, "scale"));
    }
    require_scale(scales.back());
  }
  return scales;
}

void validate(const CamouflageConfig& c) {
  require_file(c.bench, "benchmark file");
  require_scheme(c.scheme);
  require_scale(c.scale);
  require_out(c.out);
  if (c.targets) require_file(*c.targets, "target set file");
  if (!(c.tie_fraction >= 0.0 && c.tie_fraction <= 1.0)) throw ConfigError("tie fraction must lie in [0, 1]");
  if (!(c.inv_buf_fraction >= 0.0 && c.inv_buf_fraction <= 1.0)) {
    throw ConfigError("INV/BUF fraction must lie in [0, 1]");
  }
}

void validate(const AttackBatchConfig& c) {
  if (c.benches.empty()) throw ConfigError("at least one benchmark is required");
  for (const auto& b : c.benches) require_file(b, "benchmark file");
  for (const auto& s : c.schemes) require_scheme(s);
  for (double s : c.scales) require_scale(s);
  if (c.seeds.empty()) throw ConfigError("seed list is empty");
  for (const auto& a : c.attacks) {
    if (a != "seminal" && a != "double-dip") throw ConfigError("unknown attack '" + a + "'");
  }
  if (!(c.timeout_s > 0.0)) throw ConfigError("timeout must be positive");
  require_out(c.out);
}

void validate(const SplitBatchConfig& c) {
  if (c.benches.empty()) throw ConfigError("at least one benchmark is required");
  for (const auto& b : c.benches) require_file(b, "benchmark file");
  if (c.seeds.empty()) throw ConfigError("seed list is empty");
  for (double s : c.scales) require_scale(s);
  if (c.thresholds.empty()) throw ConfigError("at least one split threshold is required");
  for (double t : c.thresholds) {
    if (!(t >= 0.0)) throw ConfigError("split thresholds must be nonnegative");
  }
  if (!(c.beol_fraction >= 0.0 && c.beol_fraction <= 1.0)) throw ConfigError("BEOL fraction must lie in [0, 1]");
  try {
    parse_match_strategy(c.strategy);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (c.fanout_cap == 0) throw ConfigError("fan-out cap must be positive");
  if (!(c.bbox_frac > 0.0)) throw ConfigError("bounding-box fraction must be positive");
  require_out(c.out);
}

void validate(const LimitsConfig& c) {
  require_file(c.counts, "cell counts file");
  require_format(c.format);
}

void validate(const EvaluateConfig& c) {
  require_file(c.golden, "golden netlist");
  require_file(c.candidate, "candidate netlist");
  if (c.patterns == 0) throw ConfigError("pattern count must be positive");
  require_format(c.format);
}

void validate(const ReportConfig& c) {
  require_file(c.input, "report file");
  require_format(c.format);
}

namespace {

class Ini {
 public:
  explicit Ini(std::string_view command) { text_ << "[" << command << "]\n"; }

  Ini& str(std::string_view key, std::string_view v) {
    text_ << key << "=" << quote(v) << "\n";
    return *this;
  }
  Ini& num(std::string_view key, double v) {
    text_ << key << "=" << format_double(v) << "\n";
    return *this;
  }
  Ini& num(std::string_view key, std::uint64_t v) {
    text_ << key << "=" << v << "\n";
    return *this;
  }
  Ini& flag(std::string_view key, bool v) {
    text_ << key << "=" << (v ? "true" : "false") << "\n";
    return *this;
  }
  Ini& list(std::string_view key, const std::vector<std::string>& v) {
    text_ << key << "=[";
    for (std::size_t i = 0; i < v.size(); ++i) text_ << (i ? "," : "") << quote(v[i]);
    text_ << "]\n";
    return *this;
  }
  std::string text() const { return text_.str(); }

 private:
  static std::string quote(std::string_view v) { return "\"" + std::string(v) + "\""; }
  std::ostringstream text_;
};

template <typename T, typename F>
std::string joined(const std::vector<T>& v, F fmt) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

std::vector<std::string> path_strings(const std::vector<std::filesystem::path>& v) {
  std::vector<std::string> out;
  for (const auto& p : v) out.push_back(p.string());
  return out;
}

}  // namespace

std::string to_ini(const CamouflageConfig& c) {
  Ini ini("camouflage");
  ini.str("bench", c.bench.string()).str("scheme", c.scheme).num("scale", c.scale).num("seed", c.seed);
  ini.str("out", c.out.string());
  if (c.targets) ini.str("targets", c.targets->string());
  ini.num("tie-fraction", c.tie_fraction).num("inv-buf-fraction", c.inv_buf_fraction);
  ini.num("chen-dummies", static_cast<std::uint64_t>(c.chen_dummies.value_or(0)));
  ini.num("k-hops", static_cast<std::uint64_t>(c.k_hops));
  return ini.text();
}

std::string to_ini(const AttackBatchConfig& c) {
  Ini ini("attack");
  ini.list("bench", path_strings(c.benches));
  ini.str("schemes", joined(c.schemes, [](const std::string& s) { return s; }));
  ini.str("scales", joined(c.scales, format_double));
  ini.str("seeds", joined(c.seeds, [](std::uint64_t s) { return std::to_string(s); }));
  ini.str("attacks", c.attacks.empty() ? "none" : joined(c.attacks, [](const std::string& s) { return s; }));
  ini.num("timeout", c.timeout_s).num("chen-dummies", static_cast<std::uint64_t>(c.chen_dummies.value_or(0)));
  ini.str("out", c.out.string()).flag("omit-timing", c.omit_timing);
  return ini.text();
}

std::string to_ini(const SplitBatchConfig& c) {
  Ini ini("split");
  ini.list("bench", path_strings(c.benches));
  ini.str("seeds", joined(c.seeds, [](std::uint64_t s) { return std::to_string(s); }));
  ini.str("scales", joined(c.scales, format_double)).flag("original-only", c.original_only);
  ini.str("thresholds", joined(c.thresholds, format_double));
  ini.num("beol-fraction", c.beol_fraction).str("strategy", c.strategy);
  ini.num("fanout-cap", static_cast<std::uint64_t>(c.fanout_cap)).num("bbox-frac", c.bbox_frac);
  ini.num("hd-patterns", c.hd_patterns).str("out", c.out.string()).flag("omit-timing", c.omit_timing);
  return ini.text();
}

namespace {

struct Args {
  CamouflageConfig camo;
  AttackBatchConfig attack;
  SplitBatchConfig split;
  LimitsConfig limits;
  EvaluateConfig evaluate;
  ReportConfig report;

  std::string seeds = "1";
  std::string scales;
  std::string attacks = "seminal";
  std::string schemes = "final-primitive";
  std::string thresholds = "0.1,0.25";
  std::vector<std::string> benches;
  std::string targets, out_file;
  std::size_t chen = 0;
};

void add_out_file(CLI::App* sub, std::string& target) {
  sub->add_option("-o,--out", target, "Output file (default: standard output)");
}

std::optional<std::filesystem::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

std::vector<std::string> words(std::string_view text) { return nonempty(split_commas(text)); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Camouflaging, SAT attacks, and proximity attacks on gate-level netlists"};
  app.name("bcamo");
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file; its [section] selects the subcommand");
  Args a;
  unsigned jobs = jobs_from_env();

  auto* camo = app.add_subcommand("camouflage", "Camouflage one netlist and export the keyed attack model");
  camo->configurable();
  camo->add_option("-b,--bench", a.camo.bench, "Input .bench netlist")->required();
  camo->add_option("-s,--scheme", a.camo.scheme, "final-primitive | ambiguous-<k> | chen-mux")->capture_default_str();
  camo->add_option("--scale", a.camo.scale, "Camouflaging scale in [0, 1]")->capture_default_str();
  camo->add_option("--seed", a.camo.seed, "Random seed")->capture_default_str();
  camo->add_option("-o,--out", a.camo.out, "Output directory")->capture_default_str();
  camo->add_option("--targets", a.targets, "Memorized target set (JSON) to reuse");
  camo->add_option("--tie-fraction", a.camo.tie_fraction, "TIE cells in disguise per gate")->capture_default_str();
  camo->add_option("--inv-buf-fraction", a.camo.inv_buf_fraction, "Share of targeted INV/BUF gates rewritten")
      ->capture_default_str();
  camo->add_option("--chen-dummies", a.chen, "Selector count for chen-mux (0: derived from the scale)");
  camo->add_option("--k-hops", a.camo.k_hops, "Neighborhood radius for dummy nets")->capture_default_str();

  auto* attack = app.add_subcommand("attack", "Run SAT attacks over benchmarks, schemes, scales, and seeds");
  attack->configurable();
  attack->add_option("-b,--bench", a.benches, "Input .bench netlists")->required()->delimiter(',');
  attack->add_option("-s,--schemes", a.schemes, "Comma-separated schemes")->capture_default_str();
  attack->add_option("--scales", a.scales, "Comma-separated scales, fractions or percentages (default 0.1)");
  attack->add_option("--seeds", a.seeds, "Seeds, e.g. 1-10 or 1,4,7")->capture_default_str();
  attack->add_option("--attacks", a.attacks, "seminal, double-dip, or none")->capture_default_str();
  attack->add_option("--timeout", a.attack.timeout_s, "Per-run budget in seconds")->capture_default_str();
  attack->add_option("--chen-dummies", a.chen, "Selector count for chen-mux (0: derived from the scale)");
  attack->add_option("-o,--out", a.attack.out, "Output directory")->capture_default_str();
  attack->add_option("-j,--jobs", jobs, "Worker threads")->envname(kJobsEnv);
  attack->add_flag("--omit-timing", a.attack.omit_timing, "Leave timing out of reports for byte-identical reruns");

  auto* split = app.add_subcommand("split", "Proximity attack on split layouts of original and camouflaged designs");
  split->configurable();
  split->add_option("-b,--bench", a.benches, "Input .bench netlists")->required()->delimiter(',');
  split->add_option("--seeds", a.seeds, "Seeds, e.g. 1-5")->capture_default_str();
  split->add_option("--scales", a.scales, "Camouflaging scales (default 20%,40%,60%,80%,100%)");
  split->add_flag("--original-only", a.split.original_only, "Attack the original layouts only");
  split->add_option("--thresholds", a.thresholds, "Split thresholds as fractions of the grid half-perimeter")
      ->capture_default_str();
  split->add_option("--beol-fraction", a.split.beol_fraction, "Share of a cut wire routed above the split")
      ->capture_default_str();
  split->add_option("--strategy", a.split.strategy, "greedy | min-cost")->capture_default_str();
  split->add_option("--fanout-cap", a.split.fanout_cap, "Sinks per driver pin at most")->capture_default_str();
  split->add_option("--bbox-frac", a.split.bbox_frac, "Window side for crouting metrics")->capture_default_str();
  split->add_option("--hd-patterns", a.split.hd_patterns, "Patterns for HD/OER (0 skips)")->capture_default_str();
  split->add_option("-o,--out", a.split.out, "Output directory")->capture_default_str();
  split->add_option("-j,--jobs", jobs, "Worker threads")->envname(kJobsEnv);
  split->add_flag("--omit-timing", a.split.omit_timing, "Leave timing out of reports for byte-identical reruns");

  auto* limits = app.add_subcommand("limits", "Camouflaging limits of library-dependent schemes");
  limits->configurable();
  limits->add_option("-c,--counts", a.limits.counts, "Cell counts CSV")->required();
  limits->add_option("-f,--format", a.limits.format, "csv | json")->capture_default_str();
  add_out_file(limits, a.out_file);

  auto* evaluate = app.add_subcommand("evaluate", "HD and OER between two netlists");
  evaluate->configurable();
  evaluate->add_option("golden", a.evaluate.golden, "Reference .bench netlist")->required();
  evaluate->add_option("candidate", a.evaluate.candidate, "Compared .bench netlist")->required();
  evaluate->add_option("-n,--patterns", a.evaluate.patterns, "Random patterns above 16 inputs")->capture_default_str();
  evaluate->add_option("--seed", a.evaluate.seed, "Random seed")->capture_default_str();
  evaluate->add_option("-f,--format", a.evaluate.format, "csv | json")->capture_default_str();
  add_out_file(evaluate, a.out_file);

  auto* report = app.add_subcommand("report", "Re-render a per-run JSON report");
  report->configurable();
  report->add_option("input", a.report.input, "runs.json written by the attack command")->required();
  report->add_option("-f,--format", a.report.format, "csv | json")->capture_default_str();
  report->add_flag("--aggregate", a.report.aggregate, "Emit per-cell aggregates instead of runs");
  add_out_file(report, a.out_file);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*camo) {
      a.camo.targets = opt_path(a.targets);
      if (a.chen) a.camo.chen_dummies = a.chen;
      validate(a.camo);
      return cmd_camouflage(a.camo, err);
    }
    if (*attack) {
      a.attack.benches.assign(a.benches.begin(), a.benches.end());
      a.attack.schemes = words(a.schemes);
      if (!a.scales.empty()) a.attack.scales = parse_scale_list(a.scales);
      a.attack.seeds = parse_seed_list(a.seeds);
      a.attack.attacks = a.attacks == "none" ? std::vector<std::string>{} : words(a.attacks);
      if (a.chen) a.attack.chen_dummies = a.chen;
      a.attack.jobs = jobs;
      validate(a.attack);
      return cmd_attack(a.attack, err);
    }
    if (*split) {
      a.split.benches.assign(a.benches.begin(), a.benches.end());
      a.split.seeds = parse_seed_list(a.seeds);
      if (!a.scales.empty()) a.split.scales = parse_scale_list(a.scales);
      a.split.thresholds.clear();
      for (auto t : split_commas(a.thresholds)) a.split.thresholds.push_back(parse_double(t, "threshold"));
      a.split.jobs = jobs;
      validate(a.split);
      return cmd_split(a.split, err);
    }
    if (*limits) {
      a.limits.out = opt_path(a.out_file);
      validate(a.limits);
      return cmd_limits(a.limits, out);
    }
    if (*evaluate) {
      a.evaluate.out = opt_path(a.out_file);
      validate(a.evaluate);
      return cmd_evaluate(a.evaluate, out);
    }
    if (*report) {
      a.report.out = opt_path(a.out_file);
      validate(a.report);
      return cmd_report(a.report, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace bcamo::cli
