#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "bcamo/attack.hpp"
#include "bcamo/bench.hpp"
#include "bcamo/camo.hpp"
#include "bcamo/camo_io.hpp"
#include "bcamo/cli.hpp"
#include "bcamo/keyed.hpp"
#include "bcamo/metrics.hpp"
#include "bcamo/split.hpp"

namespace bcamo::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void prepare_out(const fs::path& dir, const std::string& resolved_config) {
  fs::create_directories(dir);
  write_text_file(dir / kResolvedConfigName, resolved_config);
}

void emit(const std::optional<fs::path>& out_file, std::ostream& out, const std::string& text) {
  if (out_file) {
    write_text_file(*out_file, text);
  } else {
    out << text;
  }
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
  return s + "\n";
}

std::vector<Netlist> load_all(const std::vector<fs::path>& paths) {
  std::vector<Netlist> out;
  for (const auto& p : paths) out.push_back(read_bench_file(p));
  return out;
}

std::string bench_name(const fs::path& p) { return p.stem().string(); }

std::string percent_2dp(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// camouflage

int cmd_camouflage(const CamouflageConfig& c, std::ostream& log) {
  const Netlist n = read_bench_file(c.bench);
  std::optional<TargetSet> memorized;
  if (c.targets) memorized = load_target_set(*c.targets);

  PipelineOptions po;
  po.scheme = SchemeId::parse(c.scheme);
  po.scale = c.scale;
  po.seed = c.seed;
  po.tie_fraction = c.tie_fraction;
  po.inv_buf_fraction = c.inv_buf_fraction;
  po.chen_dummies = c.chen_dummies;
  po.dummy.k_hops = c.k_hops;
  const PipelineResult pr = camouflage(n, po, memorized ? &*memorized : nullptr);
  const KeyedConversion kc = to_keyed(pr.camo);

  prepare_out(c.out, to_ini(c));
  const std::string stem = bench_name(c.bench);
  write_bench_file(c.out / (stem + ".keyed.bench"), kc.keyed.circuit);
  write_bench_file(c.out / (stem + ".base.bench"), pr.camo.base);
  write_text_file(c.out / (stem + ".camo.json"), camo_public_json(pr.camo));
  write_text_file(c.out / (stem + ".secret.json"), camo_secret_json(pr.camo));
  save_target_set(c.out / (stem + ".targets.json"), pr.targets);
  write_text_file(c.out / (stem + ".key"), kc.correct_key.to_string() + "\n");
  std::string notes;
  for (const auto& line : pr.camo.log) notes += line + "\n";
  write_text_file(c.out / (stem + ".log"), notes);

  log << stem << ": " << pr.camo.pin_choices.size() << " camouflaged pins, " << pr.camo.function_choices.size()
      << " camouflaged functions, key width " << kc.keyed.key_width() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// attack

int cmd_attack(const AttackBatchConfig& c, std::ostream& log) {
  const std::vector<Netlist> designs = load_all(c.benches);
  struct Cell {
    std::size_t bench;
    std::string scheme;
    double scale;
    std::uint64_t seed;
    std::string attack;
  };
  std::vector<Cell> cells;
  for (std::size_t b = 0; b < designs.size(); ++b) {
    for (const auto& scheme : c.schemes) {
      for (double scale : c.scales) {
        for (std::uint64_t seed : c.seeds) {
          for (const auto& attack : c.attacks) cells.push_back({b, scheme, scale, seed, attack});
        }
      }
    }
  }

  std::vector<RunRecord> records(cells.size());
  parallel_for(cells.size(), c.jobs, [&](std::size_t i) {
    const Cell& cell = cells[i];
    const Netlist& n = designs[cell.bench];
    PipelineOptions po;
    po.scheme = SchemeId::parse(cell.scheme);
    po.scale = cell.scale;
    po.seed = cell.seed;
    po.chen_dummies = c.chen_dummies;
    const KeyedConversion kc = to_keyed(camouflage(n, po).camo);
    Oracle oracle(n);
    AttackConfig ac;
    ac.timeout_s = c.timeout_s;
    ac.seed = cell.seed;
    const AttackResult r = cell.attack == "double-dip" ? double_dip_attack(kc.keyed, oracle, ac)
                                                       : seminal_attack(kc.keyed, oracle, ac);
    records[i] = make_run_record(bench_name(c.benches[cell.bench]), cell.scheme, cell.scale, cell.seed, cell.attack,
                                 kc.keyed.key_width(), r, !c.omit_timing);
  });

  prepare_out(c.out, to_ini(c));
  write_text_file(c.out / "runs.json", runs_to_json(records));
  write_text_file(c.out / "runs.csv", runs_to_csv(records));
  const auto rows = aggregate(records);
  write_text_file(c.out / "aggregates.json", aggregates_to_json(rows));
  write_text_file(c.out / "aggregates.csv", aggregates_to_csv(rows));

  std::size_t solved = 0, timeouts = 0;
  for (const auto& r : records) {
    solved += r.status == AttackStatus::Solved ? 1 : 0;
    timeouts += r.status == AttackStatus::Timeout ? 1 : 0;
  }
  log << records.size() << " runs: " << solved << " solved, " << timeouts << " timed out, "
      << records.size() - solved - timeouts << " model errors\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// split

namespace {

struct SplitRow {
  std::string benchmark;
  std::uint64_t seed = 0;
  double split_fraction = 0.0;
  double threshold = 0.0;
  /// Camouflaging scale; absent for the original design.
  std::optional<double> scale;
  std::size_t cut_sinks = 0;
  std::size_t cut_inputs = 0;
  double ccr_percent = 0.0;
  std::optional<HdOerReport> hd;
  CroutingMetrics crouting;
  std::optional<double> runtime_s;
};

const std::vector<std::string>& split_run_columns() {
  static const std::vector<std::string> cols = {
      "benchmark",  "seed",        "split_fraction", "threshold", "scale", "cut_sinks", "cut_inputs",
      "ccr_percent", "hd_percent", "oer_percent",    "vpins",     "e_ls",  "fom",       "runtime_s"};
  return cols;
}

std::string scale_cell(const std::optional<double>& s) { return s ? format_double(*s) : "original"; }

std::string split_runs_csv(const std::vector<SplitRow>& rows) {
  std::string out = csv_line(split_run_columns());
  for (const auto& r : rows) {
    out += csv_line({r.benchmark, std::to_string(r.seed), format_double(r.split_fraction), format_double(r.threshold),
                     scale_cell(r.scale), std::to_string(r.cut_sinks), std::to_string(r.cut_inputs),
                     format_double(r.ccr_percent), r.hd ? format_double(r.hd->hd_percent) : "",
                     r.hd ? format_double(r.hd->oer_percent) : "", std::to_string(r.crouting.vpins),
                     format_double(r.crouting.e_ls), format_double(r.crouting.fom),
                     r.runtime_s ? format_double(*r.runtime_s) : ""});
  }
  return out;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string split_runs_json(const std::vector<SplitRow>& rows) {
  json runs = json::array();
  for (const auto& r : rows) {
    runs.push_back({{"benchmark", r.benchmark},
                    {"seed", r.seed},
                    {"split_fraction", r.split_fraction},
                    {"threshold", r.threshold},
                    {"scale", opt_json(r.scale)},
                    {"cut_sinks", r.cut_sinks},
                    {"cut_inputs", r.cut_inputs},
                    {"ccr_percent", r.ccr_percent},
                    {"hd_percent", opt_json(r.hd ? std::optional(r.hd->hd_percent) : std::nullopt)},
                    {"oer_percent", opt_json(r.hd ? std::optional(r.hd->oer_percent) : std::nullopt)},
                    {"vpins", r.crouting.vpins},
                    {"e_ls", r.crouting.e_ls},
                    {"fom", r.crouting.fom},
                    {"runtime_s", opt_json(r.runtime_s)}});
  }
  return json{{"schema_version", kReportSchemaVersion}, {"runs", runs}}.dump(2) + "\n";
}

struct SplitSummary {
  std::string benchmark;
  double split_fraction = 0.0;
  std::optional<double> scale;
  std::size_t seeds = 0;
  double mean_cut_inputs = 0.0;
  double mean_ccr = 0.0;
  double median_ccr = 0.0;
  std::optional<double> mean_hd;
  std::optional<double> mean_oer;
  double mean_vpins = 0.0;
  double mean_e_ls = 0.0;
  double mean_fom = 0.0;
};

std::vector<SplitSummary> summarize(const std::vector<SplitRow>& rows) {
  std::vector<SplitSummary> out;
  std::vector<std::vector<const SplitRow*>> groups;
  std::map<std::tuple<std::string, double, double>, std::size_t> index;
  for (const auto& r : rows) {
    auto key = std::make_tuple(r.benchmark, r.split_fraction, r.scale.value_or(-1.0));
    auto [it, fresh] = index.emplace(key, groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(&r);
  }
  for (const auto& g : groups) {
    SplitSummary s;
    s.benchmark = g.front()->benchmark;
    s.split_fraction = g.front()->split_fraction;
    s.scale = g.front()->scale;
    s.seeds = g.size();
    std::vector<double> ccr;
    double hd = 0.0, oer = 0.0;
    bool have_hd = true;
    for (const SplitRow* r : g) {
      s.mean_cut_inputs += static_cast<double>(r->cut_inputs);
      ccr.push_back(r->ccr_percent);
      s.mean_vpins += static_cast<double>(r->crouting.vpins);
      s.mean_e_ls += r->crouting.e_ls;
      s.mean_fom += r->crouting.fom;
      if (r->hd) {
        hd += r->hd->hd_percent;
        oer += r->hd->oer_percent;
      } else {
        have_hd = false;
      }
    }
    const double k = static_cast<double>(g.size());
    s.mean_cut_inputs /= k;
    for (double v : ccr) s.mean_ccr += v / k;
    s.median_ccr = median(ccr);
    s.mean_vpins /= k;
    s.mean_e_ls /= k;
    s.mean_fom /= k;
    if (have_hd) {
      s.mean_hd = hd / k;
      s.mean_oer = oer / k;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string summary_csv(const std::vector<SplitSummary>& rows) {
  std::string out = csv_line({"benchmark", "split_fraction", "scale", "seeds", "mean_cut_inputs", "mean_ccr_percent",
                              "median_ccr_percent", "mean_hd_percent", "mean_oer_percent", "mean_vpins", "mean_e_ls",
                              "mean_fom"});
  for (const auto& s : rows) {
    out += csv_line({s.benchmark, format_double(s.split_fraction), scale_cell(s.scale), std::to_string(s.seeds),
                     format_double(s.mean_cut_inputs), format_double(s.mean_ccr), format_double(s.median_ccr),
                     s.mean_hd ? format_double(*s.mean_hd) : "", s.mean_oer ? format_double(*s.mean_oer) : "",
                     format_double(s.mean_vpins), format_double(s.mean_e_ls), format_double(s.mean_fom)});
  }
  return out;
}

std::string summary_json(const std::vector<SplitSummary>& rows) {
  json arr = json::array();
  for (const auto& s : rows) {
    arr.push_back({{"benchmark", s.benchmark},
                   {"split_fraction", s.split_fraction},
                   {"scale", opt_json(s.scale)},
                   {"seeds", s.seeds},
                   {"mean_cut_inputs", s.mean_cut_inputs},
                   {"mean_ccr_percent", s.mean_ccr},
                   {"median_ccr_percent", s.median_ccr},
                   {"mean_hd_percent", opt_json(s.mean_hd)},
                   {"mean_oer_percent", opt_json(s.mean_oer)},
                   {"mean_vpins", s.mean_vpins},
                   {"mean_e_ls", s.mean_e_ls},
                   {"mean_fom", s.mean_fom}});
  }
  return json{{"schema_version", kReportSchemaVersion}, {"summary", arr}}.dump(2) + "\n";
}

}  // namespace

int cmd_split(const SplitBatchConfig& c, std::ostream& log) {
  const std::vector<Netlist> designs = load_all(c.benches);
  const MatchStrategy strategy = parse_match_strategy(c.strategy);
  struct Cell {
    std::size_t bench;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t b = 0; b < designs.size(); ++b) {
    for (std::uint64_t seed : c.seeds) cells.push_back({b, seed});
  }

  std::vector<std::vector<SplitRow>> per_cell(cells.size());
  parallel_for(cells.size(), c.jobs, [&](std::size_t i) {
    const Netlist& n = designs[cells[i].bench];
    const std::uint64_t seed = cells[i].seed;
    const Placement p = place(n, {seed});

    struct Variant {
      std::optional<double> scale;
      CamoNetlist camo;
      Placement placement;
    };
    std::vector<Variant> variants;
    variants.push_back({std::nullopt, {}, p});
    if (!c.original_only) {
      for (double scale : c.scales) {
        PipelineOptions po;
        po.scale = scale;
        po.seed = seed;
        CamoNetlist camo = camouflage(n, po).camo;
        Placement cp = extend_placement(n, p, camo.base, seed);
        variants.push_back({scale, std::move(camo), std::move(cp)});
      }
    }

    for (double fraction : c.thresholds) {
      SplitPolicy policy = SplitPolicy::length(fraction * (p.width + p.height));
      policy.beol_fraction = c.beol_fraction;
      for (const Variant& var : variants) {
        const SplitView v = var.scale ? make_split_view(var.camo.base, var.placement, policy, &var.camo)
                                      : make_split_view(n, var.placement, policy);
        MatchOptions mo;
        mo.strategy = strategy;
        mo.fanout_cap = c.fanout_cap;
        mo.seed = seed;
        const MatchResult m = proximity_match(v, mo);
        SplitRow row;
        row.benchmark = bench_name(c.benches[cells[i].bench]);
        row.seed = seed;
        row.split_fraction = fraction;
        row.threshold = policy.threshold;
        row.scale = var.scale;
        row.cut_sinks = v.sinks.size();
        row.cut_inputs = v.cut_inputs;
        row.ccr_percent = m.ccr_percent;
        if (c.hd_patterns > 0) row.hd = hd_oer(n, m.proposed, c.hd_patterns, seed);
        row.crouting = crouting_metrics(v, c.bbox_frac);
        if (!c.omit_timing) row.runtime_s = m.runtime_s;
        per_cell[i].push_back(std::move(row));
      }
    }
  });

  std::vector<SplitRow> rows;
  for (auto& v : per_cell) rows.insert(rows.end(), v.begin(), v.end());
  prepare_out(c.out, to_ini(c));
  write_text_file(c.out / "split_runs.json", split_runs_json(rows));
  write_text_file(c.out / "split_runs.csv", split_runs_csv(rows));
  const auto summary = summarize(rows);
  write_text_file(c.out / "split_summary.json", summary_json(summary));
  write_text_file(c.out / "split_summary.csv", summary_csv(summary));
  log << rows.size() << " proximity attacks over " << cells.size() << " placements\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// limits, evaluate, report

int cmd_limits(const LimitsConfig& c, std::ostream& out) {
  const auto table = parse_cell_counts(read_text_file(c.counts));
  static const LimitScheme schemes[] = {LimitScheme::XorType, LimitScheme::XorNandNor, LimitScheme::Threshold,
                                        LimitScheme::Ours};
  std::string text;
  if (parse_report_format(c.format) == ReportFormat::Csv) {
    std::vector<std::string> header = {"benchmark", "total"};
    for (LimitScheme s : schemes) header.emplace_back(to_string(s));
    text = csv_line(header);
    for (const auto& row : table) {
      std::vector<std::string> cells = {row.benchmark, std::to_string(row.total)};
      for (LimitScheme s : schemes) cells.push_back(percent_2dp(camo_limit(row, s)));
      text += csv_line(cells);
    }
  } else {
    json arr = json::array();
    for (const auto& row : table) {
      json j = {{"benchmark", row.benchmark}, {"total", row.total}};
      for (LimitScheme s : schemes) j[std::string(to_string(s))] = std::round(camo_limit(row, s) * 100.0) / 100.0;
      arr.push_back(std::move(j));
    }
    text = json{{"schema_version", kReportSchemaVersion}, {"limits", arr}}.dump(2) + "\n";
  }
  emit(c.out, out, text);
  return kExitOk;
}

int cmd_evaluate(const EvaluateConfig& c, std::ostream& out) {
  const Netlist a = read_bench_file(c.golden);
  const Netlist b = read_bench_file(c.candidate);
  const HdOerReport r = hd_oer(a, b, c.patterns, c.seed);
  std::string text;
  if (parse_report_format(c.format) == ReportFormat::Csv) {
    text = csv_line({"golden", "candidate", "hd_percent", "oer_percent", "n_patterns", "seed", "exhaustive"});
    text += csv_line({c.golden.string(), c.candidate.string(), format_double(r.hd_percent),
                      format_double(r.oer_percent), std::to_string(r.n_patterns), std::to_string(r.seed),
                      r.exhaustive ? "true" : "false"});
  } else {
    text = json{{"schema_version", kReportSchemaVersion},
                {"golden", c.golden.string()},
                {"candidate", c.candidate.string()},
                {"hd_percent", r.hd_percent},
                {"oer_percent", r.oer_percent},
                {"n_patterns", r.n_patterns},
                {"seed", r.seed},
                {"exhaustive", r.exhaustive}}
               .dump(2) +
           "\n";
  }
  emit(c.out, out, text);
  return kExitOk;
}

int cmd_report(const ReportConfig& c, std::ostream& out) {
  const auto records = runs_from_json(read_text_file(c.input));
  const ReportFormat f = parse_report_format(c.format);
  std::string text;
  if (c.aggregate) {
    const auto rows = aggregate(records);
    text = f == ReportFormat::Csv ? aggregates_to_csv(rows) : aggregates_to_json(rows);
  } else {
    text = render_runs(records, f);
  }
  emit(c.out, out, text);
  return kExitOk;
}

}  // namespace bcamo::cli
