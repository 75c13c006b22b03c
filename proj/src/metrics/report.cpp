#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "bcamo/metrics.hpp"

namespace bcamo {

using nlohmann::json;

namespace {

AttackStatus parse_status(const std::string& s) {
  for (AttackStatus st : {AttackStatus::Solved, AttackStatus::Timeout, AttackStatus::UnsatModelError}) {
    if (to_string(st) == s) return st;
  }
  throw ReportError("unknown attack status '" + s + "'");
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += csv_field(cells[i]);
  }
  return line + "\n";
}

std::string header(const std::vector<std::string>& columns) { return join_row(columns); }

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(kTimeoutMark); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  throw std::invalid_argument("unknown report format '" + std::string(s) + "' (expected json or csv)");
}

RunRecord make_run_record(std::string benchmark, std::string scheme, double scale, std::uint64_t seed,
                          std::string attack, std::size_t key_width, const AttackResult& r, bool with_timing) {
  RunRecord rec;
  rec.benchmark = std::move(benchmark);
  rec.scheme = std::move(scheme);
  rec.scale = scale;
  rec.seed = seed;
  rec.attack = std::move(attack);
  rec.key_width = key_width;
  rec.status = r.status;
  if (r.key) rec.key = r.key->to_string();
  rec.iterations = r.iterations;
  if (with_timing) rec.cpu_time_s = r.cpu_time_s;
  rec.decisions = r.solver.decisions;
  rec.conflicts = r.solver.conflicts;
  return rec;
}

const std::vector<std::string>& run_csv_columns() {
  static const std::vector<std::string> cols = {
      "benchmark", "scheme",    "scale",     "seed",       "attack",      "key_width",  "status", "key",
      "iterations", "cpu_time_s", "decisions", "conflicts", "hd_percent", "oer_percent", "hd_patterns"};
  return cols;
}

std::string runs_to_json(const std::vector<RunRecord>& records) {
  json runs = json::array();
  for (const RunRecord& r : records) {
    json hd = nullptr;
    if (r.hd_oer) {
      hd = {{"hd_percent", r.hd_oer->hd_percent},
            {"oer_percent", r.hd_oer->oer_percent},
            {"n_patterns", r.hd_oer->n_patterns},
            {"seed", r.hd_oer->seed},
            {"exhaustive", r.hd_oer->exhaustive}};
    }
    runs.push_back({{"benchmark", r.benchmark},
                    {"scheme", r.scheme},
                    {"scale", r.scale},
                    {"seed", r.seed},
                    {"attack", r.attack},
                    {"key_width", r.key_width},
                    {"status", std::string(to_string(r.status))},
                    {"key", optional_json(r.key)},
                    {"iterations", r.iterations},
                    {"cpu_time_s", optional_json(r.cpu_time_s)},
                    {"solver", {{"decisions", r.decisions}, {"conflicts", r.conflicts}}},
                    {"hd_oer", hd}});
  }
  json doc = {{"schema_version", kReportSchemaVersion}, {"runs", runs}};
  return doc.dump(2) + "\n";
}

std::vector<RunRecord> runs_from_json(std::string_view text) {
  std::vector<RunRecord> out;
  try {
    const json doc = json::parse(text);
    const int version = doc.at("schema_version").get<int>();
    if (version != kReportSchemaVersion) {
      throw ReportError("unsupported report schema version " + std::to_string(version));
    }
    for (const json& j : doc.at("runs")) {
      RunRecord r;
      r.benchmark = j.at("benchmark").get<std::string>();
      r.scheme = j.at("scheme").get<std::string>();
      r.scale = j.at("scale").get<double>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.attack = j.at("attack").get<std::string>();
      r.key_width = j.at("key_width").get<std::size_t>();
      r.status = parse_status(j.at("status").get<std::string>());
      if (!j.at("key").is_null()) r.key = j.at("key").get<std::string>();
      r.iterations = j.at("iterations").get<std::uint64_t>();
      if (!j.at("cpu_time_s").is_null()) r.cpu_time_s = j.at("cpu_time_s").get<double>();
      r.decisions = j.at("solver").at("decisions").get<std::uint64_t>();
      r.conflicts = j.at("solver").at("conflicts").get<std::uint64_t>();
      if (const json& hd = j.at("hd_oer"); !hd.is_null()) {
        HdOerReport h;
        h.hd_percent = hd.at("hd_percent").get<double>();
        h.oer_percent = hd.at("oer_percent").get<double>();
        h.n_patterns = hd.at("n_patterns").get<std::uint64_t>();
        h.seed = hd.at("seed").get<std::uint64_t>();
        h.exhaustive = hd.at("exhaustive").get<bool>();
        r.hd_oer = h;
      }
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ReportError(std::string("malformed run report: ") + e.what());
  }
  return out;
}

std::string runs_to_csv(const std::vector<RunRecord>& records) {
  std::string out = header(run_csv_columns());
  for (const RunRecord& r : records) {
    std::string cpu;
    if (r.status == AttackStatus::Timeout) {
      cpu = kTimeoutMark;
    } else if (r.cpu_time_s) {
      cpu = format_double(*r.cpu_time_s);
    }
    out += join_row({r.benchmark, r.scheme, format_double(r.scale), std::to_string(r.seed), r.attack,
                     std::to_string(r.key_width), std::string(to_string(r.status)), r.key.value_or(""),
                     std::to_string(r.iterations), cpu, std::to_string(r.decisions), std::to_string(r.conflicts),
                     r.hd_oer ? format_double(r.hd_oer->hd_percent) : "",
                     r.hd_oer ? format_double(r.hd_oer->oer_percent) : "",
                     r.hd_oer ? std::to_string(r.hd_oer->n_patterns) : ""});
  }
  return out;
}

std::string render_runs(const std::vector<RunRecord>& records, ReportFormat format) {
  return format == ReportFormat::Json ? runs_to_json(records) : runs_to_csv(records);
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records) {
  using GroupKey = std::tuple<std::string, std::string, double, std::string>;
  std::map<GroupKey, std::size_t> index;
  std::vector<AggregateRow> rows;
  std::vector<std::vector<double>> cpu;
  std::vector<std::vector<double>> iters;
  std::vector<bool> timed;
  for (const RunRecord& r : records) {
    GroupKey key{r.benchmark, r.scheme, r.scale, r.attack};
    auto [it, inserted] = index.emplace(key, rows.size());
    if (inserted) {
      AggregateRow row;
      row.benchmark = r.benchmark;
      row.scheme = r.scheme;
      row.scale = r.scale;
      row.attack = r.attack;
      rows.push_back(std::move(row));
      cpu.emplace_back();
      iters.emplace_back();
      timed.push_back(true);
    }
    const std::size_t i = it->second;
    AggregateRow& row = rows[i];
    ++row.runs;
    switch (r.status) {
      case AttackStatus::Solved:
        ++row.solved;
        iters[i].push_back(static_cast<double>(r.iterations));
        if (r.cpu_time_s) {
          cpu[i].push_back(*r.cpu_time_s);
        } else {
          timed[i] = false;
        }
        break;
      case AttackStatus::Timeout: ++row.timeouts; break;
      case AttackStatus::UnsatModelError: ++row.errors; break;
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (iters[i].empty()) continue;
    auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    rows[i].mean_iterations = mean(iters[i]);
    rows[i].median_iterations = median(iters[i]);
    if (timed[i]) {
      rows[i].mean_cpu_s = mean(cpu[i]);
      rows[i].median_cpu_s = median(cpu[i]);
    }
  }
  return rows;
}

const std::vector<std::string>& aggregate_csv_columns() {
  static const std::vector<std::string> cols = {
      "benchmark",  "scheme",       "scale",           "attack",           "runs",         "solved",
      "timeouts",   "errors",       "mean_cpu_s",      "median_cpu_s",     "mean_iterations", "median_iterations"};
  return cols;
}

std::string aggregates_to_json(const std::vector<AggregateRow>& rows) {
  json arr = json::array();
  for (const AggregateRow& r : rows) {
    arr.push_back({{"benchmark", r.benchmark},
                   {"scheme", r.scheme},
                   {"scale", r.scale},
                   {"attack", r.attack},
                   {"runs", r.runs},
                   {"solved", r.solved},
                   {"timeouts", r.timeouts},
                   {"errors", r.errors},
                   {"mean_cpu_s", optional_json(r.mean_cpu_s)},
                   {"median_cpu_s", optional_json(r.median_cpu_s)},
                   {"mean_iterations", optional_json(r.mean_iterations)},
                   {"median_iterations", optional_json(r.median_iterations)}});
  }
  json doc = {{"schema_version", kReportSchemaVersion}, {"aggregates", arr}};
  return doc.dump(2) + "\n";
}

std::string aggregates_to_csv(const std::vector<AggregateRow>& rows) {
  std::string out = header(aggregate_csv_columns());
  for (const AggregateRow& r : rows) {
    // Timing omitted but runs solved: leave the runtime cells blank.
    const bool solved = r.solved > 0;
    auto cell = [&](const std::optional<double>& v) { return solved && !v ? std::string() : optional_cell(v); };
    out += join_row({r.benchmark, r.scheme, format_double(r.scale), r.attack, std::to_string(r.runs),
                     std::to_string(r.solved), std::to_string(r.timeouts), std::to_string(r.errors),
                     cell(r.mean_cpu_s), cell(r.median_cpu_s), cell(r.mean_iterations),
                     cell(r.median_iterations)});
  }
  return out;
}

}  // namespace bcamo
