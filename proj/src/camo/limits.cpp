#include <charconv>
#include <stdexcept>

#include "bcamo/camo.hpp"

namespace bcamo {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    std::string_view f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    out.push_back(f);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(LimitScheme s) {
  switch (s) {
    case LimitScheme::XorType: return "xor-type";
    case LimitScheme::StfType: return "stf-type";
    case LimitScheme::XorNandNor: return "xor-nand-nor";
    case LimitScheme::Threshold: return "threshold";
    case LimitScheme::Ours: return "ours";
  }
  return "?";
}

const std::vector<std::string>& relevant_cells(LimitScheme s) {
  static const std::vector<std::string> xor_type = {"BUF", "INV", "AND2", "NAND2", "OR2", "NOR2", "AND3", "NAND3"};
  static const std::vector<std::string> stf_type = {"BUF", "INV", "AND2", "NAND2", "OR2", "AND3"};
  static const std::vector<std::string> xor_nand_nor = {"XOR2", "NAND2", "NOR2"};
  static const std::vector<std::string> threshold = {"AND2", "NAND2", "NOR2", "OR2", "XOR2", "XNOR2"};
  static const std::vector<std::string> none;
  switch (s) {
    case LimitScheme::XorType: return xor_type;
    case LimitScheme::StfType: return stf_type;
    case LimitScheme::XorNandNor: return xor_nand_nor;
    case LimitScheme::Threshold: return threshold;
    case LimitScheme::Ours: return none;
  }
  return none;
}

double camo_limit(const CellCounts& counts, LimitScheme scheme) {
  if (counts.total == 0) throw std::invalid_argument("benchmark '" + counts.benchmark + "' has zero cell instances");
  if (scheme == LimitScheme::Ours) return 100.0;
  std::uint64_t relevant = 0;
  for (const auto& cell : relevant_cells(scheme)) {
    auto it = counts.counts.find(cell);
    if (it != counts.counts.end()) relevant += it->second;
  }
  return 100.0 * static_cast<double>(relevant) / static_cast<double>(counts.total);
}

std::vector<CellCounts> parse_cell_counts(std::string_view csv) {
  std::vector<CellCounts> rows;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < csv.size()) {
    std::size_t end = csv.find('\n', start);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_fields(line);
    if (header.empty()) {
      if (fields.size() < 2 || fields[0] != "benchmark" || fields[1] != "total") {
        throw CellCountsError("line " + std::to_string(line_no) + ": header must start with 'benchmark,total'");
      }
      header.assign(fields.begin(), fields.end());
      continue;
    }
    if (fields.size() != header.size()) {
      throw CellCountsError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
    }
    CellCounts row;
    row.benchmark = std::string(fields[0]);
    if (row.benchmark.empty()) throw CellCountsError("line " + std::to_string(line_no) + ": empty benchmark name");
    for (std::size_t i = 1; i < fields.size(); ++i) {
      std::uint64_t value = 0;
      auto [ptr, ec] = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), value);
      if (ec != std::errc() || ptr != fields[i].data() + fields[i].size() || fields[i].empty()) {
        throw CellCountsError("line " + std::to_string(line_no) + ": field '" + header[i] +
                              "' is not a nonnegative integer");
      }
      if (i == 1) {
        row.total = value;
      } else {
        row.counts[header[i]] = value;
      }
    }
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw CellCountsError("cell-count file is empty");
  return rows;
}

}  // namespace bcamo
