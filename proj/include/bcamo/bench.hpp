#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bcamo/netlist.hpp"

namespace bcamo {

/// Bench syntax error; `line()` is 1-based (0 when not tied to a line).
class BenchParseError : public std::runtime_error {
 public:
  BenchParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reserved prefix for nets introduced by multi-input gate decomposition.
inline constexpr std::string_view kDecompositionPrefix = "__dec_";

/// Parses bench text into a validated netlist.
///
/// Gates with more than two inputs are decomposed into a balanced tree of
/// 2-input gates (see docs/format.md). Throws BenchParseError for syntax
/// problems and NetlistError for structural ones (cycles, undriven nets,
/// duplicate drivers).
Netlist parse_bench(std::string_view text, std::string name = {});

/// Serializes a netlist; parse_bench(write_bench(n)) is isomorphic to n.
std::string write_bench(const Netlist& n);

Netlist read_bench_file(const std::filesystem::path& path);
void write_bench_file(const std::filesystem::path& path, const Netlist& n);

}  // namespace bcamo
