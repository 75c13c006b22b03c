#include "bcamo/bench.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace bcamo {

namespace {

bool is_name_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',' && c != '=' && c != '#';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(a[i])) != std::toupper(static_cast<unsigned char>(b[i]))) return false;
  }
  return true;
}

class LineScanner {
 public:
  LineScanner(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string_view name() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected a net name");
    return text_.substr(start, pos_ - start);
  }
  [[noreturn]] void fail(const std::string& what) const { throw BenchParseError(line_, what); }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

GateFunc tree_func(GateFunc f) {
  switch (f) {
    case GateFunc::Nand: return GateFunc::And;
    case GateFunc::Nor: return GateFunc::Or;
    case GateFunc::Xnor: return GateFunc::Xor;
    default: return f;
  }
}

// Level-by-level pairwise reduction: [x0 x1 x2 x3 x4] -> [(x0 x1) (x2 x3) x4]
// -> [((x0 x1)(x2 x3)) x4] -> root. The root carries the requested function,
// so inverting gates become an AND/OR/XOR tree with an inverting root.
void add_decomposed(NetlistBuilder& b, GateFunc func, std::vector<NetId> level, std::string_view out) {
  const GateFunc inner = tree_func(func);
  std::size_t counter = 0;
  while (level.size() > 2) {
    std::vector<NetId> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      std::string name = b.fresh_name(std::string(kDecompositionPrefix) + std::string(out) + "_" +
                                      std::to_string(counter++));
      NetId id = b.net(name);
      b.add_gate(inner, level[i], level[i + 1], b.net_info(id).name);
      next.push_back(id);
    }
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  b.add_gate(func, level[0], level[1], out);
}

}  // namespace

Netlist parse_bench(std::string_view text, std::string name) {
  NetlistBuilder b(std::move(name));
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }

    LineScanner scan(line, line_no);
    std::string_view first = scan.name();
    try {
      if (scan.accept('(')) {
        std::string_view arg = scan.name();
        scan.expect(')');
        if (!scan.at_end()) scan.fail("trailing characters");
        if (iequals(first, "INPUT")) {
          b.add_input(arg);
        } else if (iequals(first, "OUTPUT")) {
          b.add_output(b.net(arg));
        } else {
          scan.fail("unknown declaration '" + std::string(first) + "'");
        }
      } else {
        scan.expect('=');
        std::string_view func_name = scan.name();
        scan.expect('(');
        std::vector<NetId> args;
        if (!scan.accept(')')) {
          do {
            args.push_back(b.net(scan.name()));
          } while (scan.accept(','));
          scan.expect(')');
        }
        if (!scan.at_end()) scan.fail("trailing characters");

        if (iequals(func_name, "CONST0") || iequals(func_name, "CONST1")) {
          if (!args.empty()) scan.fail("constants take no arguments");
          b.add_constant(first, iequals(func_name, "CONST1"));
          continue;
        }
        auto func = gate_func_from_string(func_name);
        if (!func) scan.fail("unknown gate type '" + std::string(func_name) + "'");
        if (arity(*func) == 1) {
          if (args.size() != 1) scan.fail(std::string(func_name) + " takes exactly one input");
          b.add_gate(*func, args, first);
        } else if (args.size() < 2) {
          scan.fail(std::string(func_name) + " needs at least two inputs");
        } else if (args.size() == 2) {
          b.add_gate(*func, args, first);
        } else {
          add_decomposed(b, *func, std::move(args), first);
        }
      }
    } catch (const NetlistError& e) {
      throw NetlistError(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (end == text.size()) break;
  }
  return b.build();
}

std::string write_bench(const Netlist& n) {
  std::ostringstream out;
  if (!n.name().empty()) out << "# " << n.name() << "\n";
  for (NetId id : n.inputs()) out << "INPUT(" << n.net(id).name << ")\n";
  for (NetId id : n.outputs()) out << "OUTPUT(" << n.net(id).name << ")\n";
  for (const Net& net : n.nets()) {
    if (net.kind == NetKind::Const0) out << net.name << " = CONST0()\n";
    if (net.kind == NetKind::Const1) out << net.name << " = CONST1()\n";
  }
  for (const Gate& g : n.gates()) {
    out << n.net(g.out).name << " = " << to_string(g.func) << "(";
    for (unsigned p = 0; p < g.arity(); ++p) {
      if (p) out << ", ";
      out << n.net(g.in[p]).name;
    }
    out << ")\n";
  }
  return out.str();
}

Netlist read_bench_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open bench file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bench(buf.str(), path.stem().string());
}

void write_bench_file(const std::filesystem::path& path, const Netlist& n) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write bench file '" + path.string() + "'");
  out << write_bench(n);
}

}  // namespace bcamo
