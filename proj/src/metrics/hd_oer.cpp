#include <algorithm>
#include <bit>
#include <stdexcept>

#include "bcamo/metrics.hpp"
#include "bcamo/rng.hpp"
#include "bcamo/simulate.hpp"

namespace bcamo {

HdOerReport hd_oer(const Netlist& a, const Netlist& b, std::uint64_t n_patterns, std::uint64_t seed) {
  const InterfaceMap map = match_interfaces(a, b);
  const std::size_t width = a.inputs().size();
  const std::size_t outs = a.outputs().size();
  HdOerReport r;
  r.seed = seed;
  r.exhaustive = width <= kMaxExhaustiveHdInputs;
  if (!r.exhaustive && n_patterns == 0) throw std::invalid_argument("hd_oer needs at least one pattern");
  r.n_patterns = r.exhaustive ? std::uint64_t{1} << width : n_patterns;

  std::vector<std::uint64_t> words_a(width);
  std::vector<std::uint64_t> words_b(width);
  std::uint64_t bit_errors = 0;
  std::uint64_t pattern_errors = 0;
  Rng rng(derive_seed(seed, "hd-oer"));
  for (std::uint64_t done = 0; done < r.n_patterns; done += 64) {
    const std::uint64_t count = std::min<std::uint64_t>(64, r.n_patterns - done);
    const std::uint64_t valid = count == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << count) - 1;
    for (std::size_t i = 0; i < width; ++i) words_a[i] = r.exhaustive ? exhaustive_word(i, done / 64) : rng.next();
    for (std::size_t i = 0; i < width; ++i) words_b[i] = words_a[map.input_of_b[i]];
    const auto va = simulate_words(a, words_a);
    const auto vb = simulate_words(b, words_b);
    std::uint64_t any = 0;
    for (std::size_t o = 0; o < outs; ++o) {
      const std::uint64_t diff = (va[a.outputs()[map.output_of_b[o]]] ^ vb[b.outputs()[o]]) & valid;
      bit_errors += static_cast<std::uint64_t>(std::popcount(diff));
      any |= diff;
    }
    pattern_errors += static_cast<std::uint64_t>(std::popcount(any));
  }
  const double n = static_cast<double>(r.n_patterns);
  r.hd_percent = outs == 0 ? 0.0 : 100.0 * static_cast<double>(bit_errors) / (n * static_cast<double>(outs));
  r.oer_percent = 100.0 * static_cast<double>(pattern_errors) / n;
  return r;
}

}  // namespace bcamo
