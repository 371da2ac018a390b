#include "dictmatch/oracle.hpp"

#include <algorithm>

namespace dictmatch {
namespace oracle {

std::optional<std::size_t> hamming(const Str& a, const Str& b) {
  if (a.size() != b.size()) return std::nullopt;
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

std::vector<Mism> mismatches(const Str& a, const Str& b) {
  std::vector<Mism> out;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) out.push_back({i + 1, a[i], b[i]});
  }
  return out;
}

std::vector<Hit> dictionary_match(const std::vector<Str>& patterns, const Str& text,
                                  std::size_t k) {
  std::vector<Hit> out;
  for (std::uint64_t end = 1; end <= text.size(); ++end) {
    for (std::size_t id = 0; id < patterns.size(); ++id) {
      const Str& p = patterns[id];
      if (p.empty() || p.size() > end) continue;
      std::size_t d = 0;
      std::size_t off = end - p.size();
      for (std::size_t i = 0; i < p.size() && d <= k; ++i) d += p[i] != text[off + i];
      if (d <= k) out.push_back({end, id, d});
    }
  }
  return out;
}

std::size_t k_period(const Str& s, std::size_t budget) {
  if (s.empty()) return 0;
  for (std::size_t pi = 1; pi < s.size(); ++pi) {
    std::size_t d = 0;
    for (std::size_t i = 0; i + pi < s.size() && d <= budget; ++i) d += s[i] != s[i + pi];
    if (d <= budget) return pi;
  }
  return s.size();
}

SuffixRun longest_small_shift_suffix(const Str& s, std::size_t budget,
                                     std::size_t max_shift) {
  for (std::size_t len = s.size(); len >= 1; --len) {
    Str suf(s.end() - len, s.end());
    std::size_t pi = k_period(suf, budget);
    if (pi != 0 && pi <= max_shift) return {s.size() - len + 1, len, pi};
  }
  return {0, 0, 0};
}

}  // namespace oracle
}  // namespace dictmatch
