#pragma once
// Brute-force reference implementations. Slow on purpose; tests compare the
// streaming engine and its pieces against these.

#include <cstddef>
#include <optional>
#include <vector>

#include "dictmatch/fingerprint.hpp"

namespace dictmatch {
namespace oracle {

struct Mism {
  std::uint64_t pos = 0;  // 1-based
  Char lhs = 0;
  Char rhs = 0;
};

// Hamming distance of equal-length strings; nullopt when lengths differ.
std::optional<std::size_t> hamming(const Str& a, const Str& b);
std::vector<Mism> mismatches(const Str& a, const Str& b);

struct Hit {
  std::uint64_t end_pos = 0;  // 1-based position of the last character
  std::size_t pattern_id = 0;
  std::size_t distance = 0;
};

// Every (position, pattern) pair where the text suffix ending there is within
// k mismatches of the pattern. Sorted by (end_pos, pattern_id).
std::vector<Hit> dictionary_match(const std::vector<Str>& patterns, const Str& text,
                                  std::size_t k);

// Smallest shift 0 < pi <= |s| whose overlap disagrees in at most `budget`
// places. pi = |s| always qualifies (empty overlap); 0 for the empty string.
std::size_t k_period(const Str& s, std::size_t budget);

struct SuffixRun {
  std::size_t start = 0;  // 1-based start of the suffix in s; 0 when none
  std::size_t len = 0;
  std::size_t shift = 0;  // k_period of the suffix
};

// Longest suffix of s whose k_period at `budget` mismatches is <= max_shift.
// Ties cannot happen (longest is unique); SuffixRun{0,0,0} when even the
// 1-char suffix fails, which cannot occur for max_shift >= 1.
SuffixRun longest_small_shift_suffix(const Str& s, std::size_t budget,
                                     std::size_t max_shift);

}  // namespace oracle
}  // namespace dictmatch
