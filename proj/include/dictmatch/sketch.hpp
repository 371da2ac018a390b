#pragma once
// k-mismatch sketches: power-sum moments phi[j] = sum S[i]*i^j (j = 0..2k)
// and phi2[j] = sum S[i]^2*i^j (j = 0..k), plus the fingerprint. Two sketches
// of equal-length strings decide HD <= k and decode the mismatches.

#include <cstddef>
#include <optional>
#include <vector>

#include "dictmatch/fingerprint.hpp"

namespace dictmatch {

struct Mismatch {
  std::uint64_t pos = 0;  // 1-based
  Char a = 0;             // character of the first string
  Char b = 0;             // character of the second string
};

inline bool operator==(const Mismatch& x, const Mismatch& y) {
  return x.pos == y.pos && x.a == y.a && x.b == y.b;
}

// nullopt = Far (HD > k, w.h.p.); otherwise the full mismatch list, positions
// strictly increasing.
using DistanceVerdict = std::optional<std::vector<Mismatch>>;

struct Sketch {
  std::size_t k = 0;
  std::vector<Fe> phi;   // 2k+1 entries
  std::vector<Fe> phi2;  // k+1 entries
  Fingerprint fp;
  std::uint64_t len() const { return fp.len; }
};

enum class Side { Prefix, Suffix };

Sketch sk_empty(const Field& f, std::size_t k);
Sketch sk_of_string(const Field& f, const Str& s, std::size_t k);
// Appends one character at position len+1; O(k).
Sketch sk_extend(const Field& f, const Sketch& a, Char c);
Sketch sk_concat(const Field& f, const Sketch& a, const Sketch& b);
// side says which piece `part` is; returns the complementary piece, rebased
// to positions 1..len.
Sketch sk_split(const Field& f, const Sketch& whole, const Sketch& part, Side side);
Sketch sk_power(const Field& f, const Sketch& s, std::uint64_t n);
Sketch sk_reverse(const Field& f, const Sketch& s);
// Drops moments down to budget k2 <= s.k.
Sketch sk_truncate(const Sketch& s, std::size_t k2);

DistanceVerdict sk_distance(const Field& f, const Sketch& a, const Sketch& b);

// Componentwise equality of the summaries themselves.
bool sk_identical(const Sketch& a, const Sketch& b);

// Pascal triangle mod p, rows 0..n inclusive.
std::vector<std::vector<Fe>> binomial_rows(const Field& f, std::size_t n);

}  // namespace dictmatch
