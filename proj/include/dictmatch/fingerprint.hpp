#pragma once
// Karp-Rabin style fingerprints with O(1) concatenation, split and reversal.

#include <cstddef>
#include <vector>

#include "dictmatch/field.hpp"

namespace dictmatch {

using Char = std::uint32_t;
using Str = std::vector<Char>;

// phi     = sum S[i] * r^(len-i)   (i is 1-based)
// phi_rev = sum S[i] * r^(i-1)
// Together with r^len and r^-len the family is closed under concat/split.
struct Fingerprint {
  Fe phi;
  Fe phi_rev;
  Fe r_len{1};
  Fe r_len_inv{1};
  std::uint64_t len = 0;
};

Fingerprint fp_empty(const Field& f);
Fingerprint fp_of_string(const Field& f, const Char* s, std::size_t n);
Fingerprint fp_of_string(const Field& f, const Str& s);
// Appends one character; O(1).
Fingerprint fp_extend(const Field& f, const Fingerprint& a, Char c);

Fingerprint fp_concat(const Field& f, const Fingerprint& a, const Fingerprint& b);
// Z = X.Y: given Z and the prefix X, recovers Y.
Fingerprint fp_split_suffix(const Field& f, const Fingerprint& z, const Fingerprint& x);
// Z = X.Y: given Z and the suffix Y, recovers X.
Fingerprint fp_split_prefix(const Field& f, const Fingerprint& z, const Fingerprint& y);
Fingerprint fp_reverse(const Field& f, const Fingerprint& a);

bool fp_equal(const Fingerprint& a, const Fingerprint& b);

}  // namespace dictmatch
