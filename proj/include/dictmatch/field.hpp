#pragma once
// Prime-field arithmetic used by fingerprints and sketches.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dictmatch {

using u64 = std::uint64_t;

// A value in [0, p). Wrapped so raw integers cannot be mixed in unreduced.
struct Fe {
  u64 v = 0;
};

inline u64 splitmix64(u64& state) {
  state += 0x9e3779b97f4a7c15ull;
  u64 z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Modulus plus the random evaluation point r drawn from a recorded seed.
class Field {
 public:
  static constexpr u64 kDefaultPrime = (1ull << 61) - 1;

  // Draws r uniformly from [0, p). max_len bounds the strings this field will
  // fingerprint; the collision budget p > max_len * n_trials / eps is checked.
  static Field with_seed(u64 p, u64 seed, u64 max_len = 1u << 20,
                         u64 n_trials = 1000000, double eps = 1e-3);
  // Explicit r, for worked examples and reproduction of known values.
  // max_len must stay below p: sketches need positions distinct mod p.
  static Field with_point(u64 p, u64 r, u64 max_len = 64);

  u64 prime() const { return p_; }
  Fe point() const { return r_; }
  Fe point_inv() const { return r_inv_; }
  u64 seed() const { return seed_; }
  u64 max_len() const { return max_len_; }

  Fe zero() const { return {0}; }
  Fe one() const { return {1}; }
  Fe from(u64 x) const {
    if (x >= p_) throw std::invalid_argument("field: value out of range");
    return {x};
  }
  Fe reduce(u64 x) const { return {x % p_}; }

  Fe add(Fe a, Fe b) const {
    u64 s = a.v + b.v;
    if (s >= p_) s -= p_;
    return {s};
  }
  Fe sub(Fe a, Fe b) const { return {a.v >= b.v ? a.v - b.v : a.v + p_ - b.v}; }
  Fe neg(Fe a) const { return {a.v == 0 ? 0 : p_ - a.v}; }
  Fe mul(Fe a, Fe b) const {
    return {static_cast<u64>((unsigned __int128)a.v * b.v % p_)};
  }
  Fe pow(Fe a, u64 e) const {
    Fe acc{1};
    while (e) {
      if (e & 1) acc = mul(acc, a);
      a = mul(a, a);
      e >>= 1;
    }
    return acc;
  }
  Fe inv(Fe a) const {
    if (a.v == 0) throw std::invalid_argument("field: inverse of zero");
    return pow(a, p_ - 2);
  }

  static bool is_prime(u64 n);

 private:
  Field(u64 p, u64 r, u64 seed, u64 max_len);
  u64 p_;
  Fe r_;
  Fe r_inv_;
  u64 seed_;
  u64 max_len_;
};

}  // namespace dictmatch
