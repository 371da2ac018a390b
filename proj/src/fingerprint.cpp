#include "dictmatch/fingerprint.hpp"

namespace dictmatch {

bool Field::is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  auto powmod = [n](u64 a, u64 e) {
    u64 acc = 1;
    while (e) {
      if (e & 1) acc = static_cast<u64>((unsigned __int128)acc * a % n);
      a = static_cast<u64>((unsigned __int128)a * a % n);
      e >>= 1;
    }
    return acc;
  };
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a % n, d);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = static_cast<u64>((unsigned __int128)x * x % n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

Field::Field(u64 p, u64 r, u64 seed, u64 max_len)
    : p_(p), r_{r}, r_inv_{0}, seed_(seed), max_len_(max_len) {
  r_inv_ = r == 0 ? Fe{0} : inv(r_);
}

Field Field::with_seed(u64 p, u64 seed, u64 max_len, u64 n_trials, double eps) {
  if (!is_prime(p)) throw std::invalid_argument("field: modulus is not prime");
  if (eps <= 0 || static_cast<long double>(p) <= static_cast<long double>(max_len) * n_trials / eps)
    throw std::invalid_argument("field: modulus too small for the collision budget");
  u64 state = seed;
  u64 bound = p * ((~0ull) / p);  // rejection sampling keeps the draw uniform
  u64 x;
  do {
    x = splitmix64(state);
  } while (x >= bound || x % p == 0);  // 0 has no inverse; redraw
  return Field(p, x % p, seed, max_len);
}

Field Field::with_point(u64 p, u64 r, u64 max_len) {
  if (!is_prime(p)) throw std::invalid_argument("field: modulus is not prime");
  if (r >= p) throw std::invalid_argument("field: point out of range");
  if (p <= max_len) throw std::invalid_argument("field: modulus too small");
  return Field(p, r, 0, max_len);
}

Fingerprint fp_empty(const Field& f) {
  return Fingerprint{f.zero(), f.zero(), f.one(), f.one(), 0};
}

Fingerprint fp_extend(const Field& f, const Fingerprint& a, Char c) {
  Fe cv = f.from(c);
  Fingerprint out;
  out.phi = f.add(f.mul(a.phi, f.point()), cv);
  // new char sits at position len+1, contributing c * r^len to phi_rev
  out.phi_rev = f.add(a.phi_rev, f.mul(cv, a.r_len));
  out.r_len = f.mul(a.r_len, f.point());
  out.r_len_inv = f.mul(a.r_len_inv, f.point_inv());
  out.len = a.len + 1;
  return out;
}

Fingerprint fp_of_string(const Field& f, const Char* s, std::size_t n) {
  Fingerprint out = fp_empty(f);
  for (std::size_t i = 0; i < n; ++i) out = fp_extend(f, out, s[i]);
  return out;
}

Fingerprint fp_of_string(const Field& f, const Str& s) {
  return fp_of_string(f, s.data(), s.size());
}

Fingerprint fp_concat(const Field& f, const Fingerprint& a, const Fingerprint& b) {
  Fingerprint out;
  out.phi = f.add(f.mul(a.phi, b.r_len), b.phi);
  out.phi_rev = f.add(a.phi_rev, f.mul(b.phi_rev, a.r_len));
  out.r_len = f.mul(a.r_len, b.r_len);
  out.r_len_inv = f.mul(a.r_len_inv, b.r_len_inv);
  out.len = a.len + b.len;
  return out;
}

Fingerprint fp_split_suffix(const Field& f, const Fingerprint& z, const Fingerprint& x) {
  if (x.len > z.len) throw std::invalid_argument("fp_split_suffix: prefix longer than whole");
  Fingerprint out;
  out.r_len = f.mul(z.r_len, x.r_len_inv);
  out.r_len_inv = f.mul(z.r_len_inv, x.r_len);
  out.phi = f.sub(z.phi, f.mul(x.phi, out.r_len));
  out.phi_rev = f.mul(f.sub(z.phi_rev, x.phi_rev), x.r_len_inv);
  out.len = z.len - x.len;
  return out;
}

Fingerprint fp_split_prefix(const Field& f, const Fingerprint& z, const Fingerprint& y) {
  if (y.len > z.len) throw std::invalid_argument("fp_split_prefix: suffix longer than whole");
  Fingerprint out;
  out.r_len = f.mul(z.r_len, y.r_len_inv);
  out.r_len_inv = f.mul(z.r_len_inv, y.r_len);
  out.phi = f.mul(f.sub(z.phi, y.phi), y.r_len_inv);
  out.phi_rev = f.sub(z.phi_rev, f.mul(y.phi_rev, out.r_len));
  out.len = z.len - y.len;
  return out;
}

Fingerprint fp_reverse(const Field&, const Fingerprint& a) {
  Fingerprint out = a;
  std::swap(out.phi, out.phi_rev);
  return out;
}

bool fp_equal(const Fingerprint& a, const Fingerprint& b) {
  return a.len == b.len && a.phi.v == b.phi.v && a.phi_rev.v == b.phi_rev.v;
}

}  // namespace dictmatch
