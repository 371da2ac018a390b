#include "dictmatch/periodic.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace dictmatch {

std::uint64_t k_period(const Str& s, std::size_t k) {
  std::uint64_t n = s.size();
  for (std::uint64_t pi = 1; pi < n; ++pi) {
    std::size_t hd = 0;
    for (std::uint64_t i = 0; i + pi < n && hd <= 2 * k; ++i) hd += s[i + pi] != s[i];
    if (hd <= 2 * k) return pi;
  }
  return n;
}

Sketch window_sketch(const Field& f, const PrefixSketchSource& ps, std::uint64_t a,
                     std::uint64_t b) {
  if (a < 1) throw std::invalid_argument("periodic: window starts at 1");
  Sketch whole = ps.prefix(b < a ? a - 1 : b);
  if (b < a) return sk_empty(f, whole.k);
  if (a == 1) return whole;
  return sk_split(f, whole, ps.prefix(a - 1), Side::Prefix);
}

namespace {

Sketch window4k(const Field& f, const PrefixSketchSource& ps, std::uint64_t a, std::uint64_t b,
                std::size_t k) {
  Sketch s = window_sketch(f, ps, a, b);
  if (s.k < 4 * k) throw std::invalid_argument("periodic: prefix sketches need budget 4k");
  return s.k > 4 * k ? sk_truncate(s, 4 * k) : s;
}

}  // namespace

PeriodicSuffix update_L(const Field& f, const PrefixSketchSource& ps, std::uint64_t boundary,
                        std::uint64_t m, std::uint64_t d, std::size_t k,
                        const PeriodicSuffix* prev) {
  if (d == 0 || boundary == 0 || boundary % d != 0)
    throw std::invalid_argument("periodic: boundary must be a positive multiple of d");
  if (m == 0) throw std::invalid_argument("periodic: m must be positive");
  std::uint64_t w = std::min(boundary, m);
  std::uint64_t cap = prev ? std::min(w, prev->len + d) : w;

  std::uint64_t best_len = 0, best_rho = 0;
  for (std::uint64_t rho = 1; rho <= d; ++rho) {
    auto ok = [&](std::uint64_t ell) {
      if (ell <= rho) return true;  // empty overlap
      Sketch shifted = window4k(f, ps, boundary - ell + 1 + rho, boundary, k);
      Sketch base = window4k(f, ps, boundary - ell + 1, boundary - rho, k);
      return sk_distance(f, shifted, base).has_value();
    };
    // overlap HD is monotone in the suffix length, so the longest qualifying
    // length binary-searches
    std::uint64_t lo = std::min(rho, cap), hi = cap;
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo + 1) / 2;
      if (ok(mid))
        lo = mid;
      else
        hi = mid - 1;
    }
    if (lo > best_len) {
      best_len = lo;
      best_rho = rho;
    }
  }
  return {boundary, boundary - best_len + 1, best_rho, best_len};
}

DStructure build_D(const Field& f, const PrefixSketchSource& ps, const PeriodicSuffix& L,
                   std::size_t k) {
  if (L.len == 0 || L.rho == 0 || L.start == 0 || L.start + L.len - 1 != L.boundary)
    throw std::invalid_argument("period structure: malformed suffix descriptor");
  auto sub = [&](std::uint64_t a, std::uint64_t b) {  // L-local, inclusive
    return window4k(f, ps, L.start + a - 1, L.start + b - 1, k);
  };

  DStructure D;
  D.rho = L.rho;
  D.len = L.len;

  std::set<std::uint64_t> flagged = {1};
  if (L.len > L.rho) {
    auto verdict = sk_distance(f, sub(L.rho + 1, L.len), sub(1, L.len - L.rho));
    if (!verdict) throw std::invalid_argument("period structure: shift overlap exceeds 4k");
    for (const Mismatch& mm : *verdict)
      flagged.insert((mm.pos + L.rho - 1) / L.rho + 1);  // block of the shifted-side position
  }

  for (std::uint64_t b : flagged) {
    DStructure::Block blk;
    blk.index = b;
    blk.start = (b - 1) * L.rho + 1;
    blk.size = std::min(b * L.rho, L.len) - blk.start + 1;
    blk.suffixes.reserve(blk.size);
    for (std::uint64_t off = 0; off < blk.size; ++off)
      blk.suffixes.push_back(sub(blk.start + off, blk.start + blk.size - 1));
    blk.l_suffix = sub(blk.start, L.len);
    D.blocks.push_back(std::move(blk));
  }
  return D;
}

Sketch d_suffix_sketch(const Field& f, const DStructure& D, std::uint64_t start) {
  if (start < 1 || start > D.len)
    throw std::invalid_argument("period structure: start out of range");
  std::uint64_t b = (start - 1) / D.rho + 1;
  const DStructure::Block* left = nullptr;
  const DStructure::Block* next = nullptr;
  for (const auto& blk : D.blocks) {
    if (blk.index <= b)
      left = &blk;
    else {
      next = &blk;
      break;
    }
  }
  if (left->index == b && start == left->start) return left->l_suffix;

  // from `start` to the next stored block the text repeats `left`'s content
  std::uint64_t o = (start - 1) % D.rho;
  std::uint64_t stop = next ? next->start - 1 : D.len;
  std::uint64_t n = stop - start + 1;
  std::uint64_t head_len = std::min<std::uint64_t>(n, D.rho - o);
  Sketch out = o + head_len == left->size
                   ? left->suffixes[o]
                   : sk_split(f, left->suffixes[o], left->suffixes[o + head_len], Side::Suffix);
  std::uint64_t rest = n - head_len;
  if (rest >= D.rho) out = sk_concat(f, out, sk_power(f, left->suffixes[0], rest / D.rho));
  if (rest % D.rho > 0)
    out = sk_concat(
        f, out, sk_split(f, left->suffixes[0], left->suffixes[rest % D.rho], Side::Suffix));
  if (next) out = sk_concat(f, out, next->l_suffix);
  return out;
}

}  // namespace dictmatch
