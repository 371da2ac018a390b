#pragma once
// Query accessors: a search never sees the query string itself, only prefix
// fingerprints and prefix sketches. Wrappers compose suffix offsets and
// per-position character fixups on top of any base accessor, so recursive
// lookups never materialize a substring.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dictmatch/sketch.hpp"

namespace dictmatch {

class QueryAccess {
 public:
  virtual ~QueryAccess() = default;
  virtual std::uint64_t length() const = 0;
  // Fingerprint of Q[1..len].
  virtual Fingerprint prefix_fingerprint(std::uint64_t len) const = 0;
  // Sketch of Q[1..len] at sketch_budget().
  virtual Sketch prefix_sketch(std::uint64_t len) const = 0;
  virtual std::size_t sketch_budget() const = 0;
};

// Owns the string; prefix summaries precomputed, O(1)/O(k) per access.
class StringQuery : public QueryAccess {
 public:
  StringQuery(const Field& f, const Str& s, std::size_t k) {
    fps_.reserve(s.size() + 1);
    sks_.reserve(s.size() + 1);
    fps_.push_back(fp_empty(f));
    sks_.push_back(sk_empty(f, k));
    for (Char c : s) {
      fps_.push_back(fp_extend(f, fps_.back(), c));
      sks_.push_back(sk_extend(f, sks_.back(), c));
    }
  }
  std::uint64_t length() const override { return fps_.size() - 1; }
  Fingerprint prefix_fingerprint(std::uint64_t len) const override {
    if (len >= fps_.size()) throw std::out_of_range("query: prefix beyond length");
    return fps_[len];
  }
  Sketch prefix_sketch(std::uint64_t len) const override {
    if (len >= sks_.size()) throw std::out_of_range("query: prefix beyond length");
    return sks_[len];
  }
  std::size_t sketch_budget() const override { return sks_[0].k; }

 private:
  std::vector<Fingerprint> fps_;
  std::vector<Sketch> sks_;
};

// The suffix of `base` starting after position `offset`.
class OffsetView : public QueryAccess {
 public:
  OffsetView(const Field& f, const QueryAccess& base, std::uint64_t offset)
      : f_(f), base_(base), offset_(offset) {
    if (offset > base.length()) throw std::invalid_argument("offset view: offset beyond base");
  }
  std::uint64_t length() const override { return base_.length() - offset_; }
  Fingerprint prefix_fingerprint(std::uint64_t len) const override {
    return fp_split_suffix(f_, base_.prefix_fingerprint(offset_ + len),
                           base_.prefix_fingerprint(offset_));
  }
  Sketch prefix_sketch(std::uint64_t len) const override {
    return sk_split(f_, base_.prefix_sketch(offset_ + len), base_.prefix_sketch(offset_),
                    Side::Prefix);
  }
  std::size_t sketch_budget() const override { return base_.sketch_budget(); }

 private:
  const Field& f_;
  const QueryAccess& base_;
  std::uint64_t offset_;
};

struct Fixup {
  std::uint64_t pos = 0;  // 1-based position in the viewed string
  Char from = 0;          // character the base accessor reports there
  Char to = 0;            // character this view reports instead
};

// `base` with up to budget positions rewritten. Summaries are adjusted
// algebraically, never recomputed from characters.
class FixupView : public QueryAccess {
 public:
  FixupView(const Field& f, const QueryAccess& base, std::vector<Fixup> fixups)
      : f_(f), base_(base), fixups_(std::move(fixups)) {
    for (const Fixup& x : fixups_)
      if (x.pos == 0 || x.pos > base.length())
        throw std::invalid_argument("fixup view: position outside the base");
  }
  std::uint64_t length() const override { return base_.length(); }
  Fingerprint prefix_fingerprint(std::uint64_t len) const override {
    Fingerprint out = base_.prefix_fingerprint(len);
    for (const Fixup& x : fixups_) {
      if (x.pos > len) continue;
      Fe diff = f_.sub(f_.from(x.to), f_.from(x.from));
      out.phi = f_.add(out.phi, f_.mul(diff, f_.pow(f_.point(), len - x.pos)));
      out.phi_rev = f_.add(out.phi_rev, f_.mul(diff, f_.pow(f_.point(), x.pos - 1)));
    }
    return out;
  }
  Sketch prefix_sketch(std::uint64_t len) const override {
    Sketch out = base_.prefix_sketch(len);
    for (const Fixup& x : fixups_) {
      if (x.pos > len) continue;
      Fe to = f_.from(x.to), from = f_.from(x.from);
      Fe diff = f_.sub(to, from);
      Fe diff2 = f_.sub(f_.mul(to, to), f_.mul(from, from));
      Fe pos = f_.reduce(x.pos);
      Fe pw = f_.one();
      for (std::size_t j = 0; j < out.phi.size(); ++j) {
        out.phi[j] = f_.add(out.phi[j], f_.mul(diff, pw));
        if (j < out.phi2.size()) out.phi2[j] = f_.add(out.phi2[j], f_.mul(diff2, pw));
        pw = f_.mul(pw, pos);
      }
      Fe diffr = f_.mul(diff, f_.pow(f_.point(), len - x.pos));
      out.fp.phi = f_.add(out.fp.phi, diffr);
      out.fp.phi_rev = f_.add(out.fp.phi_rev, f_.mul(diff, f_.pow(f_.point(), x.pos - 1)));
    }
    return out;
  }
  std::size_t sketch_budget() const override { return base_.sketch_budget(); }
  const std::vector<Fixup>& fixups() const { return fixups_; }

 private:
  const Field& f_;
  const QueryAccess& base_;
  std::vector<Fixup> fixups_;
};

}  // namespace dictmatch
