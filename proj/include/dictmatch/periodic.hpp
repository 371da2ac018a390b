#pragma once
// Periodicity machinery for the streaming matcher: k-periods, the longest
// small-period suffix L of the recent text window, and a compact structure D
// that serves a budget-4k sketch of any suffix of L.

#include <cstdint>
#include <vector>

#include "dictmatch/sketch.hpp"

namespace dictmatch {

// Minimal pi > 0 such that s and its pi-shift disagree in at most 2k of the
// overlapping positions; pi = |s| always qualifies. 0 for the empty string.
std::uint64_t k_period(const Str& s, std::size_t k);

// Budget-4k sketches of text prefixes: prefix(pos) covers T[1..pos] and
// prefix(0) is empty. Implementations may refuse positions that fell out of
// their retention window by throwing std::out_of_range.
class PrefixSketchSource {
 public:
  virtual ~PrefixSketchSource() = default;
  virtual Sketch prefix(std::uint64_t pos) const = 0;
};

// Sketch of T[a..b] rebased to positions 1..b-a+1; empty when b < a.
Sketch window_sketch(const Field& f, const PrefixSketchSource& ps, std::uint64_t a,
                     std::uint64_t b);

struct PeriodicSuffix {
  std::uint64_t boundary = 0;  // block boundary j*d this was computed at
  std::uint64_t start = 0;     // text position of the first character of L
  std::uint64_t rho = 0;       // minimal shift <= d whose overlap HD is <= 4k
  std::uint64_t len = 0;       // |L|
};

// Recompute L at the next block boundary: the longest suffix of
// T[boundary-m+1 .. boundary] (clamped at the text start) whose overlap with
// its own rho-shift, for some rho <= d, disagrees in at most 4k places.
// Suffixes longer than the previous L plus d cannot qualify and are not
// searched; pass prev = nullptr at the first boundary. boundary must be a
// positive multiple of d.
PeriodicSuffix update_L(const Field& f, const PrefixSketchSource& ps, std::uint64_t boundary,
                        std::uint64_t m, std::uint64_t d, std::size_t k,
                        const PeriodicSuffix* prev);

// Sketches for O(k) mismatch-containing blocks of L cut into rho-sized
// blocks. Anything between two stored blocks is an exact repetition of the
// earlier one, so any suffix of L reassembles from stored pieces.
struct DStructure {
  std::uint64_t rho = 0;
  std::uint64_t len = 0;  // |L| this was built for
  struct Block {
    std::uint64_t index = 0;  // 1-based block number
    std::uint64_t start = 0;  // block start within L (1-based)
    std::uint64_t size = 0;   // rho, except a shorter final block
    std::vector<Sketch> suffixes;  // [i] = sketch of block[i+1 .. size]
    Sketch l_suffix;               // sketch of L[start .. |L|]
  };
  std::vector<Block> blocks;  // ascending by index; block 1 always present
};

// Flag the blocks where the rho-shift comparison disagrees (the shifted-side
// position decides the block), plus block 1, and store their sketches.
DStructure build_D(const Field& f, const PrefixSketchSource& ps, const PeriodicSuffix& L,
                   std::size_t k);

// Exact budget-4k sketch of L[start .. |L|], assembled as: a stored suffix of
// the nearest flagged block on the left, whole-block repetitions, a partial
// block prefix, then the stored L-suffix of the next flagged block.
Sketch d_suffix_sketch(const Field& f, const DStructure& D, std::uint64_t start);

// Stepwise form of one boundary update (update_L, then build_D), so the work
// can be spread over the following block. A step is one shift probe or one
// stored-sketch extraction; run(n) consumes at most n steps and the finished
// results equal the monolithic calls exactly. max_steps() bounds the total a
// priori, so ceil(max_steps/d) steps per character always finishes in time.
class PeriodicUpdateJob {
 public:
  PeriodicUpdateJob(const Field& f, const PrefixSketchSource& ps, std::uint64_t boundary,
                    std::uint64_t m, std::uint64_t d, std::size_t k, const PeriodicSuffix* prev);
  std::size_t run(std::size_t steps);
  bool done() const { return phase_ == 3; }
  const PeriodicSuffix& suffix() const;  // finished jobs only
  DStructure take_structure();           // finished jobs only; moves out
  std::size_t max_steps() const { return max_steps_; }

 private:
  bool step();

  const Field& f_;
  const PrefixSketchSource& ps_;
  std::uint64_t boundary_, d_, cap_;
  std::size_t k_;
  int phase_ = 0;  // 0 shift searches, 1 flagging, 2 block extraction, 3 done
  std::uint64_t rho_ = 1, lo_ = 0, hi_ = 0, best_len_ = 0, best_rho_ = 0;
  PeriodicSuffix L_;
  DStructure D_;
  std::vector<std::uint64_t> flagged_;
  std::size_t fb_ = 0;
  std::uint64_t off_ = 0;
  std::size_t max_steps_ = 0;
};

}  // namespace dictmatch
