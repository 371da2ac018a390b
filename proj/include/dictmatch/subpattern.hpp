#pragma once
// Reduction from k-mismatch matching to exact matching. For prime pairs
// (q, r), a pattern splits into arithmetic-progression subpatterns with
// stride q*r; the text splits into q*r substreams the same way, each running
// an exact multi-pattern matcher. An alignment's mismatches are recovered
// from which subpatterns failed to match exactly.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "dictmatch/ztrie.hpp"

namespace dictmatch {

struct PrimeScheme {
  std::uint64_t m = 0;  // max pattern length the scheme was sized for
  std::size_t k = 0;
  std::vector<std::uint64_t> q_set, r_set;  // ascending
};

// First ceil(log m / log log m) primes above log2(m) for Q, k times as many
// for R; counts clamped to at least one prime per set.
PrimeScheme gen_primes(std::uint64_t m, std::size_t k);

// P[ell], P[q*r + ell], P[2*q*r + ell], ... (1-based); empty if ell > |P|.
Str extract_subpattern(const Str& p, std::uint64_t q, std::uint64_t r, std::uint64_t ell);

struct SubReport {
  std::size_t pair = 0;
  std::uint64_t substream = 0;  // 1-based residue class of the position
  int node = -1;                // reverse-trie node of the longest match, -1 if none
};

// Per (q, r) pair: the substream numbers ell whose subpattern of one pattern
// matched exactly at one alignment.
struct AlignmentEvidence {
  std::vector<std::set<std::uint64_t>> matched;
};

class SubpatternIndex {
 public:
  // history: per-substream longest-match reports kept for later evidence
  // queries (1 suffices when occurrences are checked as soon as they end).
  SubpatternIndex(const Field& f, const std::vector<std::pair<std::uint32_t, Str>>& patterns,
                  std::size_t k, std::size_t history = 2);
  SubpatternIndex(const Field& f, const std::vector<std::pair<std::uint32_t, Str>>& patterns,
                  PrimeScheme scheme, std::size_t history = 2);
  ~SubpatternIndex();
  SubpatternIndex(SubpatternIndex&&) noexcept;

  const PrimeScheme& scheme() const { return scheme_; }
  std::size_t pair_count() const;
  std::pair<std::uint64_t, std::uint64_t> pair(std::size_t idx) const;

  // Consume the next text character (positions start at 1 and must arrive in
  // order). Advances one substream per pair; reports each pair's longest
  // subpattern ending here.
  std::vector<SubReport> feed(std::uint64_t text_pos, Char c);
  std::uint64_t position() const { return pos_; }

  // Reverse-trie node where (pattern id)'s substream-ell subpattern ends;
  // -1 when that subpattern is empty.
  int sub_node(std::size_t pair_idx, std::uint32_t id, std::uint64_t ell) const;
  // A subpattern matches wherever the longest one does iff its reverse is a
  // prefix of the longest match's reverse.
  bool sub_matches(std::size_t pair_idx, int sub, int longest) const;

  // Exact-match evidence for pattern `id` aligned to end at text_end; the
  // alignment must lie fully in the consumed text and within history.
  AlignmentEvidence evidence_for(std::uint32_t id, std::uint64_t text_end) const;
  // Exact Hamming distance of the aligned occurrence when it is <= k, else
  // nullopt. Deterministic given exact evidence.
  std::optional<std::size_t> verify_alignment(std::uint32_t id, const AlignmentEvidence& ev) const;
  std::optional<std::size_t> check_occurrence(std::uint32_t id, std::uint64_t text_end) const;

  std::size_t automaton_states() const;  // excluded from structural space counts

 private:
  struct Pair;
  void build(const Field& f, const std::vector<std::pair<std::uint32_t, Str>>& patterns,
             std::size_t history);

  PrimeScheme scheme_;
  std::size_t k_ = 0;
  std::uint64_t pos_ = 0;
  std::map<std::uint32_t, Str> pats_;
  std::vector<Pair> pairs_;
};

}  // namespace dictmatch
