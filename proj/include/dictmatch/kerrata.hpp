#pragma once
// Dictionary lookup with up to k mismatches. A recursive structure over
// compact tries: per heavy path, vertical substitution tries (one off-path
// character rewritten to the heavy character); per node, horizontal
// substitution tries (prefix cut through the off-path character); both sides
// grouped under weight-balanced trees whose every group owns a merged trie
// and a (k-1)-capacity subtree. A lookup walks the canonical path once, then
// spends one mismatch to branch into the group structures and fast-forwards
// along edges by sketch distance.

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "dictmatch/ztrie.hpp"

namespace dictmatch {

struct LookupHit {
  std::uint32_t id = 0;
  std::uint64_t matched_length = 0;  // prefix of the query this hit spans
  std::size_t distance = 0;
};

enum class LookupMode { ExactLength, AnyPrefix };

struct SearchStats {
  std::uint64_t prefix_searches = 0;
  std::uint64_t probes = 0;
  std::uint64_t fast_forwards = 0;
};

// Structural counters for the size-bound and space-shape tests.
struct TreeStats {
  std::size_t tries = 0;
  std::size_t nodes = 0;
  std::size_t sketched_nodes = 0;
  std::size_t handle_entries = 0;
  std::size_t id_copies_total = 0;
  std::size_t id_copies_max = 0;
};

class ErrataTree {
 public:
  ErrataTree(const Field& f, const std::vector<std::pair<std::uint32_t, Str>>& dictionary,
             std::size_t k);
  ~ErrataTree();
  ErrataTree(ErrataTree&&) noexcept;

  // All (id, matched_length, distance) with distance <= k, against the whole
  // query (ExactLength) or any of its prefixes (AnyPrefix). Sorted by
  // (matched_length, id); duplicates collapsed to the smallest distance.
  std::vector<LookupHit> lookup(const QueryAccess& q, LookupMode mode,
                                SearchStats* stats = nullptr) const;

  // Node of the base trie where this id's string ends exactly.
  int end_node(std::uint32_t id) const;
  const CompactTrie& base_trie() const;
  std::size_t budget() const { return k_; }
  TreeStats stats() const;

 private:
  struct Level;
  struct Grouping;
  struct Ctx;

  static std::unique_ptr<Level> build_level(
      const Field& f, const std::vector<std::pair<std::uint32_t, Str>>& strings,
      std::size_t depth);
  void search_level(const Level& lv, const QueryAccess& view, std::size_t credit,
                    std::size_t spent, std::uint64_t offset, Ctx& ctx) const;
  void descend(const Level& lv, const QueryAccess& entry, int start, std::vector<Fixup> fixups,
               std::size_t credit, std::size_t spent, std::uint64_t offset, Ctx& ctx) const;

  const Field& f_;
  std::size_t k_;
  std::unique_ptr<Level> root_;
  std::map<std::uint32_t, int> ends_;
};

}  // namespace dictmatch
