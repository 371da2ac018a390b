#pragma once
// Compact trie with fingerprint-guided prefix search: the longest present
// prefix of a query is found by binary search over prefix lengths, each probe
// one handle-index lookup. Nodes carry fingerprints, sketches, marks,
// nearest-marked-ancestor links, heavy children and DFS intervals.

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dictmatch/query.hpp"

namespace dictmatch {

struct TrieNode {
  int parent = -1;
  std::uint64_t extent = 0;           // label length of the root-to-node path
  int str_ref = -1;                   // an input string this node's label prefixes
  std::map<Char, int> children;       // first edge character -> node
  int heavy = -1;                     // child with the most subtree leaves
  int nma = -1;                       // nearest marked self-or-ancestor
  std::vector<std::uint32_t> marks;   // ids of strings ending exactly here
  std::size_t leaf_count = 0;
  std::size_t weight = 0;             // strings (mark entries) in the subtree
  Fingerprint fp;
  Sketch sketch;
  std::uint64_t dfs_in = 0;
  std::uint64_t dfs_out = 0;
};

// Result of a prefix search. `node` is the deepest node whose label extends
// the longest present prefix of the query: the exact node when the match ends
// on one (at_node), otherwise the lower end of the edge the match dies inside.
struct Locus {
  int node = 0;
  std::uint64_t matched = 0;
  bool at_node = true;
};

struct TrieStats {
  std::uint64_t searches = 0;
  std::uint64_t probes = 0;
  std::uint64_t fast_forwards = 0;
};

class CompactTrie {
 public:
  // Builds from (id, string) pairs; ids may repeat across strings. An empty
  // string marks the root. Sketches are stored per node at `sketch_budget`.
  CompactTrie(const Field& f, const std::vector<std::pair<std::uint32_t, Str>>& strings,
              std::size_t sketch_budget);

  const Field& field() const { return f_; }
  int root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  const TrieNode& node(int v) const { return nodes_[v]; }
  std::size_t sketch_budget() const { return budget_; }
  std::size_t handle_entries() const { return handle_.size(); }

  // 1-based position within the node's label.
  Char label_char(int v, std::uint64_t pos) const;

  bool is_ancestor(int a, int b) const {
    return nodes_[a].dfs_in <= nodes_[b].dfs_in && nodes_[b].dfs_out <= nodes_[a].dfs_out;
  }
  // label(a) is a prefix of label(b)
  bool is_prefix(int a, int b) const { return is_ancestor(a, b); }

  Locus prefix_search(const QueryAccess& q, TrieStats* stats = nullptr) const;
  // Requires q[1..extent(u)] = label(u); searches only below u.
  Locus prefix_search_from(int u, const QueryAccess& q, TrieStats* stats = nullptr) const;
  // Convenience: applies the fixups to q first (q then matches label(u)
  // exactly on the prefix), then searches below u.
  Locus prefix_search_from_node(int u, const QueryAccess& q, const std::vector<Fixup>& fixups,
                                TrieStats* stats = nullptr) const;

  // Compares label(lower) with q[1..extent(lower)] by sketch distance.
  // Requires the prefix above lower's edge to match exactly; the result is
  // then the list of mismatches on the edge (trie character in .a, query
  // character in .b), or nullopt when there are more than `credit`.
  std::optional<std::vector<Mismatch>> fast_forward(int lower, const QueryAccess& q,
                                                    std::size_t credit,
                                                    TrieStats* stats = nullptr) const;

 private:
  struct HandleKey {
    std::uint64_t len;
    u64 phi;
    bool operator==(const HandleKey& o) const { return len == o.len && phi == o.phi; }
  };
  struct HandleKeyHash {
    std::size_t operator()(const HandleKey& k) const {
      u64 h = k.len * 0x9e3779b97f4a7c15ull ^ k.phi;
      h ^= h >> 30;
      h *= 0xbf58476d1ce4e5b9ull;
      h ^= h >> 27;
      return static_cast<std::size_t>(h);
    }
  };
  struct HandleEntry {
    int node;
    u64 phi_rev;  // second check against probe fingerprints
  };

  int probe(std::uint64_t len, const Fingerprint& fp) const;
  Locus search_range(int start, const QueryAccess& q, TrieStats* stats) const;

  const Field& f_;
  std::size_t budget_;
  std::vector<TrieNode> nodes_;
  std::vector<Str> strings_;
  std::unordered_map<HandleKey, HandleEntry, HandleKeyHash> handle_;
};

}  // namespace dictmatch
