#include "dictmatch/ztrie.hpp"

#include <algorithm>
#include <stdexcept>

namespace dictmatch {

CompactTrie::CompactTrie(const Field& f,
                         const std::vector<std::pair<std::uint32_t, Str>>& strings,
                         std::size_t sketch_budget)
    : f_(f), budget_(sketch_budget) {
  if (strings.empty()) throw std::invalid_argument("trie: empty string set");
  nodes_.emplace_back();  // root
  strings_.reserve(strings.size());

  for (const auto& [id, s] : strings) {
    int sref = static_cast<int>(strings_.size());
    strings_.push_back(s);
    int u = 0;
    std::uint64_t done = 0;  // characters of s matched so far
    while (done < s.size()) {
      auto it = nodes_[u].children.find(s[done]);
      if (it == nodes_[u].children.end()) {
        int leaf = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        nodes_[leaf].parent = u;
        nodes_[leaf].extent = s.size();
        nodes_[leaf].str_ref = sref;
        nodes_[u].children[s[done]] = leaf;
        u = leaf;
        done = s.size();
        break;
      }
      int w = it->second;
      const Str& ws = strings_[nodes_[w].str_ref];
      std::uint64_t lo = done, hi = nodes_[w].extent;
      while (done < hi && done < s.size() && ws[done] == s[done]) ++done;
      if (done == hi) {  // edge fully matched
        u = w;
        continue;
      }
      // split edge (u, w) at length `done`
      int mid = static_cast<int>(nodes_.size());
      nodes_.emplace_back();
      nodes_[mid].parent = u;
      nodes_[mid].extent = done;
      nodes_[mid].str_ref = nodes_[w].str_ref;
      nodes_[u].children[ws[lo]] = mid;
      nodes_[w].parent = mid;
      nodes_[mid].children[ws[done]] = w;
      if (done < s.size()) {
        int leaf = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        nodes_[leaf].parent = mid;
        nodes_[leaf].extent = s.size();
        nodes_[leaf].str_ref = sref;
        nodes_[mid].children[s[done]] = leaf;
        u = leaf;
        done = s.size();
      } else {
        u = mid;
      }
      break;
    }
    nodes_[u].marks.push_back(id);
  }

  // annotation pass: fingerprints, sketches and the handle index top-down
  {
    struct Item {
      int v;
      Fingerprint fp;
      Sketch sk;
    };
    std::vector<Item> stack;
    stack.push_back({0, fp_empty(f_), sk_empty(f_, budget_)});
    while (!stack.empty()) {
      Item it = std::move(stack.back());
      stack.pop_back();
      TrieNode& n = nodes_[it.v];
      n.fp = it.fp;
      n.sketch = it.sk;
      for (auto& [c, w] : n.children) {
        Fingerprint fp = it.fp;
        Sketch sk = it.sk;
        const Str& ws = strings_[nodes_[w].str_ref];
        for (std::uint64_t pos = n.extent; pos < nodes_[w].extent; ++pos) {
          fp = fp_extend(f_, fp, ws[pos]);
          sk = sk_extend(f_, sk, ws[pos]);
          handle_[{pos + 1, fp.phi.v}] = {w, fp.phi_rev.v};
        }
        stack.push_back({w, fp, sk});
      }
    }
  }

  // bottom-up: leaf counts and weights (iterate children in reverse DFS order
  // via node indices: children always have larger indices than their parent
  // only for leaves created later... not guaranteed after splits, so do an
  // explicit post-order)
  {
    std::vector<int> order;
    order.reserve(nodes_.size());
    std::vector<int> stack{0};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (auto& [c, w] : nodes_[v].children) stack.push_back(w);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      TrieNode& n = nodes_[*it];
      n.weight = n.marks.size();
      n.leaf_count = n.children.empty() ? 1 : 0;
      int heavy = -1;
      std::size_t best = 0;
      for (auto& [c, w] : n.children) {
        n.leaf_count += nodes_[w].leaf_count;
        n.weight += nodes_[w].weight;
        if (nodes_[w].leaf_count > best) {  // ties keep the smaller character
          best = nodes_[w].leaf_count;
          heavy = w;
        }
      }
      n.heavy = heavy;
    }
  }

  // top-down: DFS intervals and nearest marked ancestors
  {
    std::uint64_t clock = 0;
    // (node, child iterator state) via explicit stack
    std::vector<std::pair<int, std::map<Char, int>::const_iterator>> stack;
    nodes_[0].nma = nodes_[0].marks.empty() ? -1 : 0;
    nodes_[0].dfs_in = clock++;
    stack.push_back({0, nodes_[0].children.begin()});
    while (!stack.empty()) {
      auto& [v, it] = stack.back();
      if (it == nodes_[v].children.end()) {
        nodes_[v].dfs_out = clock++;
        stack.pop_back();
        continue;
      }
      int w = it->second;
      ++it;
      nodes_[w].nma = nodes_[w].marks.empty() ? nodes_[v].nma : w;
      nodes_[w].dfs_in = clock++;
      stack.push_back({w, nodes_[w].children.begin()});
    }
  }
}

Char CompactTrie::label_char(int v, std::uint64_t pos) const {
  return strings_[nodes_[v].str_ref][pos - 1];
}

int CompactTrie::probe(std::uint64_t len, const Fingerprint& fp) const {
  auto it = handle_.find({len, fp.phi.v});
  if (it == handle_.end() || it->second.phi_rev != fp.phi_rev.v) return -1;
  return it->second.node;
}

Locus CompactTrie::search_range(int start, const QueryAccess& q, TrieStats* stats) const {
  if (stats) ++stats->searches;
  std::uint64_t lo = nodes_[start].extent, hi = q.length();
  int best = start;
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (stats) ++stats->probes;
    int hit = probe(mid, q.prefix_fingerprint(mid));
    if (hit >= 0) {
      lo = mid;
      best = hit;
    } else {
      hi = mid - 1;
    }
  }
  return {best, lo, nodes_[best].extent == lo};
}

Locus CompactTrie::prefix_search(const QueryAccess& q, TrieStats* stats) const {
  return search_range(0, q, stats);
}

Locus CompactTrie::prefix_search_from(int u, const QueryAccess& q, TrieStats* stats) const {
  return search_range(u, q, stats);
}

Locus CompactTrie::prefix_search_from_node(int u, const QueryAccess& q,
                                           const std::vector<Fixup>& fixups,
                                           TrieStats* stats) const {
  if (fixups.empty()) return search_range(u, q, stats);
  FixupView view(f_, q, fixups);
  return search_range(u, view, stats);
}

std::optional<std::vector<Mismatch>> CompactTrie::fast_forward(int lower, const QueryAccess& q,
                                                               std::size_t credit,
                                                               TrieStats* stats) const {
  if (stats) ++stats->fast_forwards;
  const TrieNode& n = nodes_[lower];
  Sketch qs = q.prefix_sketch(n.extent);
  DistanceVerdict v;
  if (qs.k > budget_) {
    v = sk_distance(f_, n.sketch, sk_truncate(qs, budget_));
  } else if (qs.k < budget_) {
    v = sk_distance(f_, sk_truncate(n.sketch, qs.k), qs);
  } else {
    v = sk_distance(f_, n.sketch, qs);
  }
  if (!v || v->size() > credit) return std::nullopt;
  return v;
}

}  // namespace dictmatch
