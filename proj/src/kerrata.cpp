#include "dictmatch/kerrata.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace dictmatch {

// A grouping tree over an ordered list of units (vertical: the substitution
// tries along one heavy path; horizontal: the cut tries of one node's
// off-path children). Splits balance string weight, so a unit of weight w
// under total weight W sits below about log(W/w) groups; every group node
// owns a merged structure one capacity lower.
struct ErrataTree::Grouping {
  struct GNode {
    std::size_t lo = 0, hi = 0;  // unit index range [lo, hi)
    int left = -1, right = -1;
    std::unique_ptr<Level> sub;
  };
  std::vector<std::uint64_t> keys;  // unit keys, ascending
  std::vector<GNode> gnodes;
  int root = -1;
};

struct ErrataTree::Level {
  std::size_t depth = 0;
  std::unique_ptr<CompactTrie> trie;
  std::vector<int> path_of;            // node -> heavy path id
  std::vector<std::uint64_t> ord;      // node -> position along its path
  std::vector<Grouping> vertical;      // per path, keyed by ordinal
  std::map<int, Grouping> horizontal;  // per node, keyed by off-path edge character
};

struct ErrataTree::Ctx {
  std::map<std::pair<std::uint64_t, std::uint32_t>, std::size_t> acc;  // (matched, id) -> dist
  TrieStats tst;
};

namespace {

// (id, end node) for every string ending in the subtree of c.
std::vector<std::pair<std::uint32_t, int>> subtree_marks(const CompactTrie& t, int c) {
  std::vector<std::pair<std::uint32_t, int>> out;
  std::vector<int> stk{c};
  while (!stk.empty()) {
    int v = stk.back();
    stk.pop_back();
    for (std::uint32_t id : t.node(v).marks) out.push_back({id, v});
    for (auto it = t.node(v).children.rbegin(); it != t.node(v).children.rend(); ++it)
      stk.push_back(it->second);
  }
  return out;
}

}  // namespace

std::unique_ptr<ErrataTree::Level> ErrataTree::build_level(
    const Field& f, const std::vector<std::pair<std::uint32_t, Str>>& strings,
    std::size_t depth) {
  auto lv = std::make_unique<Level>();
  lv->depth = depth;
  lv->trie = std::make_unique<CompactTrie>(f, strings, depth);
  const CompactTrie& t = *lv->trie;
  int n = static_cast<int>(t.size());

  lv->path_of.assign(n, -1);
  lv->ord.assign(n, 0);
  std::vector<std::vector<int>> path_nodes;
  for (int v = 0; v < n; ++v) {
    const TrieNode& nd = t.node(v);
    if (nd.parent != -1 && t.node(nd.parent).heavy == v) continue;
    std::vector<int> nodes;
    for (int w = v; w != -1; w = t.node(w).heavy) {
      lv->path_of[w] = static_cast<int>(path_nodes.size());
      lv->ord[w] = nodes.size();
      nodes.push_back(w);
    }
    path_nodes.push_back(std::move(nodes));
  }
  lv->vertical.resize(path_nodes.size());
  if (depth == 0) return lv;

  std::unordered_map<std::uint32_t, const Str*> by_id;
  for (const auto& [id, s] : strings) by_id[id] = &s;

  using UnitStrings = std::vector<std::pair<std::uint32_t, Str>>;
  auto build_grouping = [&](std::vector<std::uint64_t> keys, std::vector<UnitStrings> units) {
    Grouping g;
    g.keys = std::move(keys);
    if (units.empty()) return g;
    std::vector<std::size_t> pre(units.size() + 1, 0);  // prefix string counts
    for (std::size_t i = 0; i < units.size(); ++i) pre[i + 1] = pre[i] + units[i].size();
    // recursive weight-balanced split; every group gets a merged sub-level
    auto rec = [&](auto&& self, std::size_t lo, std::size_t hi) -> int {
      int gi = static_cast<int>(g.gnodes.size());
      g.gnodes.push_back({});
      g.gnodes[gi].lo = lo;
      g.gnodes[gi].hi = hi;
      UnitStrings merged;
      merged.reserve(pre[hi] - pre[lo]);
      for (std::size_t i = lo; i < hi; ++i)
        merged.insert(merged.end(), units[i].begin(), units[i].end());
      auto sub = build_level(f, merged, depth - 1);
      if (hi - lo > 1) {
        std::size_t total = pre[hi] - pre[lo];
        std::size_t best = lo + 1;
        std::size_t best_gap = total + 1;
        for (std::size_t c = lo + 1; c < hi; ++c) {
          std::size_t left = pre[c] - pre[lo], right = total - left;
          std::size_t gap = left > right ? left - right : right - left;
          if (gap < best_gap) {
            best_gap = gap;
            best = c;
          }
        }
        int l = self(self, lo, best);
        int r = self(self, best, hi);
        g.gnodes[gi].left = l;
        g.gnodes[gi].right = r;
      }
      g.gnodes[gi].sub = std::move(sub);
      return gi;
    };
    g.root = rec(rec, 0, units.size());
    return g;
  };

  for (std::size_t p = 0; p < path_nodes.size(); ++p) {
    std::vector<std::uint64_t> keys;
    std::vector<UnitStrings> units;
    for (int u : path_nodes[p]) {
      int hc = t.node(u).heavy;
      if (hc == -1) continue;
      Char a = t.label_char(hc, t.node(u).extent + 1);
      UnitStrings us;
      for (const auto& [b, c] : t.node(u).children) {
        if (c == hc) continue;
        for (const auto& [id, w] : subtree_marks(t, c)) {
          Str s = *by_id.at(id);
          s[t.node(u).extent] = a;
          us.push_back({id, std::move(s)});
        }
      }
      if (us.empty()) continue;
      keys.push_back(lv->ord[u]);
      units.push_back(std::move(us));
    }
    if (!units.empty()) lv->vertical[p] = build_grouping(std::move(keys), std::move(units));
  }

  for (int u = 0; u < n; ++u) {
    std::vector<std::uint64_t> keys;
    std::vector<UnitStrings> units;
    std::uint64_t cut = t.node(u).extent + 1;
    for (const auto& [b, c] : t.node(u).children) {
      if (c == t.node(u).heavy) continue;
      UnitStrings us;
      for (const auto& [id, w] : subtree_marks(t, c)) {
        const Str& s = *by_id.at(id);
        us.push_back({id, Str(s.begin() + static_cast<std::ptrdiff_t>(cut), s.end())});
      }
      keys.push_back(b);
      units.push_back(std::move(us));
    }
    if (!units.empty()) lv->horizontal[u] = build_grouping(std::move(keys), std::move(units));
  }
  return lv;
}

ErrataTree::ErrataTree(const Field& f,
                       const std::vector<std::pair<std::uint32_t, Str>>& dictionary,
                       std::size_t k)
    : f_(f), k_(k), root_(build_level(f, dictionary, k)) {
  const CompactTrie& t = *root_->trie;
  for (const auto& [id, s] : dictionary) {
    int v = t.root();
    std::uint64_t pos = 0;
    while (pos < s.size()) {
      auto it = t.node(v).children.find(s[pos]);
      if (it == t.node(v).children.end()) throw std::logic_error("errata: lost an input string");
      v = it->second;
      pos = t.node(v).extent;
    }
    ends_[id] = v;
  }
}

ErrataTree::~ErrataTree() = default;
ErrataTree::ErrataTree(ErrataTree&&) noexcept = default;

int ErrataTree::end_node(std::uint32_t id) const {
  auto it = ends_.find(id);
  return it == ends_.end() ? -1 : it->second;
}

const CompactTrie& ErrataTree::base_trie() const { return *root_->trie; }

void ErrataTree::search_level(const Level& lv, const QueryAccess& view, std::size_t credit,
                              std::size_t spent, std::uint64_t offset, Ctx& ctx) const {
  descend(lv, view, lv.trie->root(), {}, credit, spent, offset, ctx);
}

void ErrataTree::descend(const Level& lv, const QueryAccess& entry, int start,
                         std::vector<Fixup> fixups, std::size_t credit, std::size_t spent,
                         std::uint64_t offset, Ctx& ctx) const {
  std::optional<FixupView> fv;
  const QueryAccess* v = &entry;
  if (!fixups.empty()) {
    fv.emplace(f_, entry, fixups);
    v = &*fv;
  }
  const CompactTrie& t = *lv.trie;
  Locus loc = t.prefix_search_from(start, *v, &ctx.tst);
  int path_end = loc.at_node ? loc.node : t.node(loc.node).parent;

  // strings ending exactly on the walked prefix match at the current spend
  for (int w = t.node(path_end).nma; w != -1;) {
    const TrieNode& wn = t.node(w);
    if (wn.extent < t.node(start).extent) break;
    for (std::uint32_t id : wn.marks) {
      auto key = std::make_pair(offset + wn.extent, id);
      auto it = ctx.acc.find(key);
      if (it == ctx.acc.end())
        ctx.acc.emplace(key, spent);
      else if (it->second > spent)
        it->second = spent;
    }
    w = wn.parent == -1 ? -1 : t.node(wn.parent).nma;
  }
  if (credit == 0) return;

  std::vector<int> chain;  // canonical walk, start..path_end top-down
  for (int w = path_end; w != start; w = t.node(w).parent) chain.push_back(w);
  chain.push_back(start);
  std::reverse(chain.begin(), chain.end());

  std::uint64_t qlen = v->length();

  auto cover = [&](const Grouping& g, std::size_t lo, std::size_t hi, std::vector<int>& out) {
    if (g.root < 0 || lo >= hi) return;
    std::vector<int> stk{g.root};
    while (!stk.empty()) {
      int gi = stk.back();
      stk.pop_back();
      const auto& gn = g.gnodes[gi];
      if (gn.hi <= lo || hi <= gn.lo) continue;
      if (lo <= gn.lo && gn.hi <= hi) {
        out.push_back(gi);
        continue;
      }
      stk.push_back(gn.left);
      stk.push_back(gn.right);
    }
  };

  // one substituted character spends one mismatch; validity was established
  // by the walk (the query really holds the heavy character there)
  auto do_vertical = [&](int u, bool include_u) {
    const Grouping& g = lv.vertical[lv.path_of[u]];
    if (g.root < 0) return;
    std::uint64_t from_ord = lv.ord[chain.front()];
    for (int w : chain)
      if (lv.path_of[w] == lv.path_of[u]) {
        from_ord = lv.ord[w];
        break;
      }
    std::uint64_t to_ord = lv.ord[u] + (include_u ? 1 : 0);
    auto lo = std::lower_bound(g.keys.begin(), g.keys.end(), from_ord) - g.keys.begin();
    auto hi = std::lower_bound(g.keys.begin(), g.keys.end(), to_ord) - g.keys.begin();
    std::vector<int> picked;
    cover(g, static_cast<std::size_t>(lo), static_cast<std::size_t>(hi), picked);
    for (int gi : picked)
      search_level(*g.gnodes[gi].sub, *v, credit - 1, spent + 1, offset, ctx);
  };

  auto do_horizontal = [&](int u, int walked_child) {
    auto git = lv.horizontal.find(u);
    if (git == lv.horizontal.end()) return;
    const Grouping& g = git->second;
    std::uint64_t cut = t.node(u).extent + 1;
    if (cut > qlen) return;
    std::size_t skip = g.keys.size();
    if (walked_child != -1) {
      Char b = t.label_char(walked_child, cut);
      auto it = std::lower_bound(g.keys.begin(), g.keys.end(), static_cast<std::uint64_t>(b));
      if (it != g.keys.end() && *it == b) skip = static_cast<std::size_t>(it - g.keys.begin());
    }
    std::vector<int> picked;
    cover(g, 0, std::min(skip, g.keys.size()), picked);
    if (skip < g.keys.size()) cover(g, skip + 1, g.keys.size(), picked);
    for (int gi : picked) {
      OffsetView ov(f_, *v, cut);
      search_level(*g.gnodes[gi].sub, ov, credit - 1, spent + 1, offset + cut, ctx);
    }
  };

  // resume the walk below `to`, charging the sketch-decoded edge mismatches
  auto do_continue = [&](int to) {
    if (t.node(to).extent > qlen) return;
    auto ff = t.fast_forward(to, *v, credit, &ctx.tst);
    if (!ff || ff->size() > credit) return;
    std::vector<Fixup> nf = fixups;
    for (const Mismatch& mm : *ff) nf.push_back({mm.pos, mm.b, mm.a});
    descend(lv, entry, to, std::move(nf), credit - ff->size(), spent + ff->size(), offset, ctx);
  };

  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    int u = chain[i], next = chain[i + 1];
    if (t.node(u).heavy == next) continue;
    // the walk left u's heavy path here
    do_vertical(u, false);
    do_horizontal(u, next);
    do_continue(t.node(u).heavy);
  }

  int e = path_end;
  if (loc.at_node) {
    do_vertical(e, false);
    if (loc.matched < qlen) {
      do_horizontal(e, -1);
      if (t.node(e).heavy != -1) do_continue(t.node(e).heavy);
    }
  } else {
    int y = loc.node;
    if (t.node(e).heavy == y) {
      do_vertical(e, true);  // the walk entered e's heavy edge
      do_continue(y);
    } else {
      do_vertical(e, false);
      do_horizontal(e, y);
      if (t.node(e).heavy != -1) do_continue(t.node(e).heavy);
      do_continue(y);
    }
  }
}

std::vector<LookupHit> ErrataTree::lookup(const QueryAccess& q, LookupMode mode,
                                          SearchStats* stats) const {
  if (q.sketch_budget() < k_) throw std::invalid_argument("errata: query sketches too small");
  Ctx ctx;
  search_level(*root_, q, k_, 0, 0, ctx);
  if (stats) {
    stats->prefix_searches += ctx.tst.searches;
    stats->probes += ctx.tst.probes;
    stats->fast_forwards += ctx.tst.fast_forwards;
  }
  std::vector<LookupHit> out;
  for (const auto& [key, dist] : ctx.acc) {
    if (mode == LookupMode::ExactLength && key.first != q.length()) continue;
    out.push_back({key.second, key.first, dist});
  }
  return out;
}

TreeStats ErrataTree::stats() const {
  TreeStats out;
  std::unordered_map<std::uint32_t, std::size_t> copies;
  auto walk = [&](auto&& self, const Level& lv) -> void {
    out.tries += 1;
    out.nodes += lv.trie->size();
    out.sketched_nodes += lv.trie->size();
    out.handle_entries += lv.trie->handle_entries();
    for (std::size_t v = 0; v < lv.trie->size(); ++v)
      for (std::uint32_t id : lv.trie->node(static_cast<int>(v)).marks) copies[id]++;
    auto groups = [&](const Grouping& g) {
      for (const auto& gn : g.gnodes)
        if (gn.sub) self(self, *gn.sub);
    };
    for (const auto& g : lv.vertical) groups(g);
    for (const auto& [u, g] : lv.horizontal) groups(g);
  };
  walk(walk, *root_);
  for (const auto& [id, c] : copies) {
    out.id_copies_total += c;
    out.id_copies_max = std::max(out.id_copies_max, c);
  }
  return out;
}

}  // namespace dictmatch
