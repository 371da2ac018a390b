#include "dictmatch/subpattern.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <stdexcept>

namespace dictmatch {

PrimeScheme gen_primes(std::uint64_t m, std::size_t k) {
  if (m < 4 || k < 1) throw std::invalid_argument("prime scheme: need m >= 4 and k >= 1");
  double lg = std::log2(static_cast<double>(m));
  double lglg = std::max(std::log2(lg), 1e-9);
  auto count = [&](double num) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(num / lglg)));
  };
  PrimeScheme s;
  s.m = m;
  s.k = k;
  std::size_t nq = count(lg), nr = count(static_cast<double>(k) * lg);
  for (std::uint64_t p = 2; s.q_set.size() < nq || s.r_set.size() < nr; ++p) {
    if (static_cast<double>(p) <= lg || !Field::is_prime(p)) continue;
    if (s.q_set.size() < nq) s.q_set.push_back(p);
    if (s.r_set.size() < nr) s.r_set.push_back(p);
  }
  return s;
}

Str extract_subpattern(const Str& p, std::uint64_t q, std::uint64_t r, std::uint64_t ell) {
  if (ell < 1 || ell > q * r) throw std::invalid_argument("subpattern: ell out of range");
  Str out;
  for (std::uint64_t pos = ell; pos <= p.size(); pos += q * r) out.push_back(p[pos - 1]);
  return out;
}

// One (q, r): a failure-link automaton over every subpattern of every
// pattern, a compact trie over their reverses, and per-substream stream
// state. Substreams share the automaton; only the state differs.
struct SubpatternIndex::Pair {
  std::uint64_t q = 0, r = 0;

  struct State {
    std::map<Char, int> next;
    int fail = 0;
    int exit = -1;   // deepest accepting state on the fail chain, self included
    int accept = -1; // unique-string id ending here
  };
  std::vector<State> st;
  std::unique_ptr<CompactTrie> rev_trie;
  std::vector<int> rev_end;                                      // uid -> trie node
  std::map<std::pair<std::uint32_t, std::uint64_t>, int> subs_;  // (id, ell) -> uid

  std::vector<int> cur;  // automaton state per substream
  std::vector<std::deque<std::pair<std::uint64_t, int>>> ring;   // (pos, longest node)
  std::size_t history = 2;

  int step(int s, Char c) const {
    while (true) {
      auto it = st[s].next.find(c);
      if (it != st[s].next.end()) return it->second;
      if (s == 0) return 0;
      s = st[s].fail;
    }
  }
};

void SubpatternIndex::build(const Field& f,
                            const std::vector<std::pair<std::uint32_t, Str>>& patterns,
                            std::size_t history) {
  for (const auto& [id, p] : patterns) pats_[id] = p;
  for (std::uint64_t q : scheme_.q_set) {
    for (std::uint64_t r : scheme_.r_set) {
      Pair pr;
      pr.q = q;
      pr.r = r;
      pr.history = std::max<std::size_t>(1, history);
      std::uint64_t qr = q * r;

      std::map<Str, int> uid_of;
      std::vector<Str> uniq;
      for (const auto& [id, p] : patterns) {
        for (std::uint64_t ell = 1; ell <= std::min<std::uint64_t>(qr, p.size()); ++ell) {
          Str sub = extract_subpattern(p, q, r, ell);
          auto [it, fresh] = uid_of.try_emplace(sub, static_cast<int>(uniq.size()));
          if (fresh) uniq.push_back(std::move(sub));
          pr.subs_[{id, ell}] = it->second;
        }
      }

      pr.st.emplace_back();
      for (std::size_t uid = 0; uid < uniq.size(); ++uid) {
        int s = 0;
        for (Char c : uniq[uid]) {
          auto [it, fresh] = pr.st[s].next.try_emplace(c, static_cast<int>(pr.st.size()));
          if (fresh) pr.st.emplace_back();
          s = it->second;
        }
        pr.st[s].accept = static_cast<int>(uid);
      }
      // breadth-first failure links; exit threads to the longest suffix that
      // is itself a subpattern (self included)
      if (pr.st[0].accept != -1) pr.st[0].exit = 0;
      std::deque<int> bfs;
      for (auto& [c, v] : pr.st[0].next) {
        pr.st[v].fail = 0;
        bfs.push_back(v);
      }
      while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop_front();
        pr.st[u].exit = pr.st[u].accept != -1 ? u : pr.st[pr.st[u].fail].exit;
        for (auto& [c, v] : pr.st[u].next) {
          pr.st[v].fail = pr.step(pr.st[u].fail, c);
          bfs.push_back(v);
        }
      }

      std::vector<std::pair<std::uint32_t, Str>> rev;
      rev.reserve(uniq.size());
      for (std::size_t uid = 0; uid < uniq.size(); ++uid)
        rev.push_back({static_cast<std::uint32_t>(uid), Str(uniq[uid].rbegin(), uniq[uid].rend())});
      pr.rev_trie = std::make_unique<CompactTrie>(f, rev, 0);
      pr.rev_end.assign(uniq.size(), 0);
      for (const auto& [uid, rs] : rev) {
        int v = pr.rev_trie->root();
        std::uint64_t at = 0;
        while (at < rs.size()) {
          v = pr.rev_trie->node(v).children.at(rs[at]);
          at = pr.rev_trie->node(v).extent;
        }
        pr.rev_end[uid] = v;
      }

      pr.cur.assign(qr, 0);
      pr.ring.resize(qr);
      pairs_.push_back(std::move(pr));
    }
  }
}

SubpatternIndex::SubpatternIndex(const Field& f,
                                 const std::vector<std::pair<std::uint32_t, Str>>& patterns,
                                 std::size_t k, std::size_t history)
    : k_(k) {
  std::uint64_t m = 4;
  for (const auto& [id, p] : patterns) m = std::max<std::uint64_t>(m, p.size());
  scheme_ = gen_primes(m, std::max<std::size_t>(1, k));
  build(f, patterns, history);
}

SubpatternIndex::SubpatternIndex(const Field& f,
                                 const std::vector<std::pair<std::uint32_t, Str>>& patterns,
                                 PrimeScheme scheme, std::size_t history)
    : scheme_(std::move(scheme)), k_(scheme_.k) {
  build(f, patterns, history);
}

SubpatternIndex::~SubpatternIndex() = default;
SubpatternIndex::SubpatternIndex(SubpatternIndex&&) noexcept = default;

std::size_t SubpatternIndex::pair_count() const { return pairs_.size(); }

std::pair<std::uint64_t, std::uint64_t> SubpatternIndex::pair(std::size_t idx) const {
  return {pairs_.at(idx).q, pairs_.at(idx).r};
}

std::vector<SubReport> SubpatternIndex::feed(std::uint64_t text_pos, Char c) {
  if (text_pos != pos_ + 1) throw std::invalid_argument("substreams: positions must be 1,2,...");
  pos_ = text_pos;
  std::vector<SubReport> out;
  out.reserve(pairs_.size());
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    Pair& pr = pairs_[i];
    std::uint64_t ell = (text_pos - 1) % (pr.q * pr.r);
    int s = pr.step(pr.cur[ell], c);
    pr.cur[ell] = s;
    int e = pr.st[s].exit;
    int node = e == -1 ? -1 : pr.rev_end[static_cast<std::size_t>(pr.st[e].accept)];
    auto& rg = pr.ring[ell];
    rg.push_back({text_pos, node});
    if (rg.size() > pr.history) rg.pop_front();
    out.push_back({i, ell + 1, node});
  }
  return out;
}

int SubpatternIndex::sub_node(std::size_t pair_idx, std::uint32_t id, std::uint64_t ell) const {
  const Pair& pr = pairs_.at(pair_idx);
  auto it = pr.subs_.find({id, ell});
  return it == pr.subs_.end() ? -1 : pr.rev_end[static_cast<std::size_t>(it->second)];
}

bool SubpatternIndex::sub_matches(std::size_t pair_idx, int sub, int longest) const {
  if (sub < 0 || longest < 0) return false;
  return pairs_.at(pair_idx).rev_trie->is_prefix(sub, longest);
}

AlignmentEvidence SubpatternIndex::evidence_for(std::uint32_t id, std::uint64_t text_end) const {
  auto pit = pats_.find(id);
  if (pit == pats_.end()) throw std::invalid_argument("substreams: unknown pattern id");
  const Str& p = pit->second;
  if (p.empty() || text_end < p.size() || text_end > pos_)
    throw std::invalid_argument("substreams: alignment not inside the consumed text");
  AlignmentEvidence ev;
  ev.matched.resize(pairs_.size());
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const Pair& pr = pairs_[i];
    std::uint64_t qr = pr.q * pr.r;
    for (std::uint64_t ell = 1; ell <= std::min<std::uint64_t>(qr, p.size()); ++ell) {
      std::uint64_t p_last = ell + qr * ((p.size() - ell) / qr);
      std::uint64_t t_last = text_end - p.size() + p_last;
      const auto& rg = pr.ring[(t_last - 1) % qr];
      int node = -2;
      for (const auto& [pos, nd] : rg)
        if (pos == t_last) node = nd;
      if (node == -2) throw std::out_of_range("substreams: report history too short");
      if (node != -1 && sub_matches(i, sub_node(i, id, ell), node)) ev.matched[i].insert(ell);
    }
  }
  return ev;
}

std::optional<std::size_t> SubpatternIndex::verify_alignment(std::uint32_t id,
                                                             const AlignmentEvidence& ev) const {
  auto pit = pats_.find(id);
  if (pit == pats_.end()) throw std::invalid_argument("substreams: unknown pattern id");
  const Str& p = pit->second;
  if (ev.matched.size() != pairs_.size())
    throw std::invalid_argument("substreams: evidence must cover every pair");

  // candidate mismatch = position whose covering subpattern failed under
  // every pair; true mismatches always qualify, and the prime counts ensure
  // nothing else does when the distance is within budget
  std::vector<char> cand(p.size() + 1, 1);
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    std::uint64_t qr = pairs_[i].q * pairs_[i].r;
    for (std::uint64_t pos = 1; pos <= p.size(); ++pos)
      if (ev.matched[i].count((pos - 1) % qr + 1)) cand[pos] = 0;
  }
  std::vector<std::uint64_t> picked;
  for (std::uint64_t pos = 1; pos <= p.size(); ++pos)
    if (cand[pos]) picked.push_back(pos);
  if (picked.size() > k_) return std::nullopt;

  // every failed subpattern must own at least one candidate
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    std::uint64_t qr = pairs_[i].q * pairs_[i].r;
    for (std::uint64_t ell = 1; ell <= std::min<std::uint64_t>(qr, p.size()); ++ell) {
      if (ev.matched[i].count(ell)) continue;
      bool owns = false;
      for (std::uint64_t pos = ell; pos <= p.size() && !owns; pos += qr) owns = cand[pos];
      if (!owns) return std::nullopt;
    }
  }
  return picked.size();
}

std::optional<std::size_t> SubpatternIndex::check_occurrence(std::uint32_t id,
                                                             std::uint64_t text_end) const {
  return verify_alignment(id, evidence_for(id, text_end));
}

std::size_t SubpatternIndex::automaton_states() const {
  std::size_t n = 0;
  for (const auto& pr : pairs_) n += pr.st.size();
  return n;
}

}  // namespace dictmatch
