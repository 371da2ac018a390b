#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "dictmatch/ztrie.hpp"

using namespace dictmatch;

namespace {

Str S(const char* s) {
  Str out;
  for (; *s; ++s) out.push_back(static_cast<Char>(*s - 'a' + 1));
  return out;
}

Str rand_str(std::mt19937_64& rng, std::size_t n, Char sigma) {
  Str s(n);
  for (auto& c : s) c = static_cast<Char>(rng() % sigma) + 1;
  return s;
}

Locus naive_walk(const CompactTrie& t, const Str& q) {
  int u = 0;
  std::uint64_t matched = 0;
  while (true) {
    const TrieNode& n = t.node(u);
    if (matched == q.size()) return {u, matched, matched == n.extent};
    if (matched == n.extent) {
      auto it = n.children.find(q[matched]);
      if (it == n.children.end()) return {u, matched, true};
      u = it->second;
      continue;
    }
    if (t.label_char(u, matched + 1) == q[matched]) {
      ++matched;
      continue;
    }
    return {u, matched, false};
  }
}

Str label_of(const CompactTrie& t, int v) {
  Str out;
  for (std::uint64_t i = 1; i <= t.node(v).extent; ++i) out.push_back(t.label_char(v, i));
  return out;
}

}  // namespace

TEST_CASE("structure of small tries") {
  Field f = Field::with_seed(Field::kDefaultPrime, 1);

  CompactTrie t(f, {{0, S("abc")}, {1, S("abd")}}, 1);
  CHECK(t.size() == 4);  // root, branch at 2, two leaves
  const TrieNode& root = t.node(0);
  REQUIRE(root.children.size() == 1);
  int branch = root.children.begin()->second;
  CHECK(t.node(branch).extent == 2);
  CHECK(t.node(branch).children.size() == 2);
  CHECK(t.node(branch).marks.empty());
  for (auto& [c, leaf] : t.node(branch).children) {
    CHECK(t.node(leaf).extent == 3);
    CHECK(t.node(leaf).marks.size() == 1);
  }

  CompactTrie single(f, {{0, S("a")}}, 1);
  CHECK(single.size() == 2);
  CHECK(single.node(1).extent == 1);
  CHECK(single.node(1).marks == std::vector<std::uint32_t>{0});

  // a marked internal node on the path of a longer string
  CompactTrie nested(f, {{0, S("ab")}, {1, S("abab")}}, 1);
  CHECK(nested.size() == 3);
  Locus l = nested.prefix_search(StringQuery(f, S("ab"), 1));
  CHECK(l.at_node);
  CHECK(nested.node(l.node).marks == std::vector<std::uint32_t>{0});
  CHECK(nested.node(l.node).children.size() == 1);

  CHECK_THROWS_AS(CompactTrie(f, {}, 1), std::invalid_argument);
}

TEST_CASE("prefix search on known tries") {
  Field f = Field::with_seed(Field::kDefaultPrime, 2);
  CompactTrie t(f, {{0, S("abc")}, {1, S("abd")}}, 1);

  Locus l1 = t.prefix_search(StringQuery(f, S("abz"), 1));
  CHECK(l1.matched == 2);
  CHECK(l1.at_node);
  CHECK(t.node(l1.node).extent == 2);

  CompactTrie t2(f, {{0, S("abc")}}, 1);
  Locus l2 = t2.prefix_search(StringQuery(f, S("abc"), 1));
  CHECK(l2.matched == 3);
  CHECK(l2.at_node);
  CHECK(t2.node(l2.node).marks.size() == 1);

  Locus l3 = t2.prefix_search(StringQuery(f, S("zzz"), 1));
  CHECK(l3.matched == 0);
  CHECK(l3.node == 0);

  // match dying inside an edge identifies the lower end
  CompactTrie t3(f, {{0, S("abcd")}}, 1);
  Locus l4 = t3.prefix_search(StringQuery(f, S("abx"), 1));
  CHECK(l4.matched == 2);
  CHECK_FALSE(l4.at_node);
  CHECK(t3.node(l4.node).extent == 4);
}

TEST_CASE("search equals the naive walk on random instances") {
  Field f = Field::with_seed(Field::kDefaultPrime, 3);
  std::mt19937_64 rng(17);
  int instances = 0;
  while (instances < 10000) {
    Char sigma = 2 + rng() % 3;
    std::size_t cnt = 1 + rng() % 6;
    std::vector<std::pair<std::uint32_t, Str>> strings;
    for (std::size_t i = 0; i < cnt; ++i)
      strings.push_back({static_cast<std::uint32_t>(i), rand_str(rng, 1 + rng() % 16, sigma)});
    CompactTrie t(f, strings, 1);
    for (int q = 0; q < 4; ++q, ++instances) {
      Str query = rand_str(rng, rng() % 20, sigma);
      // half the queries share a long prefix with a stored string
      if (q % 2 == 0 && !strings.empty()) {
        const Str& basis = strings[rng() % strings.size()].second;
        std::size_t take = rng() % (basis.size() + 1);
        if (take <= query.size())
          std::copy(basis.begin(), basis.begin() + take, query.begin());
        else
          query.assign(basis.begin(), basis.begin() + take);
      }
      Locus got = t.prefix_search(StringQuery(f, query, 1));
      Locus want = naive_walk(t, query);
      REQUIRE(got.matched == want.matched);
      REQUIRE(got.node == want.node);
      REQUIRE(got.at_node == want.at_node);
    }
  }
}

TEST_CASE("every stored prefix is reachable") {
  Field f = Field::with_seed(Field::kDefaultPrime, 4);
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    Char sigma = 2 + rng() % 2;
    std::vector<std::pair<std::uint32_t, Str>> strings;
    std::size_t cnt = 1 + rng() % 5;
    for (std::size_t i = 0; i < cnt; ++i)
      strings.push_back({static_cast<std::uint32_t>(i), rand_str(rng, 1 + rng() % 12, sigma)});
    CompactTrie t(f, strings, 1);
    for (auto& [id, s] : strings) {
      for (std::size_t len = 0; len <= s.size(); ++len) {
        Str prefix(s.begin(), s.begin() + len);
        Locus l = t.prefix_search(StringQuery(f, prefix, 1));
        REQUIRE(l.matched == len);
        // perturbing the next character must not extend the match
        Str probe = prefix;
        probe.push_back(sigma + 1);
        Locus lp = t.prefix_search(StringQuery(f, probe, 1));
        REQUIRE(lp.matched == len);
      }
    }
  }
}

TEST_CASE("is_prefix agrees with label comparison") {
  Field f = Field::with_seed(Field::kDefaultPrime, 5);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::pair<std::uint32_t, Str>> strings;
    std::size_t cnt = 1 + rng() % 6;
    for (std::size_t i = 0; i < cnt; ++i)
      strings.push_back({static_cast<std::uint32_t>(i), rand_str(rng, 1 + rng() % 10, 2)});
    CompactTrie t(f, strings, 1);
    REQUIRE(t.size() <= 100);
    for (std::size_t a = 0; a < t.size(); ++a) {
      Str la = label_of(t, static_cast<int>(a));
      for (std::size_t b = 0; b < t.size(); ++b) {
        Str lb = label_of(t, static_cast<int>(b));
        bool direct = la.size() <= lb.size() && std::equal(la.begin(), la.end(), lb.begin());
        CHECK(t.is_prefix(static_cast<int>(a), static_cast<int>(b)) == direct);
      }
    }
  }
}

TEST_CASE("heavy paths intersected by a root-to-leaf path") {
  Field f = Field::with_seed(Field::kDefaultPrime, 6);
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<std::uint32_t, Str>> strings;
    std::size_t cnt = 2 + rng() % 15;
    for (std::size_t i = 0; i < cnt; ++i)
      strings.push_back({static_cast<std::uint32_t>(i), rand_str(rng, 1 + rng() % 14, 2)});
    CompactTrie t(f, strings, 0);
    std::size_t leaves = 0;
    for (std::size_t v = 0; v < t.size(); ++v)
      if (t.node(static_cast<int>(v)).children.empty()) ++leaves;
    std::size_t limit = 1;
    while ((1ull << limit) <= leaves) ++limit;  // floor(log2) + 1
    for (std::size_t v = 0; v < t.size(); ++v) {
      if (!t.node(static_cast<int>(v)).children.empty()) continue;
      std::size_t crossings = 0;
      int u = static_cast<int>(v);
      while (u != -1) {
        int p = t.node(u).parent;
        if (p == -1 || t.node(p).heavy != u) ++crossings;  // u heads its path
        u = p;
      }
      CHECK(crossings <= limit);
    }
  }
}

TEST_CASE("search from a node, with and without fixups") {
  Field f = Field::with_seed(Field::kDefaultPrime, 7);
  CompactTrie t(f, {{0, S("aab")}, {1, S("ax")}}, 1);
  Locus at_a = t.prefix_search(StringQuery(f, S("a"), 1));
  REQUIRE(at_a.at_node);
  REQUIRE(t.node(at_a.node).extent == 1);

  StringQuery full(f, S("aab"), 1);
  Locus l = t.prefix_search_from(at_a.node, full);
  CHECK(l.matched == 3);
  CHECK(l.at_node);

  // query "xab" with the first character fixed to 'a' behaves like "aab"
  StringQuery crooked(f, S("xab"), 1);
  Locus lf = t.prefix_search_from_node(at_a.node, crooked,
                                       {{1, S("x")[0], S("a")[0]}});
  CHECK(lf.matched == 3);
  CHECK(lf.at_node);
  CHECK(lf.node == l.node);

  // no fixups: identical to the plain search
  Locus l0 = t.prefix_search_from_node(0, full, {});
  Locus l1 = t.prefix_search(full);
  CHECK(l0.node == l1.node);
  CHECK(l0.matched == l1.matched);
}

TEST_CASE("fast forward along an edge") {
  Field f = Field::with_seed(Field::kDefaultPrime, 8);
  CompactTrie t(f, {{0, S("ab")}}, 1);
  int leaf = t.node(0).children.begin()->second;

  auto zero = t.fast_forward(leaf, StringQuery(f, S("ab"), 1), 1);
  REQUIRE(zero.has_value());
  CHECK(zero->empty());

  auto one = t.fast_forward(leaf, StringQuery(f, S("ac"), 1), 1);
  REQUIRE(one.has_value());
  REQUIRE(one->size() == 1);
  CHECK((*one)[0].pos == 2);
  CHECK((*one)[0].a == S("b")[0]);  // trie side
  CHECK((*one)[0].b == S("c")[0]);  // query side

  CompactTrie t3(f, {{0, S("abc")}}, 1);
  int leaf3 = t3.node(0).children.begin()->second;
  CHECK_FALSE(t3.fast_forward(leaf3, StringQuery(f, S("xyc"), 1), 1).has_value());

  // distance within the sketch budget but above the credit
  CompactTrie t4(f, {{0, S("abcd")}}, 2);
  int leaf4 = t4.node(0).children.begin()->second;
  CHECK_FALSE(t4.fast_forward(leaf4, StringQuery(f, S("axcy"), 2), 1).has_value());
  CHECK(t4.fast_forward(leaf4, StringQuery(f, S("axcy"), 2), 2).has_value());
}

TEST_CASE("offset and fixup views compose") {
  Field f = Field::with_seed(Field::kDefaultPrime, 9);
  // base query "xabcd"; offset 1 then fixup pos 2 b->z models nested recursion
  StringQuery base(f, S("xabcd"), 2);
  OffsetView suffix(f, base, 1);  // "abcd"
  CHECK(suffix.length() == 4);
  StringQuery direct(f, S("abcd"), 2);
  for (std::uint64_t len = 0; len <= 4; ++len) {
    CHECK(fp_equal(suffix.prefix_fingerprint(len), direct.prefix_fingerprint(len)));
    CHECK(sk_identical(suffix.prefix_sketch(len), direct.prefix_sketch(len)));
  }
  FixupView fixed(f, suffix, {{2, S("b")[0], S("z")[0]}});  // "azcd"
  StringQuery direct2(f, S("azcd"), 2);
  for (std::uint64_t len = 0; len <= 4; ++len) {
    CHECK(fp_equal(fixed.prefix_fingerprint(len), direct2.prefix_fingerprint(len)));
    CHECK(sk_identical(fixed.prefix_sketch(len), direct2.prefix_sketch(len)));
  }
  OffsetView deeper(f, fixed, 2);  // "cd"
  StringQuery direct3(f, S("cd"), 2);
  for (std::uint64_t len = 0; len <= 2; ++len) {
    CHECK(fp_equal(deeper.prefix_fingerprint(len), direct3.prefix_fingerprint(len)));
    CHECK(sk_identical(deeper.prefix_sketch(len), direct3.prefix_sketch(len)));
  }
}

TEST_CASE("empty strings mark the root") {
  Field f = Field::with_seed(Field::kDefaultPrime, 10);
  CompactTrie t(f, {{7, Str{}}, {0, S("b")}}, 1);
  CHECK(t.node(0).marks == std::vector<std::uint32_t>{7});
  CHECK(t.node(0).nma == 0);
}
