#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>
#include <string_view>

#include "dictmatch/kerrata.hpp"
#include "dictmatch/oracle.hpp"

using namespace dictmatch;

namespace {

Str S(std::string_view s) {
  Str out;
  for (char c : s) out.push_back(static_cast<Char>(static_cast<unsigned char>(c)));
  return out;
}

using Dict = std::vector<std::pair<std::uint32_t, Str>>;
using Row = std::array<std::uint64_t, 3>;  // id, matched, distance

std::vector<Row> rows(const std::vector<LookupHit>& hits) {
  std::vector<Row> out;
  for (const auto& h : hits) out.push_back({h.id, h.matched_length, h.distance});
  return out;
}

std::vector<Row> reference(const Dict& dict, const Str& q, std::size_t k, LookupMode mode) {
  std::vector<Row> out;
  for (const auto& [id, p] : dict) {
    if (p.size() > q.size()) continue;
    if (mode == LookupMode::ExactLength && p.size() != q.size()) continue;
    std::size_t dist = 0;
    for (std::size_t i = 0; i < p.size(); ++i) dist += p[i] != q[i];
    if (dist <= k) out.push_back({id, p.size(), dist});
  }
  std::sort(out.begin(), out.end(),
            [](const Row& a, const Row& b) { return std::tie(a[1], a[0]) < std::tie(b[1], b[0]); });
  return out;
}

std::size_t ceil_log2(std::size_t d) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < d) ++r;
  return r;
}

std::size_t copies_bound(std::size_t d, std::size_t k) {
  std::size_t base = 1 + ceil_log2(d);
  std::size_t out = 4;
  for (std::size_t i = 0; i < k; ++i) out *= base;
  return out;
}

}  // namespace

TEST_CASE("build shape: one substitution on each side") {
  Field f = Field::with_seed(Field::kDefaultPrime, 4242);
  Dict dict = {{0, S("ab")}, {1, S("ac")}};
  ErrataTree tree(f, dict, 1);
  TreeStats st = tree.stats();
  // base trie, one vertical group ("ac" -> "ab"), one horizontal group ("")
  CHECK(st.tries == 3);
  CHECK(st.id_copies_max == 3);
  CHECK(st.id_copies_total == 4);
  CHECK(tree.end_node(0) != -1);
  CHECK(tree.end_node(1) != -1);
  CHECK(tree.end_node(0) != tree.end_node(1));
  CHECK(tree.base_trie().node(tree.end_node(0)).extent == 2);
}

TEST_CASE("build shape: no capacity or no branching means a bare trie") {
  Field f = Field::with_seed(Field::kDefaultPrime, 4243);
  ErrataTree flat(f, {{0, S("ab")}, {1, S("ac")}}, 0);
  CHECK(flat.stats().tries == 1);
  ErrataTree single(f, {{0, S("abc")}}, 2);
  CHECK(single.stats().tries == 1);
  CHECK(single.stats().id_copies_max == 1);
}

TEST_CASE("lookup: one mismatch against two near neighbours") {
  Field f = Field::with_seed(Field::kDefaultPrime, 4244);
  Dict dict = {{0, S("abc")}, {1, S("abd")}, {2, S("xyz")}};
  ErrataTree tree(f, dict, 1);
  StringQuery q(f, S("abe"), 1);
  auto hits = rows(tree.lookup(q, LookupMode::ExactLength));
  CHECK(hits == std::vector<Row>{{0, 3, 1}, {1, 3, 1}});
}

TEST_CASE("lookup: prefix mode reports a shorter pattern inside the query") {
  Field f = Field::with_seed(Field::kDefaultPrime, 4245);
  ErrataTree tree(f, {{0, S("abc")}}, 1);
  StringQuery q(f, S("abcd"), 1);
  CHECK(rows(tree.lookup(q, LookupMode::AnyPrefix)) == std::vector<Row>{{0, 3, 0}});
  CHECK(tree.lookup(q, LookupMode::ExactLength).empty());
}

TEST_CASE("lookup: a pattern reachable only through the heavy subtree") {
  Field f = Field::with_seed(Field::kDefaultPrime, 4246);
  Dict dict = {{0, S("aa")}, {1, S("ab")}, {2, S("b")}};
  ErrataTree tree(f, dict, 1);
  StringQuery q(f, S("bb"), 1);
  // the walk goes into "b"; "ab" sits under the heavy child left behind
  CHECK(rows(tree.lookup(q, LookupMode::ExactLength)) == std::vector<Row>{{1, 2, 1}});
  CHECK(rows(tree.lookup(q, LookupMode::AnyPrefix)) == std::vector<Row>{{2, 1, 0}, {1, 2, 1}});
}

TEST_CASE("lookup: capacity zero is exact search") {
  Field f = Field::with_seed(Field::kDefaultPrime, 4247);
  ErrataTree tree(f, {{0, S("abc")}}, 0);
  StringQuery hit(f, S("abc"), 0);
  CHECK(rows(tree.lookup(hit, LookupMode::ExactLength)) == std::vector<Row>{{0, 3, 0}});
  StringQuery miss(f, S("abd"), 0);
  CHECK(tree.lookup(miss, LookupMode::ExactLength).empty());
}

TEST_CASE("lookup: duplicate strings keep their own ids") {
  Field f = Field::with_seed(Field::kDefaultPrime, 4248);
  ErrataTree tree(f, {{0, S("ab")}, {1, S("ab")}}, 1);
  StringQuery q(f, S("xb"), 1);
  CHECK(rows(tree.lookup(q, LookupMode::ExactLength)) == std::vector<Row>{{0, 2, 1}, {1, 2, 1}});
}

TEST_CASE("lookup: query shorter than every pattern") {
  Field f = Field::with_seed(Field::kDefaultPrime, 4249);
  ErrataTree tree(f, {{0, S("abcdef")}, {1, S("abcdxf")}}, 2);
  StringQuery q(f, S("abc"), 2);
  CHECK(tree.lookup(q, LookupMode::ExactLength).empty());
  CHECK(tree.lookup(q, LookupMode::AnyPrefix).empty());
}

TEST_CASE("random instances match the reference matcher") {
  Field f = Field::with_seed(Field::kDefaultPrime, 9001);
  std::mt19937_64 rng(0xfeedbeefULL);
  std::size_t worst_copies = 0, worst_searches = 0;
  for (int inst = 0; inst < 700; ++inst) {
    std::size_t sigma = (rng() % 2) ? 2 : 4;
    std::size_t d = 1 + rng() % 8;
    std::size_t k = 1 + rng() % 2;
    Dict dict;
    for (std::size_t i = 0; i < d; ++i) {
      std::size_t len = 1 + rng() % 32;
      Str s(len);
      for (auto& c : s) c = static_cast<Char>(1 + rng() % sigma);
      dict.push_back({static_cast<std::uint32_t>(i), std::move(s)});
    }
    ErrataTree tree(f, dict, k);
    std::size_t bound = copies_bound(d, k);
    TreeStats ts = tree.stats();
    CHECK(ts.id_copies_max <= bound);
    worst_copies = std::max(worst_copies, ts.id_copies_max);

    for (int qi = 0; qi < 2; ++qi) {
      Str q;
      if (qi == 0) {
        q.resize(1 + rng() % 40);
        for (auto& c : q) c = static_cast<Char>(1 + rng() % sigma);
      } else {
        q = dict[rng() % d].second;  // a pattern with a few characters flipped
        std::size_t flips = rng() % (k + 2);
        for (std::size_t t = 0; t < flips && !q.empty(); ++t)
          q[rng() % q.size()] = static_cast<Char>(1 + rng() % sigma);
      }
      StringQuery sq(f, q, k);
      for (LookupMode mode : {LookupMode::ExactLength, LookupMode::AnyPrefix}) {
        SearchStats st;
        auto got = rows(tree.lookup(sq, mode, &st));
        CHECK(got == reference(dict, q, k, mode));
        CHECK(st.prefix_searches <= bound);
        worst_searches = std::max(worst_searches, static_cast<std::size_t>(st.prefix_searches));
      }
    }
  }
  MESSAGE("worst id copies ", worst_copies, ", worst searches per lookup ", worst_searches);
}

TEST_CASE("clustered instances match the reference matcher") {
  // long shared prefixes force deep heavy paths and many crossings
  Field f = Field::with_seed(Field::kDefaultPrime, 9002);
  std::mt19937_64 rng(0x5eed5eedULL);
  for (int inst = 0; inst < 300; ++inst) {
    std::size_t sigma = 2 + rng() % 2;
    std::size_t d = 2 + rng() % 7;
    std::size_t k = 1 + rng() % 2;
    std::size_t base_len = 8 + rng() % 24;
    Str base(base_len);
    for (auto& c : base) c = static_cast<Char>(1 + rng() % sigma);
    Dict dict;
    for (std::size_t i = 0; i < d; ++i) {
      Str s = base;
      s.resize(1 + rng() % base_len);
      std::size_t flips = rng() % 3;
      for (std::size_t t = 0; t < flips && !s.empty(); ++t)
        s[rng() % s.size()] = static_cast<Char>(1 + rng() % sigma);
      dict.push_back({static_cast<std::uint32_t>(i), std::move(s)});
    }
    ErrataTree tree(f, dict, k);
    CHECK(tree.stats().id_copies_max <= copies_bound(d, k));

    Str q = base;
    std::size_t flips = rng() % (k + 2);
    for (std::size_t t = 0; t < flips; ++t)
      q[rng() % q.size()] = static_cast<Char>(1 + rng() % sigma);
    q.resize(1 + rng() % base_len);
    StringQuery sq(f, q, k);
    for (LookupMode mode : {LookupMode::ExactLength, LookupMode::AnyPrefix}) {
      SearchStats st;
      auto got = rows(tree.lookup(sq, mode, &st));
      CHECK(got == reference(dict, q, k, mode));
      CHECK(st.prefix_searches <= copies_bound(d, k));
    }
  }
}
