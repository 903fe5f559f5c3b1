#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracle.hpp"
#include "qdesign/bigint.hpp"
#include "qdesign/error.hpp"
#include "qdesign/subspace.hpp"

using namespace qdesign;

namespace {

// [v k]_q as a product of integers.
std::uint64_t gbinom_product(int v, int k, std::uint64_t q) {
  if (k < 0 || k > v) return 0;
  unsigned __int128 num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    unsigned __int128 a = 1, b = 1;
    for (int j = 0; j < v - i; ++j) a *= q;
    for (int j = 0; j < i + 1; ++j) b *= q;
    num *= a - 1;
    den *= b - 1;
  }
  return static_cast<std::uint64_t>(num / den);
}

// Distinct spans of all k-tuples of vectors of GF(2)^v.
std::set<std::vector<oracle::Vec>> spans_of_dim(int v, int k) {
  std::set<std::vector<oracle::Vec>> out;
  const oracle::Vec n = oracle::Vec{1} << v;
  std::vector<oracle::Vec> pick;
  std::function<void(oracle::Vec)> rec = [&](oracle::Vec from) {
    if (static_cast<int>(pick.size()) == k) {
      const auto s = oracle::span2(pick);
      if (s.size() + 1 == (std::size_t{1} << k)) out.insert(s);
      return;
    }
    for (oracle::Vec x = from; x < n; ++x) {
      pick.push_back(x);
      rec(x + 1);
      pick.pop_back();
    }
  };
  rec(1);
  return out;
}

Subspace random_subspace(const VectorSpace& s, int gens, std::mt19937_64& rng) {
  std::vector<Row> rows;
  for (int i = 0; i < gens; ++i) {
    std::vector<Elem> d(s.dim());
    for (auto& x : d) x = static_cast<Elem>(rng() % s.q());
    rows.push_back(s.from_digits(d));
  }
  return s.canonicalize(rows);
}

}  // namespace

TEST(GaussianBinomial, MatchesProductFormula) {
  for (std::uint64_t q : {2, 3, 4, 5})
    for (int v = 0; v <= 9; ++v)
      for (int k = 0; k <= v + 1; ++k) EXPECT_EQ(gaussian_binomial(v, k, q), gbinom_product(v, k, q));
  EXPECT_THROW(gaussian_binomial(3, -1, 2), PreconditionError);
  EXPECT_EQ(gaussian_binomial(6, 3, 2), 1395);
  EXPECT_EQ(gaussian_binomial(9, 2, 2), 43435);
}

TEST(Grassmannian, EnumeratesEverySpanOnce) {
  for (int v = 1; v <= 5; ++v)
    for (int k = 0; k <= v; ++k) {
      const VectorSpace space(2, v);
      const Grassmannian g(space, k);
      const auto expected = spans_of_dim(v, k);
      std::set<std::vector<oracle::Vec>> seen;
      g.for_each([&](std::uint64_t, const Subspace& s) {
        EXPECT_TRUE(space.is_canonical(s));
        EXPECT_TRUE(seen.insert(oracle::span2(s.rows)).second);
      });
      EXPECT_EQ(seen, k == 0 ? std::set<std::vector<oracle::Vec>>{{}} : expected) << v << " " << k;
    }
}

TEST(Grassmannian, RankUnrankAndOrder) {
  for (auto [q, v, k] : std::vector<std::tuple<std::uint64_t, int, int>>{{2, 6, 3}, {3, 4, 2}, {4, 3, 2}, {5, 3, 1}}) {
    const VectorSpace space(q, v);
    const Grassmannian g(space, k);
    EXPECT_EQ(g.size(), gbinom_product(v, k, q));
    std::uint64_t expect = 0;
    Subspace prev;
    g.for_each([&](std::uint64_t i, const Subspace& s) {
      EXPECT_EQ(i, expect++);
      EXPECT_EQ(g.rank(s), i);
      EXPECT_EQ(g.unrank(i), s);
      if (i) EXPECT_NE(prev, s);
      prev = s;
    });
    EXPECT_EQ(expect, g.size());
    // for_range over a middle slice agrees with unrank
    g.for_range(g.size() / 3, g.size() / 2, [&](std::uint64_t i, const Subspace& s) { EXPECT_EQ(g.unrank(i), s); });
  }
}

TEST(SuperspaceRange, IsTheFilteredGrassmannian) {
  std::mt19937_64 rng(7);
  for (auto [q, v, d, k] : std::vector<std::tuple<std::uint64_t, int, int, int>>{
           {2, 6, 2, 3}, {2, 6, 2, 4}, {3, 4, 1, 3}, {2, 5, 0, 2}, {4, 3, 1, 2}}) {
    const VectorSpace space(q, v);
    const Subspace u = random_subspace(space, d, rng);
    const SuperspaceRange range(space, u, k);
    std::set<Subspace> got, want;
    range.for_each([&](std::uint64_t i, const Subspace& s) {
      got.insert(s);
      EXPECT_EQ(range.at(i), s);
    });
    Grassmannian(space, k).for_each([&](std::uint64_t, const Subspace& s) {
      if (space.is_subspace_of(u, s)) want.insert(s);
    });
    EXPECT_EQ(got, want);
    EXPECT_EQ(range.size(), gbinom_product(v - u.dim(), k - u.dim(), q));
  }
}

TEST(VectorSpace, DimensionFormulaHolds) {
  std::mt19937_64 rng(11);
  for (std::uint64_t q : {2, 3, 4, 7}) {
    const VectorSpace space(q, 6);
    for (int trial = 0; trial < 200; ++trial) {
      const Subspace a = random_subspace(space, 1 + static_cast<int>(rng() % 5), rng);
      const Subspace b = random_subspace(space, 1 + static_cast<int>(rng() % 5), rng);
      const Subspace s = space.sum(a, b);
      EXPECT_EQ(s.dim() + space.intersection_dim(a, b), a.dim() + b.dim());
      EXPECT_TRUE(space.is_subspace_of(a, s));
      for (Row x : b.rows) EXPECT_TRUE(space.contains(s, x));
      EXPECT_EQ(space.canonicalize(s.rows), s);
    }
  }
}

TEST(VectorSpace, IntersectionAgainstPointSets) {
  std::mt19937_64 rng(3);
  const VectorSpace space(2, 7);
  for (int trial = 0; trial < 300; ++trial) {
    const Subspace a = random_subspace(space, 4, rng), b = random_subspace(space, 4, rng);
    const std::size_t common = oracle::common_points(a.rows, b.rows);
    EXPECT_EQ((std::size_t{1} << space.intersection_dim(a, b)) - 1, common);
  }
}

TEST(SubspacesOf, CountsAndContainment) {
  const VectorSpace space(3, 5);
  std::mt19937_64 rng(5);
  const Subspace w = random_subspace(space, 3, rng);
  for (int d = 0; d <= w.dim(); ++d) {
    const auto subs = subspaces_of(space, w, d);
    EXPECT_EQ(subs.size(), gbinom_product(w.dim(), d, 3));
    for (const auto& s : subs) EXPECT_TRUE(space.is_subspace_of(s, w));
  }
}

TEST(VectorSpace, Formatting) {
  const VectorSpace space(2, 3);
  EXPECT_EQ(format_subspace(space, space.whole()), "<100,010,001>");
}
