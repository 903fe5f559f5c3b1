#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "qdesign/error.hpp"
#include "qdesign/field.hpp"
#include "qdesign/singer.hpp"

using namespace qdesign;

namespace {

// Orbits of d-subspaces under multiplication by a primitive element, found by
// cycling each unseen subspace; returns orbit lengths.
std::vector<std::uint64_t> cycle_orbits(std::uint64_t q, int l, int d) {
  const auto pp = *prime_power(q);
  const GaloisField base(pp.first, pp.second);
  const ExtensionField f(base, l);
  const VectorSpace space(q, l);
  std::set<Subspace> seen;
  std::vector<std::uint64_t> lengths;
  Grassmannian(space, d).for_each([&](std::uint64_t, const Subspace& s) {
    if (seen.count(s)) return;
    std::uint64_t len = 0;
    Subspace cur = s;
    do {
      seen.insert(cur);
      ++len;
      std::vector<Row> rows;
      for (Row x : cur.rows) rows.push_back(f.mul(f.primitive(), x));
      cur = space.canonicalize(rows);
    } while (cur != s);
    lengths.push_back(len);
  });
  return lengths;
}

}  // namespace

TEST(SingerCounts, FormulaMatchesCycling) {
  for (auto [q, lmax] : std::vector<std::pair<std::uint64_t, int>>{{2, 6}, {3, 4}, {4, 3}})
    for (int l = 1; l <= lmax; ++l)
      for (int d = 0; d <= l; ++d) {
        const auto lengths = cycle_orbits(q, l, d);
        EXPECT_EQ(n_d_v(d, l, q), lengths.size()) << q << " " << l << " " << d;
        std::uint64_t Q = 1;
        for (int i = 0; i < l; ++i) Q *= q;
        BigInt sum = 0;
        for (int u : divisors(std::gcd(d, l))) {
          std::uint64_t qu = 1;
          for (int i = 0; i < u; ++i) qu *= q;
          const auto with_u = std::count(lengths.begin(), lengths.end(), (Q - 1) / (qu - 1));
          EXPECT_EQ(n_d_u_v(d, u, l, q), with_u) << q << " " << l << " " << d << " u=" << u;
          sum += n_d_u_v(d, u, l, q);
        }
        EXPECT_EQ(sum, n_d_v(d, l, q));
      }
}

TEST(SingerCounts, KnownValues) {
  EXPECT_EQ(n_d_v(3, 7, 2), 93);
  EXPECT_EQ(n_d_u_v(3, 1, 7, 2), 93);
  EXPECT_EQ(n_d_v(2, 4, 2), 3);
  EXPECT_EQ(n_d_v(3, 3, 2), 1);
  EXPECT_EQ(n_d_u_v(2, 2, 4, 2), 1);
}

TEST(SingerOrbitTable, OrbitInvariants) {
  for (auto [q, l, d] : std::vector<std::tuple<std::uint64_t, int, int>>{{2, 6, 3}, {2, 4, 2}, {3, 4, 2}, {2, 7, 3}}) {
    const SingerAction h(q, l);
    const SingerOrbitTable t(h, d);
    BigInt total = 0;
    std::set<Subspace> reps;
    for (std::size_t i = 0; i < t.orbits().size(); ++i) {
      const HOrbit& o = t.orbits()[i];
      std::uint64_t qu = 1;
      for (int j = 0; j < o.u; ++j) qu *= q;
      EXPECT_EQ(o.length * (qu - 1), h.group_order());
      total += o.length;
      EXPECT_TRUE(reps.insert(o.rep).second);
      // the rep is the least member of its orbit
      for (std::uint64_t p = 1; p < o.length; ++p) {
        const Subspace s = h.apply(o.rep, p);
        EXPECT_LT(o.rep, s);
        EXPECT_EQ(t.orbit_index(s), i);
      }
      if (i) EXPECT_LE(std::make_pair(t.orbits()[i - 1].u, t.orbits()[i - 1].rep), std::make_pair(o.u, o.rep));
    }
    EXPECT_EQ(total, gaussian_binomial(l, d, q));
  }
}

TEST(SingerAction, SubfieldHasShortOrbit) {
  // GF(4) inside GF(16): a 2-subspace with stabilizer GF(4)^*
  const SingerAction h(2, 4);
  const auto orbits = h_orbit_reps(4, 2, 2);
  const auto it = std::find_if(orbits.begin(), orbits.end(), [](const HOrbit& o) { return o.u == 2; });
  ASSERT_NE(it, orbits.end());
  EXPECT_EQ(it->length, 5u);
}

TEST(SingerAction, MatrixActsLikeMultiplication) {
  const SingerAction h(3, 3);
  const auto M = h.matrix();
  const VectorSpace& s = h.space();
  const GaloisField& F = h.field().base();
  for (std::uint64_t t = 0; t < h.field().order(); ++t) {
    const Row x = h.field().word_at(t);
    std::vector<Elem> y(3, 0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) y[i] = F.add(y[i], F.mul(M[i][j], s.get(x, j)));
    EXPECT_EQ(s.from_digits(y), h.apply(x));
  }
}

TEST(Moebius, SmallValues) {
  const int expect[] = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0};
  for (int n = 1; n <= 12; ++n) EXPECT_EQ(moebius(n), expect[n - 1]);
}

TEST(HIncidence, RowSums) {
  for (auto [l, k] : std::vector<std::pair<int, int>>{{3, 3}, {4, 3}, {5, 3}, {6, 4}, {7, 3}}) {
    const auto m = h_incidence_matrix(l, 2, k, 2);
    for (const auto& row : m.entries) {
      BigInt s = 0;
      for (const auto& x : row) s += x;
      EXPECT_EQ(s, gaussian_binomial(l - 2, k - 2, 2));
    }
  }
  const auto m = h_incidence_matrix(3, 2, 3, 2);
  ASSERT_EQ(m.rows(), 1u);
  ASSERT_EQ(m.cols(), 1u);
  EXPECT_EQ(m.at(0, 0), 1);
}

TEST(KramerMesner, TrivialSystems) {
  IncidenceBlockMatrix one;
  one.row_names = {"r"};
  one.col_names = {"c"};
  one.row_blocks = {"R"};
  one.col_blocks = {"C"};
  one.entries = {{1}};
  auto res = km_solve_binary(one, 1, {1});
  ASSERT_EQ(res.solutions.size(), 1u);
  EXPECT_EQ(res.solutions[0].columns, std::vector<int>{0});
  EXPECT_EQ(res.status, SearchStatus::exhausted);
  res = km_solve_binary(one, 2, {1});
  EXPECT_TRUE(res.solutions.empty());
  EXPECT_EQ(res.status, SearchStatus::exhausted);

  const auto m = h_incidence_matrix(3, 2, 3, 2);
  res = km_solve_binary(m, 1, {1});
  ASSERT_EQ(res.solutions.size(), 1u);
}

TEST(KramerMesner, SolutionsSatisfyTheSystem) {
  // 2-(6,3,lambda)_2 designs invariant under the Singer cycle
  const auto m = h_incidence_matrix(6, 2, 3, 2);
  const auto orbits = h_orbit_reps(6, 3, 2);
  std::vector<BigInt> w;
  for (const auto& o : orbits) w.push_back(o.length);
  for (int lambda : {3, 6}) {
    const auto res = km_solve_binary(m, lambda, w, 2'000'000, 50);
    for (const auto& s : res.solutions) {
      for (std::size_t i = 0; i < m.rows(); ++i) {
        BigInt row = 0;
        for (int c : s.columns) row += m.at(i, c);
        EXPECT_EQ(row, lambda);
      }
      BigInt blocks = 0;
      for (int c : s.columns) blocks += w[c];
      EXPECT_EQ(blocks, s.blocks);
    }
  }
}

TEST(KramerMesner, BudgetIsReportedSeparately) {
  const auto m = h_incidence_matrix(7, 2, 3, 2);
  std::vector<BigInt> w(m.cols(), 1);
  const auto res = km_solve_binary(m, 7, w, 1000, 10);
  EXPECT_EQ(res.status, SearchStatus::budget_exceeded);
  EXPECT_LE(res.nodes, 1001u);
}
