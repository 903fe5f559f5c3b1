#include <gtest/gtest.h>

#include "qdesign/incidence.hpp"
#include "qdesign/linear_group.hpp"

using namespace qdesign;

namespace {

std::size_t column_of(const AtlasMatrix& a, int r, int u, const OrbitAtlas& atlas) {
  for (std::size_t j = 0; j < a.col_labels.size(); ++j) {
    const auto& c = a.col_labels[j];
    if (!c.spread_class() && !c.full_class() && c.r == r && atlas.label_u(c) == u) return j;
  }
  return static_cast<std::size_t>(-1);
}

}  // namespace

TEST(ClosedForm, MatchesBruteForce) {
  for (auto [m, l, k] : std::vector<std::tuple<int, int, int>>{{2, 3, 3}, {3, 3, 3}, {2, 4, 3}, {3, 4, 4}}) {
    const OrbitAtlas atlas(FieldTower::build(2, 1, l, m));
    const ClosedFormReport rep = verify_closed_form(atlas, k);
    EXPECT_TRUE(rep.complete);
    EXPECT_TRUE(rep.match()) << m << " " << l << " " << k;
  }
}

TEST(ClosedForm, SmallestCaseEntries) {
  const OrbitAtlas atlas(FieldTower::build(2, 1, 3, 2));
  const AtlasMatrix a = closed_form_A_k(atlas, 3);
  ASSERT_EQ(a.row_labels.size(), 2u);
  ASSERT_EQ(a.col_labels.size(), 3u);
  // E, P and Q_2, and no (k,k) column since k = m + 1
  EXPECT_EQ(a.matrix.at(0, 1), 14);
  EXPECT_EQ(a.matrix.at(1, 1), 9);
  EXPECT_EQ(a.matrix.at(1, 2), 6);
  EXPECT_EQ(a.matrix.at(0, 2), 0);
  EXPECT_EQ(a.matrix.at(1, 0), 0);
  EXPECT_EQ(a.matrix.at(0, 0), 1);
}

TEST(ClosedForm, RowPWithTheEvenDegreeEntry) {
  const OrbitAtlas atlas(FieldTower::build(2, 1, 4, 2));
  const AtlasMatrix a = closed_form_A_k(atlas, 3);
  const std::size_t last = a.row_labels.size() - 1;
  std::vector<BigInt> p;
  for (std::size_t j = 0; j < a.col_labels.size(); ++j)
    if (!a.col_labels[j].spread_class() && a.col_labels[j].r == 1) p.push_back(a.matrix.at(last, j));
  EXPECT_EQ(p, (std::vector<BigInt>{9, 9, 3}));
  EXPECT_EQ(a.matrix.at(last, column_of(a, 2, 1, atlas)), 42);
}

TEST(ClosedForm, FullClassEntry) {
  const OrbitAtlas atlas(FieldTower::build(2, 1, 3, 3));
  const AtlasMatrix a = closed_form_A_k(atlas, 3);
  ASSERT_TRUE(a.col_labels.back().full_class());
  EXPECT_EQ(a.matrix.at(a.row_labels.size() - 1, a.col_labels.size() - 1), 112);
  EXPECT_EQ(incidence_entry(atlas, a.row_labels.back(), a.col_labels.back()), 112);
  for (std::size_t i = 0; i + 1 < a.row_labels.size(); ++i) EXPECT_EQ(a.matrix.at(i, a.col_labels.size() - 1), 0);
}

TEST(Incidence, IndependentOfTheRealization) {
  const OrbitAtlas atlas(FieldTower::build(2, 1, 4, 2));
  const LinearGroup g(atlas.tower());
  Rng rng(12);
  const auto cols = atlas.column_labels(3);
  for (const auto& row : atlas.row_labels()) {
    const Subspace t = atlas.realize(row);
    for (int trial = 0; trial < 3; ++trial) {
      const Subspace t2 = g.apply(g.random_element(rng), t);
      for (const auto& col : cols) EXPECT_EQ(incidence_entry_at(atlas, t2, col), incidence_entry_at(atlas, t, col));
    }
  }
}

// (orbit size of K) * (row-class 2-subspaces inside one K) = (size of row class) * entry
TEST(Incidence, DoubleCounting) {
  const OrbitAtlas atlas(FieldTower::build(2, 1, 4, 2));
  const AtlasMatrix a = closed_form_A_k(atlas, 3);
  const VectorSpace& V = atlas.tower().space();
  for (std::size_t j = 0; j < a.col_labels.size(); ++j) {
    const Subspace K = atlas.realize(a.col_labels[j]);
    std::map<OrbitLabel, std::uint64_t> inside;
    for (const auto& s : subspaces_of(V, K, 2)) ++inside[atlas.orbit_label(s)];
    for (std::size_t i = 0; i < a.row_labels.size(); ++i)
      EXPECT_EQ(atlas.orbit_size(a.col_labels[j]) * inside[a.row_labels[i]],
                atlas.orbit_size(a.row_labels[i]) * a.matrix.at(i, j));
  }
}

TEST(Incidence, ZeroBlocksHoldExhaustively) {
  for (auto [m, l] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}}) {
    const OrbitAtlas atlas(FieldTower::build(2, 1, l, m));
    for (const auto& row : atlas.row_labels()) {
      const auto tally = superspace_label_counts(atlas, atlas.realize(row), 3);
      for (const auto& [key, n] : tally) {
        const int i = static_cast<int>(key >> 56), j = static_cast<int>((key >> 48) & 0xff),
                  r = static_cast<int>((key >> 40) & 0xff);
        const auto orbit = static_cast<std::uint32_t>(key & 0xffffffffu);
        EXPECT_EQ(i, 3);
        if (row.spread_class()) {
          EXPECT_NE(j, 3);
          if (j == 2) {
            EXPECT_EQ(r, 1);
            EXPECT_EQ(orbit, row.orbit);
          }
        } else {
          EXPECT_NE(j, 1);
        }
      }
    }
  }
}

TEST(Incidence, MatrixExport) {
  const OrbitAtlas atlas(FieldTower::build(2, 1, 3, 2));
  const AtlasMatrix a = closed_form_A_k(atlas, 3);
  const std::string csv = to_csv(a.matrix);
  EXPECT_NE(csv.find("14"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(block_name(a.col_labels[2]), "F3,2^2");
  EXPECT_EQ(block_name(a.row_labels[0]), "F2^1");
}
