#include <gtest/gtest.h>

#include <random>
#include <set>

#include "qdesign/atlas.hpp"
#include "qdesign/error.hpp"
#include "qdesign/linear_group.hpp"

using namespace qdesign;

namespace {

// GF(q^l)-span size of a GF(2)-subspace, by closing its vectors under
// scalar multiplication and addition.
std::size_t middle_span_size(const FieldTower& t, const Subspace& w) {
  const ExtensionField& f = t.middle();
  std::set<Row> span{0};
  for (Row x : w.rows)
    for (std::uint64_t a = 1; a < f.order(); ++a) {
      const Row y = t.scale_middle(f.word_at(a), x);
      std::vector<Row> add;
      for (Row s : span) add.push_back(t.space().add(s, y));
      span.insert(add.begin(), add.end());
    }
  return span.size();
}

}  // namespace

TEST(FieldTower, FlattenRoundTrip) {
  const FieldTower t = FieldTower::build(3, 1, 2, 3);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    std::vector<Word> x;
    for (int j = 0; j < 3; ++j) x.push_back(t.middle().word_at(rng() % t.middle().order()));
    const Row r = t.flatten(x);
    EXPECT_EQ(t.unflatten(r), x);
    for (int j = 0; j < 3; ++j) EXPECT_EQ(t.block(r, j), x[j]);
    const Word a = t.middle().word_at(rng() % t.middle().order());
    std::vector<Word> ax;
    for (Word w : x) ax.push_back(t.middle().mul(a, w));
    EXPECT_EQ(t.scale_middle(a, r), t.flatten(ax));
  }
}

TEST(FieldTower, SpanDimensionOverMiddle) {
  const FieldTower t = FieldTower::build(2, 1, 3, 2);
  std::mt19937_64 rng(2);
  for (int d = 1; d <= 4; ++d)
    Grassmannian(t.space(), d).for_each([&](std::uint64_t i, const Subspace& w) {
      if (i % 13) return;
      const int j = t.span_dim_over_middle(w);
      std::size_t expect = 1;
      for (int x = 0; x < j; ++x) expect *= 8;
      EXPECT_EQ(middle_span_size(t, w), expect);
    });
}

TEST(OrbitAtlas, ClassifiesThreeSubspacesOfGF2to6) {
  const OrbitAtlas atlas(FieldTower::build(2, 1, 3, 2));
  std::map<std::pair<int, int>, std::uint64_t> classes;
  std::map<std::uint64_t, std::uint64_t> labels;
  Grassmannian(atlas.tower().space(), 3).for_each([&](std::uint64_t, const Subspace& s) {
    const OmegaClass c = atlas.classify(s);
    ++classes[{c.i, c.j}];
    ++labels[atlas.orbit_label(s).key()];
  });
  EXPECT_EQ(classes[std::make_pair(3, 1)], 9u);
  EXPECT_EQ(classes[std::make_pair(3, 2)], 1386u);
  EXPECT_EQ(classes[std::make_pair(3, 3)], 0u);
  std::multiset<std::uint64_t> sizes;
  for (const auto& [key, n] : labels) sizes.insert(n);
  EXPECT_EQ(sizes, (std::multiset<std::uint64_t>{9, 504, 882}));
  for (const auto& lab : atlas.column_labels(3)) EXPECT_EQ(atlas.orbit_size(lab), labels[lab.key()]);
}

TEST(OrbitAtlas, StabilizersByExhaustion) {
  const OrbitAtlas atlas(FieldTower::build(2, 1, 3, 2));
  const LinearGroup g(atlas.tower());
  EXPECT_EQ(g.order(), 3528);
  std::uint64_t elements = 0;
  g.for_each_element([&](const GLMatrix&) { ++elements; });
  EXPECT_EQ(elements, 3528u);
  std::map<int, BigInt> by_r;
  for (const auto& lab : atlas.column_labels(3)) {
    const BigInt brute = g.stabilizer_order_brute(atlas.realize(lab));
    EXPECT_EQ(brute, atlas.stabilizer_order(lab)) << atlas.describe(lab);
    if (!lab.spread_class()) by_r[lab.r] = brute;
  }
  EXPECT_EQ(by_r[1], 4);
  EXPECT_EQ(by_r[2], 7);
  for (const auto& lab : atlas.row_labels())
    EXPECT_EQ(g.stabilizer_order_brute(atlas.realize(lab)), atlas.stabilizer_order(lab)) << atlas.describe(lab);
}

// Labels are constant on orbits and distinct labels give distinct orbits.
TEST(OrbitAtlas, LabelsAreExactlyOrbits) {
  for (auto [m, l, k] : std::vector<std::tuple<int, int, int>>{{2, 3, 3}, {2, 3, 2}, {2, 4, 3}, {3, 3, 2}, {3, 3, 3}}) {
    const OrbitAtlas atlas(FieldTower::build(2, 1, l, m));
    const LinearGroup g(atlas.tower());
    const Grassmannian gr(atlas.tower().space(), k);
    const auto labels = k == 2 ? atlas.row_labels() : atlas.column_labels(k);
    std::uint64_t covered = 0;
    for (const auto& lab : labels) {
      const auto orbit = g.orbit_ranks(atlas.realize(lab), gr);
      EXPECT_EQ(BigInt(orbit.size()), atlas.orbit_size(lab)) << atlas.describe(lab);
      covered += orbit.size();
      for (std::size_t i = 0; i < orbit.size(); i += 1 + orbit.size() / 2000)
        EXPECT_EQ(atlas.orbit_label(gr.unrank(orbit[i])), lab);
    }
    std::uint64_t classified = 0;
    gr.for_each([&](std::uint64_t, const Subspace& s) { classified += atlas.try_label(s).has_value(); });
    EXPECT_EQ(covered, classified) << m << " " << l << " " << k;
  }
}

TEST(OrbitAtlas, LabelsSurviveRandomGroupElements) {
  const OrbitAtlas atlas(FieldTower::build(2, 1, 4, 3));
  const LinearGroup g(atlas.tower());
  Rng rng(9);
  for (int k : {2, 3, 4})
    for (const auto& lab : k == 2 ? atlas.row_labels() : atlas.column_labels(k)) {
      const Subspace s = atlas.realize(lab);
      for (int i = 0; i < 5; ++i) EXPECT_EQ(atlas.orbit_label(g.apply(g.random_element(rng), s)), lab);
    }
}

TEST(OrbitAtlas, RepresentativesAreRealized) {
  const OrbitAtlas atlas(FieldTower::build(2, 1, 7, 2));
  const auto reps = atlas.f_k_r_reps(3, 2);
  EXPECT_EQ(reps.size(), 93u);
  for (std::size_t i = 0; i < reps.size(); i += 7) {
    const auto& rep = reps[i];
    EXPECT_EQ(rep.realized.dim(), 3);
    EXPECT_EQ(atlas.classify(rep.realized).j, 2);
    EXPECT_EQ(atlas.orbit_label(rep.realized), atlas.t_label(3, 2, static_cast<std::uint32_t>(i)));
  }
}

TEST(OrbitAtlas, OrbitSizesAddUp) {
  for (auto [m, l] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {3, 4}, {2, 5}, {2, 7}})
    for (int k = 3; k <= std::min(m + 1, l); ++k) {
      const OrbitAtlas atlas(FieldTower::build(2, 1, l, m));
      BigInt sum = 0;
      for (const auto& lab : atlas.column_labels(k)) {
        sum += atlas.orbit_size(lab);
        EXPECT_EQ(atlas.orbit_size(lab) * atlas.stabilizer_order(lab), LinearGroup(atlas.tower()).order());
      }
      // the labelled classes never exceed the Grassmannian
      EXPECT_LE(sum, gaussian_binomial(m * l, k, 2));
      if (k == 3 && m == 2) EXPECT_EQ(sum, gaussian_binomial(m * l, k, 2));
    }
}

TEST(OrbitAtlas, RejectsOutOfRangeParameters) {
  EXPECT_THROW(stabilizer_order_T(4, 2, 1, 2, 3, 2), PreconditionError);
  EXPECT_THROW(stabilizer_order_T(3, 2, 2, 2, 3, 2), PreconditionError);
  const OrbitAtlas atlas(FieldTower::build(2, 1, 4, 3));
  const FieldTower& t = atlas.tower();
  const Word x = t.middle().word_at(2);
  const std::vector<Row> rows{t.place(t.middle().one(), 0), t.place(x, 0), t.place(t.middle().one(), 1),
                              t.place(x, 1)};
  const Subspace s = t.space().canonicalize(rows);
  EXPECT_EQ(atlas.classify(s).i, 4);
  EXPECT_EQ(atlas.classify(s).j, 2);
  EXPECT_FALSE(atlas.try_label(s).has_value());
  EXPECT_THROW(atlas.orbit_label(s), PreconditionError);
}

TEST(ColumnIndependence, AgreesWithRankOverTheMiddleField) {
  const FieldTower t = FieldTower::build(2, 1, 4, 3);
  const ExtensionField& f = t.middle();
  std::mt19937_64 rng(4);
  int checked = 0;
  while (checked < 300) {
    const int r = 1 + static_cast<int>(rng() % 3);
    std::vector<Word> u;
    for (int i = 0; i < r; ++i) u.push_back(f.word_at(rng() % f.order()));
    std::vector<Row> span{f.one()};
    span.insert(span.end(), u.begin(), u.end());
    if (t.line_space().rank(span) != r + 1) continue;
    const int s = 1 + static_cast<int>(rng() % r);
    std::vector<std::vector<Elem>> a(r, std::vector<Elem>(s));
    std::vector<Elem> b(s);
    for (auto& row : a)
      for (auto& x : row) x = rng() % 2;
    for (auto& x : b) x = rng() % 2;
    std::vector<std::vector<Word>> columns;
    for (int j = 0; j < s; ++j) {
      std::vector<Word> col;
      for (int i = 0; i < r; ++i) col.push_back(f.add(f.from_base(a[i][j]), f.scale(b[j], u[i])));
      col.resize(t.m(), 0);
      columns.push_back(col);
    }
    EXPECT_EQ(column_independence_criterion(t, u, a, b), t.rank_over_middle(columns) == s);
    ++checked;
  }
}
