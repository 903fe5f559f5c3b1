#include <gtest/gtest.h>

#include "oracle.hpp"
#include "qdesign/error.hpp"
#include "qdesign/field.hpp"

using namespace qdesign;

namespace {

struct Small {
  std::uint32_t p;
  int n;
};

const Small kFields[] = {{2, 1}, {3, 1}, {5, 1}, {2, 2}, {2, 3}, {3, 2}, {2, 4}, {5, 2}, {3, 3}, {7, 2}, {2, 8}};

std::uint64_t order_of(std::uint32_t p, int n) {
  std::uint64_t q = 1;
  for (int i = 0; i < n; ++i) q *= p;
  return q;
}

}  // namespace

TEST(GaloisField, ModulusIsLeastIrreducible) {
  for (const auto& [p, n] : kFields) {
    const GaloisField f(p, n);
    const std::uint64_t q = order_of(p, n);
    oracle::Poly expected;
    for (std::uint64_t low = 0; low < q; ++low) {
      oracle::Poly g = oracle::poly_of(low, p);
      g.resize(n + 1, 0);
      g[n] = 1;
      if (oracle::irreducible(g, p)) {
        expected = g;
        break;
      }
    }
    EXPECT_EQ(f.modulus(), expected) << "GF(" << p << "^" << n << ")";
  }
}

TEST(GaloisField, ProductMatchesPolynomialArithmetic) {
  for (const auto& [p, n] : kFields) {
    const GaloisField f(p, n);
    const std::uint64_t q = f.order();
    const std::uint64_t step = q > 64 ? 7 : 1;
    for (std::uint64_t a = 0; a < q; a += step)
      for (std::uint64_t b = 0; b < q; b += step) {
        const auto prod = oracle::poly_mod(oracle::poly_mul(oracle::poly_of(a, p), oracle::poly_of(b, p), p),
                                           f.modulus(), p);
        ASSERT_EQ(f.mul(static_cast<Elem>(a), static_cast<Elem>(b)), oracle::int_of(prod, p));
        oracle::Poly sum = oracle::poly_of(a, p), pb = oracle::poly_of(b, p);
        sum.resize(std::max(sum.size(), pb.size()), 0);
        for (std::size_t i = 0; i < pb.size(); ++i) sum[i] = (sum[i] + pb[i]) % p;
        oracle::trim(sum);
        ASSERT_EQ(f.add(static_cast<Elem>(a), static_cast<Elem>(b)), oracle::int_of(sum, p));
      }
  }
}

TEST(GaloisField, InversesAndPrimitive) {
  for (const auto& [p, n] : kFields) {
    const GaloisField f(p, n);
    const std::uint64_t q = f.order();
    for (Elem a = 1; a < q; ++a) {
      EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
      EXPECT_EQ(f.add(a, f.neg(a)), 0u);
      EXPECT_EQ(f.sub(f.add(a, 5 % q), 5 % q), a);
    }
    // least element of full multiplicative order
    Elem least = 0;
    for (Elem a = 1; a < q && !least; ++a) {
      std::uint64_t k = 1;
      Elem x = a;
      while (x != 1) {
        x = f.mul(x, a);
        ++k;
      }
      if (k == q - 1) least = a;
    }
    EXPECT_EQ(f.primitive(), least);
    EXPECT_EQ(f.element_order(f.primitive()), q - 1);
    if (f.has_tables())
      for (std::uint64_t i = 0; i < q - 1; ++i) EXPECT_EQ(f.log(f.exp(i)), i);
  }
}

TEST(GaloisField, PrimitiveOrdersOfLargerFields) {
  EXPECT_EQ(GaloisField(3, 4).element_order(GaloisField(3, 4).primitive()), 80u);
  EXPECT_EQ(GaloisField(3, 8).element_order(GaloisField(3, 8).primitive()), 6560u);
  EXPECT_EQ(GaloisField(2, 16).element_order(GaloisField(2, 16).primitive()), 65535u);
}

TEST(GaloisField, RejectsBadParameters) {
  EXPECT_THROW(GaloisField(4, 1), PreconditionError);
  EXPECT_THROW(GaloisField(2, 0), PreconditionError);
}

TEST(ExtensionField, FieldLawsOverTheBase) {
  for (auto [p, e, l] : std::vector<std::tuple<std::uint32_t, int, int>>{{2, 1, 3}, {2, 1, 4}, {3, 1, 2}, {2, 2, 2},
                                                                       {2, 2, 3}, {3, 1, 3}}) {
    const GaloisField base(p, e);
    const ExtensionField f(base, l);
    const std::uint64_t Q = f.order();
    ASSERT_EQ(Q, order_of(p, e * l));
    std::vector<Word> all;
    for (std::uint64_t t = 0; t < Q; ++t) all.push_back(f.word_at(t));
    for (std::size_t i = 1; i < all.size(); ++i) ASSERT_LT(all[i - 1], all[i]);
    for (Word a : all) {
      ASSERT_TRUE(f.valid(a));
      ASSERT_EQ(f.index_of(a), static_cast<std::uint64_t>(std::find(all.begin(), all.end(), a) - all.begin()));
      if (a) ASSERT_EQ(f.mul(a, f.inv(a)), f.one());
      for (Word b : {all[1], all[Q / 2], all[Q - 1]}) {
        ASSERT_EQ(f.mul(a, b), f.mul(b, a));
        ASSERT_EQ(f.sub(f.add(a, b), b), a);
        for (Word c : {all[2 % Q], all[Q - 2]}) ASSERT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
      }
      // scaling by c in GF(q) is multiplication by c*1, coordinatewise
      for (Elem c = 0; c < base.order(); ++c) {
        ASSERT_EQ(f.scale(c, a), f.mul(f.from_base(c), a));
        for (int i = 0; i < l; ++i) ASSERT_EQ(f.coord(f.scale(c, a), i), base.mul(c, f.coord(a, i)));
      }
    }
    // the embedded base field is closed and matches base arithmetic
    for (Elem a = 0; a < base.order(); ++a)
      for (Elem b = 0; b < base.order(); ++b) {
        ASSERT_EQ(f.add(f.from_base(a), f.from_base(b)), f.from_base(base.add(a, b)));
        ASSERT_EQ(f.mul(f.from_base(a), f.from_base(b)), f.from_base(base.mul(a, b)));
      }
    std::uint64_t k = 1;
    for (Word x = f.primitive(); x != f.one(); x = f.mul(x, f.primitive())) ++k;
    EXPECT_EQ(k, Q - 1);
  }
}
