#include <gtest/gtest.h>

#include "stbc/clifford.hpp"

using namespace stbc;

TEST(Clifford, GeneratorAxiomsForAllOrders) {
  for (int a = 1; a <= kMaxCliffordOrder; ++a) {
    for (int sign : {1, -1}) {
      auto set = build_generators(a, sign);
      EXPECT_EQ(set.n, std::size_t{1} << a);
      EXPECT_EQ(set.generators.size(), a == 1 ? 3u : static_cast<std::size_t>(2 * a));
      auto rep = verify_generators(set);
      EXPECT_TRUE(rep.passed()) << "a=" << a << "\n" << rep.to_text();
      EXPECT_LT(max_generator_residual(set), 1e-14);
    }
  }
}

TEST(Clifford, ExplicitTwoByTwoGenerators) {
  auto set = build_generators(1);
  EXPECT_EQ(set.generators[0], (ComplexMatrix{{kJ, 0.0}, {0.0, -kJ}}));
  EXPECT_EQ(set.generators[1], pauli_p1());
  EXPECT_EQ(set.generators[2], pauli_p2());
  auto neg = build_generators(1, -1);
  EXPECT_EQ(neg.generators[0], -set.generators[0]);
}

TEST(Clifford, KroneckerLayoutAtOrderThree) {
  auto set = build_generators(3);
  const auto i2 = ComplexMatrix::identity(2);
  const auto p1 = pauli_p1();
  const auto p2 = pauli_p2();
  const auto p3 = pauli_p3();
  EXPECT_EQ(set.generators[1], kron(kron(i2, i2), p1));
  EXPECT_EQ(set.generators[2], kron(kron(i2, i2), p2));
  EXPECT_EQ(set.generators[3], kron(kron(i2, p1), p3));
  EXPECT_EQ(set.generators[4], kron(kron(i2, p2), p3));
  EXPECT_EQ(set.generators[5], kron(kron(p1, p3), p3));
}

TEST(Clifford, UnsupportedOrders) {
  for (int a : {0, 6, -1}) {
    try {
      build_generators(a);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::UnsupportedSize);
    }
  }
}

TEST(Clifford, SubsetSquareSignMatchesMatrices) {
  for (int a = 1; a <= 4; ++a) {
    auto set = build_generators(a);
    const auto id = ComplexMatrix::identity(set.n);
    for (const auto& p : all_generator_products(set)) {
      const auto sq = p.matrix * p.matrix;
      const double s = subset_square_sign(p.indices.size());
      EXPECT_LT(max_abs_diff(sq, cplx(s) * id), 1e-12) << p.label();
    }
  }
}

TEST(Clifford, CommutationRuleMatchesMatricesExhaustively) {
  for (int a = 1; a <= 3; ++a) {
    auto set = build_generators(a);
    auto all = all_generator_products(set);
    for (const auto& x : all)
      for (const auto& y : all) {
        std::size_t shared = 0;
        for (int i : x.indices)
          for (int k : y.indices) shared += (i == k);
        const bool commute = products_commute(x.indices.size(), y.indices.size(), shared);
        const auto xy = x.matrix * y.matrix;
        const auto yx = y.matrix * x.matrix;
        if (commute) {
          EXPECT_LT(max_abs_diff(xy, yx), 1e-12) << x.label() << " " << y.label();
        } else {
          EXPECT_LT(max_abs(xy + yx), 1e-12) << x.label() << " " << y.label();
        }
      }
  }
  EXPECT_THROW(products_commute(2, 3, 3), Error);
}

TEST(Clifford, NonIdentityProductsAreTraceless) {
  for (int a = 1; a <= kMaxCliffordOrder; ++a) {
    auto set = build_generators(a);
    auto rep = verify_traceless(set);
    EXPECT_TRUE(rep.ok()) << "a=" << a;
    EXPECT_EQ(rep.checked, (std::size_t{1} << (2 * a)) - 1);
    EXPECT_EQ(rep.identity_trace, cplx(static_cast<double>(set.n)));
  }
}

TEST(Clifford, SymbolicProductAgreesWithMatrixProduct) {
  auto set = build_generators(3);
  auto all = all_generator_products(set);
  for (std::size_t u = 0; u < all.size(); u += 3)
    for (std::size_t v = 0; v < all.size(); v += 5) {
      SignedProduct x = all[u];
      x.j_power = static_cast<int>(u % 4);
      x.matrix *= x.scalar();
      auto p = multiply(x, all[v]);
      auto literal = product_of(set, p.indices, p.j_power);
      EXPECT_LT(max_abs_diff(p.matrix, literal.matrix), 1e-12) << p.label();
    }
}

TEST(Clifford, ProductOrderingAndLabels) {
  auto set = build_generators(2);
  auto all = all_generator_products(set);
  ASSERT_EQ(all.size(), 16u);
  EXPECT_EQ(all[0].label(), "I");
  EXPECT_EQ(all[1].label(), "F1");
  EXPECT_EQ(all[4].label(), "F4");
  EXPECT_EQ(all[5].label(), "F1F2");
  EXPECT_EQ(all[15].label(), "F1F2F3F4");
  EXPECT_EQ(product_of(set, {1, 2}, 3).label(), "-jF1F2");
  EXPECT_THROW(product_of(set, {2, 1}), Error);
  EXPECT_THROW(product_of(set, {1, 5}), Error);
}

TEST(Clifford, PowerSetUsesLeastSignificantFirst) {
  auto set = build_generators(3);
  std::vector<SignedProduct> s{product_of(set, {4, 5}, 1), product_of(set, {1, 2, 3})};
  auto g = power_set_products(set, s);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g[0].label(), "I");
  EXPECT_EQ(g[1].label(), "jF4F5");
  EXPECT_EQ(g[2].label(), "F1F2F3");
  EXPECT_EQ(g[3].label(), "jF1F2F3F4F5");
}

TEST(Clifford, UnitMultiple) {
  auto set = build_generators(2);
  auto f = set.generators[0];
  EXPECT_EQ(unit_multiple(f, f), 0);
  EXPECT_EQ(unit_multiple(kJ * f, f), 1);
  EXPECT_EQ(unit_multiple(-f, f), 2);
  EXPECT_EQ(unit_multiple(set.generators[1], f), -1);
}
