#include <gtest/gtest.h>

#include <random>

#include "stbc/complex_linalg.hpp"

using namespace stbc;

namespace {

ComplexMatrix random_complex(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix m(r, c);
  for (auto& v : m.entries()) v = {n(rng), n(rng)};
  return m;
}

RealMatrix random_real(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  RealMatrix m(r, c);
  for (auto& v : m.entries()) v = n(rng);
  return m;
}

}  // namespace

TEST(ComplexLinalg, KronMixedProductRule) {
  std::mt19937_64 rng(1);
  auto a = random_complex(2, 3, rng);
  auto b = random_complex(3, 2, rng);
  auto c = random_complex(3, 2, rng);
  auto d = random_complex(2, 3, rng);
  EXPECT_LT(max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)), 1e-12);
}

TEST(ComplexLinalg, KronPowerZeroIsScalarOne) {
  auto p = kron_power(ComplexMatrix::identity(2), 0);
  ASSERT_EQ(p.rows(), 1u);
  EXPECT_EQ(p(0, 0), cplx(1.0));
  EXPECT_EQ(kron_power(ComplexMatrix::identity(2), 3).rows(), 8u);
}

TEST(ComplexLinalg, RealifyIsRingHomomorphism) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    auto a = random_complex(3, 4, rng);
    auto b = random_complex(4, 2, rng);
    EXPECT_LT(max_abs_diff(realify(a * b), realify(a) * realify(b)), 1e-12);
    EXPECT_LT(max_abs_diff(realify(a.adjoint()), realify(a).transpose()), 0.0 + 1e-15);
  }
}

TEST(ComplexLinalg, RealifyActsOnTildeVectors) {
  std::mt19937_64 rng(3);
  auto a = random_complex(3, 3, rng);
  auto x = random_complex(3, 1, rng);
  auto lhs = tilde_vec(a * x);
  auto rhs = realify(a) * tilde_vec(x);
  for (std::size_t i = 0; i < lhs.size(); ++i) EXPECT_NEAR(lhs[i], rhs[i], 1e-12);
}

TEST(ComplexLinalg, TildeRoundTripAndInterleaving) {
  ComplexVector x{{1.0, 2.0}, {-3.0, 0.5}};
  auto t = tilde_vec(x);
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[0], 1.0);
  EXPECT_EQ(t[1], 2.0);
  EXPECT_EQ(t[2], -3.0);
  EXPECT_EQ(t[3], 0.5);
  EXPECT_EQ(untilde(t), x);
  EXPECT_THROW(untilde(std::vector<double>{1.0, 2.0, 3.0}), Error);
}

TEST(ComplexLinalg, VecIsColumnMajor) {
  ComplexMatrix m{{1.0, 2.0}, {3.0, 4.0}};
  auto v = vec(m);
  EXPECT_EQ(v[0], cplx(1.0));
  EXPECT_EQ(v[1], cplx(3.0));
  EXPECT_EQ(v[2], cplx(2.0));
}

TEST(ComplexLinalg, QrReconstructsAndIsOrthonormal) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    auto a = random_real(12, 7, rng);
    auto qr = gram_schmidt_qr(a);
    EXPECT_LT(max_abs_diff(qr.q * qr.r, a), 1e-12);
    EXPECT_LT(max_abs_diff(qr.q.transpose() * qr.q, RealMatrix::identity(7)), 1e-13);
    for (std::size_t i = 0; i < 7; ++i) {
      EXPECT_GT(qr.r(i, i), 0.0);
      for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(qr.r(i, j), 0.0);
    }
  }
}

TEST(ComplexLinalg, QrDetectsDependence) {
  RealMatrix a{{1.0, 2.0}, {2.0, 4.0}, {3.0, 6.0}};
  try {
    gram_schmidt_qr(a);
    FAIL() << "expected RankDeficient";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RankDeficient);
  }
  EXPECT_FALSE(has_full_column_rank(a));
  EXPECT_EQ(column_rank(a), 1u);
  EXPECT_THROW(gram_schmidt_qr(RealMatrix(2, 3, 1.0)), Error);
}

TEST(ComplexLinalg, DeterminantMatchesCofactorExpansion) {
  std::mt19937_64 rng(5);
  auto m = random_complex(3, 3, rng);
  const cplx cof = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                   m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  EXPECT_LT(std::abs(det(m) - cof), 1e-12);
  EXPECT_THROW(det(ComplexMatrix(2, 3)), Error);
  EXPECT_THROW(trace(ComplexMatrix(2, 3)), Error);
}

TEST(ComplexLinalg, LogDetAgreesWithQrDiagonal) {
  std::mt19937_64 rng(6);
  auto a = random_real(6, 6, rng);
  auto qr = gram_schmidt_qr(a);
  double s = 0.0;
  for (std::size_t i = 0; i < 6; ++i) s += std::log(qr.r(i, i));
  EXPECT_NEAR(log_abs_det(a), s, 1e-10);
}

TEST(ComplexLinalg, ComplexIndependence) {
  ComplexVector u{{1.0, 0.0}, {0.0, 0.0}};
  ComplexVector v{{0.0, 1.0}, {0.0, 0.0}};  // j*u
  ComplexVector w{{0.0, 0.0}, {1.0, 0.0}};
  EXPECT_FALSE(independent_over_complex({u, v}));
  EXPECT_TRUE(independent_over_complex({u, w}));
}

TEST(ComplexLinalg, GaussianIntegerExactProduct) {
  ComplexMatrix a{{kJ, 1.0}, {0.0, -kJ}};
  ASSERT_TRUE(is_gaussian_integer(a));
  auto g = to_gaussian(a);
  auto p = exact_product(g, g);
  auto f = a * a;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_EQ(static_cast<double>(p(i, j).re), f(i, j).real());
      EXPECT_EQ(static_cast<double>(p(i, j).im), f(i, j).imag());
    }
  EXPECT_THROW(to_gaussian(ComplexMatrix{{0.5}}), Error);
}

TEST(ComplexLinalg, TextFormatRoundTripsExactly) {
  std::mt19937_64 rng(7);
  auto m = random_complex(3, 4, rng);
  m(0, 0) = {0.0, -1.0};
  m(1, 1) = {-2.5, 0.0};
  m(2, 2) = {1e-300, -3e200};
  auto back = parse_matrix(matrix_to_string(m));
  EXPECT_EQ(back, m);
}

TEST(ComplexLinalg, ParseComplexForms) {
  EXPECT_EQ(parse_complex("3"), cplx(3.0, 0.0));
  EXPECT_EQ(parse_complex("-2i"), cplx(0.0, -2.0));
  EXPECT_EQ(parse_complex("i"), cplx(0.0, 1.0));
  EXPECT_EQ(parse_complex("1-i"), cplx(1.0, -1.0));
  EXPECT_EQ(parse_complex("1e-3+2e+2i"), cplx(1e-3, 2e2));
  EXPECT_THROW(parse_complex("abc"), Error);
  EXPECT_THROW(parse_matrix("1 2\n3\n"), Error);
}

TEST(ComplexLinalg, RejectsNonFiniteEntries) {
  std::vector<cplx> d{{1.0, 0.0}, {std::numeric_limits<double>::quiet_NaN(), 0.0}};
  EXPECT_THROW(ComplexMatrix(1, 2, d), Error);
}

TEST(ComplexLinalg, DimensionMismatchIsReported) {
  try {
    auto x = ComplexMatrix(2, 3) * ComplexMatrix(2, 3);
    (void)x;
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
}
