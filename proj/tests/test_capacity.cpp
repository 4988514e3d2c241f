#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "stbc/capacity.hpp"

using namespace stbc;

namespace {

// Real generator matrix whose columns are the stacked weights.
RealMatrix generator_columns(const STBCDesign& d) {
  RealMatrix g(2 * d.n_t * d.T, d.weights.size());
  for (std::size_t i = 0; i < d.weights.size(); ++i) g.set_column(i, tilde_vec(d.weights[i]));
  return g;
}

STBCDesign diagonal_pair_design() {
  STBCDesign d;
  d.n_t = 2;
  d.T = 2;
  d.weights = {ComplexMatrix{{2.0, 0.0}, {0.0, 0.0}}, ComplexMatrix{{0.0, 0.0}, {0.0, 2.0}}};
  d.layout.groups = {{0}, {1}};
  d.groups_per_layer = 2;
  return d;
}

}  // namespace

TEST(Capacity, BorderedAndDirectLogDetAgree) {
  RandomStream rng(1, StreamTag::Test, 0, 0);
  for (int t = 0; t < 20; ++t) {
    RealMatrix a(12, 6);
    for (auto& v : a.entries()) v = rng.normal();
    for (double rho : {0.01, 1.0, 100.0, 1e4}) {
      EXPECT_NEAR(log2det_bordered(a, rho), log2det_direct(a, rho), 1e-9 * (1.0 + log2det_direct(a, rho)));
    }
  }
}

TEST(Capacity, AlamoutiMatchesChannelCapacityForOneReceiver) {
  const auto d = build_design(1, 1);
  for (double snr : {0.0, 10.0, 20.0}) {
    const auto gap = capacity_gap(d, 1, snr, 200, 4);
    EXPECT_NEAR(gap.mean, 0.0, 1e-10);
    EXPECT_NEAR(gap.std_error, 0.0, 1e-10);
  }
  // With two receivers the orthogonal code loses capacity.
  EXPECT_LT(capacity_gap(d, 2, 20.0, 200, 4).mean, -0.5);
}

TEST(Capacity, FullRateDesignHasOrthogonalGeneratorAndNoLoss) {
  for (int a : {1, 2}) {
    const std::size_t layers = std::size_t{1} << a;
    const auto d = normalized(build_design(a, layers));
    const RealMatrix g = generator_columns(d);
    ASSERT_EQ(g.rows(), g.cols());
    const double s = std::sqrt(fro_norm(g) * fro_norm(g) / static_cast<double>(g.cols()));
    RealMatrix u = g;
    for (auto& v : u.entries()) v /= s;
    EXPECT_TRUE(is_orthogonal(u, 1e-10)) << "a=" << a;
    for (std::size_t n_r : {1u, 2u, 3u}) {
      const auto gap = capacity_gap(build_design(a, layers), n_r, 15.0, 100, 9);
      EXPECT_NEAR(gap.mean, 0.0, 1e-9) << "a=" << a << " n_r=" << n_r;
    }
  }
}

TEST(Capacity, CodeNeverExceedsChannel) {
  const auto d = build_design(2, 2);
  for (double snr : {0.0, 20.0}) {
    const auto gap = capacity_gap(d, 2, snr, 200, 2);
    EXPECT_LE(gap.mean, 1e-9);
  }
}

TEST(Capacity, EstimatesUseMatchingDraws) {
  const auto d = build_design(1, 2);
  const auto code = code_capacity(d, 2, 10.0, 300, 5);
  const auto chan = channel_capacity(2, 2, 10.0, 300, 5);
  EXPECT_NEAR(code.mean, chan.mean, 1e-9);
  EXPECT_EQ(code.trials, 300u);
  const auto par = code_capacity(d, 2, 10.0, 300, 5, 0, 3);
  EXPECT_EQ(par.mean, code.mean);
  EXPECT_THROW(code_capacity(d, 2, 10.0, 50, 5), Error);
}

TEST(Capacity, ChannelCapacityMatchesComplexLogDet) {
  for (std::uint32_t t = 0; t < 10; ++t) {
    const auto H = sample_channel(3, 2, 6, 0, t).H;
    const double rho = 10.0 / 3.0;
    ComplexMatrix m = H.adjoint() * H;
    for (auto& v : m.entries()) v *= rho;
    for (std::size_t i = 0; i < 3; ++i) m(i, i) += 1.0;
    const double ref = std::log2(std::abs(det(m)));
    EXPECT_NEAR(channel_capacity_trial(H, 10.0), ref, 1e-10);
  }
}

TEST(Capacity, LowSnrConditionHoldsForCliffordWeights) {
  for (int a : {1, 2}) {
    const auto rep = low_snr_condition(build_design(a, 1), 1, -20.0, 2000, 3);
    EXPECT_TRUE(rep.report.passed()) << rep.report.to_text();
    EXPECT_NEAR(rep.constant, 1.0, 1e-12);
    EXPECT_NEAR(rep.ratio, 1.0, 0.05);
  }
}

TEST(Capacity, LowSnrConditionScalesWithWeights) {
  auto d = build_design(1, 1);
  for (auto& w : d.weights) w = (1.0 / std::sqrt(2.0)) * w;
  const auto rep = low_snr_condition(d, 2, -20.0, 500, 3);
  EXPECT_NEAR(rep.constant, 0.5, 1e-12);
  EXPECT_TRUE(rep.report.passed());
}

TEST(Capacity, LowSnrConditionFailsForUnbalancedWeights) {
  const auto rep = low_snr_condition(diagonal_pair_design(), 1, -20.0, 500, 3);
  EXPECT_FALSE(rep.report.passed());
  EXPECT_EQ(rep.constant, 0.0);
  EXPECT_NE(rep.report.to_text().find("A1"), std::string::npos);
}

TEST(Capacity, HighSnrDecompositionConverges) {
  const auto d = build_design(1, 2);
  const auto lo = high_snr_decomposition(d, 2, 10.0, 200, 7);
  const auto hi = high_snr_decomposition(d, 2, 40.0, 200, 7);
  EXPECT_LT(lo.identity_residual, 1e-10);
  EXPECT_LT(hi.identity_residual, 1e-10);
  EXPECT_GT(lo.difference.mean, 0.0);
  EXPECT_GT(hi.difference.mean, 0.0);
  EXPECT_LT(hi.difference.mean, lo.difference.mean);
  EXPECT_LT(hi.difference.mean, 0.05);
  EXPECT_NEAR(hi.exact.mean - hi.r_form.mean, hi.difference.mean, 1e-9);
}

TEST(Capacity, ColumnSpaceMixingPreservesCapacity) {
  const auto d = build_design(2, 1);
  const auto mixed = column_space_mixing(d, 12);
  const RealMatrix o = haar_orthogonal(d.weights.size(), 12);
  EXPECT_TRUE(is_orthogonal(o, 1e-10));
  const auto a = code_capacity(d, 2, 10.0, 200, 8);
  const auto b = code_capacity(mixed, 2, 10.0, 200, 8);
  EXPECT_NEAR(a.mean, b.mean, 1e-9);
}

TEST(Capacity, RandomBaselineHasRequestedShape) {
  const auto base = random_mixing_baseline(2, 2, 3);
  EXPECT_EQ(base.n_t, 4u);
  EXPECT_EQ(base.weights.size(), 16u);
  const auto ref = normalized(build_design(2, 2));
  double e_base = 0.0, e_ref = 0.0;
  for (const auto& w : base.weights) e_base += fro_norm(w) * fro_norm(w);
  for (const auto& w : build_design(2, 2).weights) e_ref += fro_norm(w) * fro_norm(w);
  EXPECT_NEAR(e_base, e_ref, 1e-9);
  EXPECT_EQ(ref.weights.size(), base.weights.size());
}

TEST(Capacity, SnrRangeAndCsv) {
  EXPECT_EQ(parse_snr_range("0:10:5"), (std::vector<double>{0.0, 5.0, 10.0}));
  EXPECT_EQ(parse_snr_range("3"), (std::vector<double>{3.0}));
  EXPECT_THROW(parse_snr_range("0:10"), Error);
  EXPECT_THROW(parse_snr_range("10:0:5"), Error);
  EXPECT_THROW(parse_snr_range("0:10:0"), Error);
  const auto rows = capacity_sweep(build_design(1, 1), 1, {0.0, 10.0}, 100, 1);
  std::ostringstream os;
  write_capacity_csv(os, rows);
  const std::string csv = os.str();
  EXPECT_EQ(csv.rfind("snr_db,mean_bits,std_err,trials\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_LT(rows[0].mean, rows[1].mean);
}
