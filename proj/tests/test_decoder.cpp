#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "stbc/decoder.hpp"

using namespace stbc;

namespace {

struct Observation {
  ComplexMatrix H;
  ComplexMatrix Y;
  std::vector<std::size_t> sent;
};

Observation observe(const LinkModel& link, std::size_t n_r, std::uint32_t trial, bool noise = true) {
  const auto& d = link.design;
  RandomStream sym(17, StreamTag::Test, 0, trial);
  Observation o;
  o.sent.resize(d.weights.size());
  for (auto& v : o.sent) v = sym.below(link.constellation.pam_size());
  o.H = sample_channel(d.n_t, n_r, 17, 0, trial).H;
  o.Y = std::sqrt(link.snr / static_cast<double>(d.n_t)) * (o.H * transmitted(link, o.sent));
  if (noise) {
    RandomStream nz(17, StreamTag::Noise, 0, trial);
    o.Y += complex_normal_matrix(n_r, d.T, nz);
  }
  return o;
}

// Exhaustive search written directly on complex matrices: for every index
// vector, S = sum_k s_k A_k with s = (W U) z per group.
std::pair<std::vector<std::size_t>, double> complex_domain_ml(const Observation& o,
                                                             const LinkModel& link) {
  const auto& d = link.design;
  const auto& pam = link.constellation.pam();
  const std::size_t n = d.weights.size();
  const double amp = std::sqrt(link.snr / static_cast<double>(d.n_t)) * link.beta;
  std::vector<std::size_t> idx(n, 0);
  std::vector<std::size_t> best_idx;
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    ComplexMatrix S(d.n_t, d.T);
    for (const auto& g : d.layout.groups)
      for (std::size_t r = 0; r < g.size(); ++r) {
        double s = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) s += link.encoder.map(r, k) * pam[idx[g[k]]];
        S += s * d.weights[g[r]];
      }
    const ComplexMatrix E = o.Y - amp * (o.H * S);
    double m = 0.0;
    for (const auto& v : E.entries()) m += std::norm(v);
    if (best_idx.empty() || m < best - 1e-10 * (1.0 + best)) {
      best = m;
      best_idx = idx;
    }
    std::size_t pos = n;
    while (pos > 0 && ++idx[pos - 1] == pam.size()) idx[--pos] = 0;
    if (pos == 0) break;
  }
  return {best_idx, best};
}

void expect_matches_oracle(const LinkModel& link, std::size_t n_r, std::uint32_t trials,
                           const std::function<DecodeResult(const Observation&)>& dec) {
  for (std::uint32_t t = 0; t < trials; ++t) {
    const auto o = observe(link, n_r, t);
    const auto [idx, metric] = complex_domain_ml(o, link);
    const auto r = dec(o);
    EXPECT_EQ(r.pam_indices, idx) << "trial " << t;
    EXPECT_NEAR(r.metric, metric, 1e-9 * (1.0 + metric)) << "trial " << t;
  }
}

}  // namespace

TEST(Constellation, SquareQamHasUnitEnergy) {
  for (std::size_t m : {4u, 16u, 64u}) {
    const auto c = Constellation::qam(m);
    double e = 0.0;
    for (const auto& p : c.points()) e += std::norm(p);
    EXPECT_NEAR(e / static_cast<double>(m), 1.0, 1e-12);
    EXPECT_EQ(c.pam_size() * c.pam_size(), m);
  }
  EXPECT_EQ(Constellation::parse("16-QAM").size(), 16u);
  EXPECT_EQ(Constellation::parse("qpsk").size(), 4u);
  EXPECT_THROW(Constellation::parse("8psk"), Error);
  EXPECT_THROW(Constellation::qam(8), Error);
}

TEST(Constellation, IndexSplitsIntoRealAndImaginaryPam) {
  const auto c = Constellation::qam(16);
  const cplx p = c.point(1 * 4 + 3);
  EXPECT_EQ(p.real(), c.pam()[1]);
  EXPECT_EQ(p.imag(), c.pam()[3]);
}

TEST(Decoder, RealMetricMatchesComplexMetric) {
  const auto d = build_design(2, 1);
  const auto link = make_link(d, Constellation::qam(4), db_to_linear(8.0));
  for (std::uint32_t t = 0; t < 5; ++t) {
    const auto o = observe(link, 1, t);
    const RealMatrix B = effective_matrix(o.H, link);
    const RealVector y = tilde_vec(o.Y);
    const auto z = info_values(link, o.sent);
    RealVector res = y;
    const RealVector bz = B * z;
    for (std::size_t i = 0; i < res.size(); ++i) res[i] -= bz[i];
    EXPECT_NEAR(dot(res, res), metric_of(o.Y, o.H, link, o.sent), 1e-9);
  }
}

TEST(Decoder, OracleMatchesComplexDomainSearch) {
  const auto c4 = Constellation::qam(4);
  for (std::size_t layers : {1u, 2u}) {
    const auto link = make_link(build_design(1, layers), c4, db_to_linear(6.0));
    expect_matches_oracle(link, layers, 30, [&](const Observation& o) { return ml_oracle(o.Y, o.H, link); });
  }
  const auto l16 = make_link(build_design(1, 1), Constellation::qam(16), db_to_linear(12.0));
  expect_matches_oracle(l16, 1, 20, [&](const Observation& o) { return ml_oracle(o.Y, o.H, l16); });
}

TEST(Decoder, GroupDecoderIsMaximumLikelihood) {
  for (int a : {1, 2}) {
    const auto link = make_link(build_design(a, 1), Constellation::qam(4), db_to_linear(4.0));
    expect_matches_oracle(link, 1, 40, [&](const Observation& o) { return group_decode(o.Y, o.H, link); });
  }
  const auto l16 = make_link(build_design(1, 1), Constellation::qam(16), db_to_linear(10.0));
  expect_matches_oracle(l16, 1, 30, [&](const Observation& o) { return group_decode(o.Y, o.H, l16); });
}

TEST(Decoder, ConditionalDecoderIsMaximumLikelihood) {
  const auto link = make_link(build_design(1, 2), Constellation::qam(4), db_to_linear(5.0));
  expect_matches_oracle(link, 2, 60, [&](const Observation& o) { return conditional_decode(o.Y, o.H, link); });
}

TEST(Decoder, PruningAndWorkersLeaveDecisionUnchanged) {
  const auto link = make_link(build_design(2, 2), Constellation::qam(4), db_to_linear(10.0));
  for (std::uint32_t t = 0; t < 3; ++t) {
    const auto o = observe(link, 2, t);
    const auto full = conditional_decode(o.Y, o.H, link, false, 1);
    const auto pruned = conditional_decode(o.Y, o.H, link, true, 1);
    const auto split = conditional_decode(o.Y, o.H, link, false, 3);
    EXPECT_EQ(full.pam_indices, pruned.pam_indices);
    EXPECT_EQ(full.pam_indices, split.pam_indices);
    EXPECT_EQ(full.metric, split.metric);
    EXPECT_LE(pruned.metric_evaluations, full.metric_evaluations);
    EXPECT_EQ(full.metric_evaluations, split.metric_evaluations);
  }
}

TEST(Decoder, NoiselessInputIsRecovered) {
  for (std::size_t layers : {1u, 2u}) {
    const auto link = make_link(build_design(2, layers), Constellation::qam(16), db_to_linear(20.0));
    for (std::uint32_t t = 0; t < 3; ++t) {
      const auto o = observe(link, layers, t, false);
      const auto r = layers == 1 ? group_decode(o.Y, o.H, link) : conditional_decode(o.Y, o.H, link);
      EXPECT_EQ(r.pam_indices, o.sent);
      EXPECT_NEAR(r.metric, 0.0, 1e-12);
      ASSERT_EQ(r.symbols.size(), o.sent.size() / 2);
      for (std::size_t c = 0; c < r.symbols.size(); ++c)
        EXPECT_EQ(r.symbols[c], o.sent[2 * c] * 4 + o.sent[2 * c + 1]);
    }
  }
}

TEST(Decoder, CountersMatchPredictions) {
  const auto c4 = Constellation::qam(4);
  struct Case {
    int a;
    std::size_t layers;
    std::uint64_t expect;
  };
  for (const Case& k : {Case{1, 1, 8}, Case{2, 1, 16}, Case{3, 1, 64}, Case{1, 2, 128}, Case{2, 2, 4096}}) {
    const auto link = make_link(build_design(k.a, k.layers), c4, 10.0);
    EXPECT_EQ(complexity_account(link.design, c4).evaluations, k.expect);
    const auto o = observe(link, k.layers, 0);
    const auto r = k.layers == 1 ? group_decode(o.Y, o.H, link) : conditional_decode(o.Y, o.H, link);
    EXPECT_EQ(r.metric_evaluations, k.expect) << "a=" << k.a << " L=" << k.layers;
  }
  const auto big = complexity_account(build_design(3, 2), c4);
  EXPECT_EQ(big.evaluations, 4'194'304u);
  EXPECT_DOUBLE_EQ(big.order_exponent, 10.0);
  EXPECT_EQ(oracle_evaluations(build_design(1, 2), c4), 256u);
}

TEST(Decoder, RejectsUnsuitableRequests) {
  const auto c4 = Constellation::qam(4);
  const auto layered = make_link(build_design(1, 2), c4, 10.0);
  const auto o = observe(layered, 2, 0);
  try {
    group_decode(o.Y, o.H, layered);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotGroupDecodable);
  }
  const auto siso = make_link(uncoded_siso_design(), c4, 10.0);
  EXPECT_FALSE(siso.group_decodable);
  const auto os = observe(siso, 1, 0);
  EXPECT_THROW(conditional_decode(os.Y, os.H, siso), Error);
  EXPECT_NO_THROW(ml_oracle(os.Y, os.H, siso));
  const auto huge = make_link(build_design(3, 2), c4, 10.0);
  const auto oh = observe(huge, 2, 0);
  try {
    ml_oracle(oh.Y, oh.H, huge);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TooLarge);
  }
  EXPECT_THROW(conditional_decode(oh.Y, oh.H, huge, false, 1, 1000), Error);
  EXPECT_THROW(make_link(build_design(1, 1), c4, -1.0), Error);
}
