#include <gtest/gtest.h>

#include <sstream>

#include "stbc/simulation.hpp"

using namespace stbc;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.a = 1;
  cfg.layers = 2;
  cfg.n_r = 2;
  cfg.snr_db = {0.0, 10.0};
  cfg.trials = 300;
  cfg.seed = 21;
  return cfg;
}

}  // namespace

TEST(Simulation, ConfigFileParsing) {
  std::istringstream in(
      "# sweep\n"
      "a = 2\n"
      "layers=1\n"
      "snr_db = 0:20:10   # three points\n"
      "constellation = 16qam\n"
      "decoder = group\n"
      "layer_scalar = pi/4\n"
      "noiseless = yes\n");
  SimConfig cfg;
  for (const auto& [k, v] : read_config_pairs(in)) apply_setting(cfg, k, v);
  EXPECT_EQ(cfg.a, 2);
  EXPECT_EQ(cfg.layers, 1u);
  EXPECT_EQ(cfg.snr_db, (std::vector<double>{0.0, 10.0, 20.0}));
  EXPECT_EQ(cfg.constellation, "16qam");
  EXPECT_EQ(cfg.decoder, DecoderKind::Group);
  EXPECT_NEAR(std::arg(cfg.layer_scalar), std::numbers::pi / 4, 1e-15);
  EXPECT_TRUE(cfg.noiseless);
  EXPECT_EQ(parse_snr_list("1,2.5,4"), (std::vector<double>{1.0, 2.5, 4.0}));
}

TEST(Simulation, ConfigErrors) {
  SimConfig cfg;
  EXPECT_THROW(apply_setting(cfg, "colour", "red"), Error);
  EXPECT_THROW(apply_setting(cfg, "trials", "12x"), Error);
  EXPECT_THROW(apply_setting(cfg, "timing", "maybe"), Error);
  EXPECT_THROW(apply_setting(cfg, "decoder", "sphere"), Error);
  std::istringstream bad("trials 100\n");
  EXPECT_THROW(read_config_pairs(bad), Error);
  EXPECT_THROW(load_config("/nonexistent/sim.cfg"), Error);
  cfg.trials = 0;
  EXPECT_THROW(check_config(cfg), Error);
  EXPECT_THROW(parse_layer_scalar("pi/0"), Error);
}

TEST(Simulation, SweepIsDeterministicAcrossRunsAndWorkers) {
  SimConfig cfg = small_config();
  std::ostringstream a, b, c;
  write_sim_csv(a, run_error_sweep(cfg));
  write_sim_csv(b, run_error_sweep(cfg));
  cfg.workers = 3;
  write_sim_csv(c, run_error_sweep(cfg));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), c.str());
  cfg.seed = 22;
  std::ostringstream d;
  write_sim_csv(d, run_error_sweep(cfg));
  EXPECT_NE(a.str(), d.str());
}

TEST(Simulation, NoiselessRunsAreErrorFree) {
  for (std::size_t layers : {1u, 2u}) {
    SimConfig cfg = small_config();
    cfg.layers = layers;
    cfg.noiseless = true;
    cfg.trials = 100;
    cfg.constellation = "16qam";
    for (const auto& r : run_error_sweep(cfg)) {
      EXPECT_EQ(r.codeword_errors, 0u);
      EXPECT_EQ(r.ser, 0.0);
    }
  }
}

TEST(Simulation, ErrorRateFallsWithSnr) {
  SimConfig cfg = small_config();
  cfg.snr_db = {0.0, 10.0, 20.0};
  cfg.trials = 1000;
  const auto rows = run_error_sweep(cfg);
  EXPECT_GT(rows[0].ser, rows[1].ser);
  EXPECT_GT(rows[1].ser, rows[2].ser);
  EXPECT_DOUBLE_EQ(rows[0].mean_evals, 128.0);
}

TEST(Simulation, TransmittedEnergyIsNormalized) {
  for (std::size_t layers : {1u, 2u}) {
    const auto d = build_design(1, layers);
    const auto link = make_link(d, Constellation::qam(4), 1.0);
    const std::size_t n = d.weights.size();
    std::vector<std::size_t> idx(n, 0);
    double total = 0.0;
    std::size_t count = 0;
    do {
      const double f = fro_norm(transmitted(link, idx));
      total += f * f;
      ++count;
    } while (detail::next_index(idx, 2));
    EXPECT_NEAR(total / static_cast<double>(count), static_cast<double>(d.n_t * d.T), 1e-9);
  }
}

TEST(Simulation, CsvRoundTrip) {
  SimConfig cfg = small_config();
  const auto rows = run_error_sweep(cfg);
  std::ostringstream os;
  write_sim_csv(os, rows);
  std::istringstream is(os.str());
  const auto back = parse_sim_csv(is);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].snr_db, rows[i].snr_db);
    EXPECT_EQ(back[i].trials, rows[i].trials);
    EXPECT_EQ(back[i].cer, rows[i].cer);
    EXPECT_EQ(back[i].ser, rows[i].ser);
    EXPECT_EQ(back[i].mean_evals, rows[i].mean_evals);
    EXPECT_EQ(back[i].codeword_errors, rows[i].codeword_errors);
  }
  std::istringstream bad("snr,trials\n");
  EXPECT_THROW(parse_sim_csv(bad), Error);
}

TEST(Simulation, DecoderResolution) {
  const auto c = Constellation::qam(4);
  EXPECT_EQ(resolve_decoder(DecoderKind::Auto, make_link(build_design(2, 1), c, 1.0)), DecoderKind::Group);
  EXPECT_EQ(resolve_decoder(DecoderKind::Auto, make_link(build_design(2, 2), c, 1.0)),
            DecoderKind::Conditional);
  EXPECT_EQ(resolve_decoder(DecoderKind::Auto, make_link(uncoded_siso_design(), c, 1.0)),
            DecoderKind::Oracle);
  SimConfig cfg = small_config();
  cfg.design = "siso";
  cfg.n_r = 1;
  EXPECT_EQ(run_error_sweep(cfg).size(), 2u);
}

TEST(Simulation, IntractableOracleIsRefused) {
  SimConfig cfg = small_config();
  cfg.a = 3;
  cfg.layers = 2;
  cfg.decoder = DecoderKind::Oracle;
  cfg.trials = 1;
  try {
    run_error_sweep(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Intractable);
  }
}

TEST(Simulation, VerifyAllPassesForSmallOrders) {
  for (int a : {1, 2})
    for (std::size_t layers : {1u, 2u}) {
      const Report rep = verify_all(a, layers);
      EXPECT_TRUE(rep.passed()) << rep.to_text();
    }
}

TEST(Simulation, VerifyDesignFlagsCorruption) {
  auto d = build_design(2, 1);
  EXPECT_TRUE(verify_design(d).passed());
  d.weights[5] = d.weights[5] + 0.5 * d.weights[0];
  const Report rep = verify_design(d);
  EXPECT_FALSE(rep.passed());
  EXPECT_NE(rep.to_text().find("A6"), std::string::npos) << rep.to_text();
}
