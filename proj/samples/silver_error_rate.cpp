// Symbol error rate of the two-antenna, two-layer code against uncoded
// transmission, both with 4-QAM.

#include <iostream>

#include "stbc/stbc.hpp"

int main() {
  stbc::SimConfig cfg;
  cfg.a = 1;
  cfg.layers = 2;
  cfg.n_r = 2;
  cfg.snr_db = {0, 5, 10, 15, 20};
  cfg.trials = 5000;
  cfg.seed = 7;
  cfg.workers = stbc::default_workers();

  const auto coded = stbc::run_error_sweep(cfg);

  stbc::SimConfig siso = cfg;
  siso.design = "siso";
  siso.n_r = 1;
  const auto plain = stbc::run_error_sweep(siso);

  std::cout << "snr_db  coded_ser  coded_evals  siso_ser\n";
  for (std::size_t i = 0; i < coded.size(); ++i) {
    std::cout << coded[i].snr_db << "\t" << coded[i].ser << "\t" << coded[i].mean_evals << "\t"
              << plain[i].ser << '\n';
  }
}
