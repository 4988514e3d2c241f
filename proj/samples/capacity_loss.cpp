// Ergodic capacity of 8-antenna codes with two receive antennas, against the
// channel itself and a structureless baseline with the same rate.

#include <cstdio>

#include "stbc/stbc.hpp"

int main() {
  using namespace stbc;
  const std::size_t n_r = 2;
  const std::size_t trials = 500;
  const STBCDesign rate1 = build_design(3, 1);
  const STBCDesign rate2 = build_design(3, 2);
  const STBCDesign baseline = random_mixing_baseline(3, 2, 4242);

  std::printf("%6s %9s %9s %9s %9s\n", "snr_db", "channel", "rate-2", "baseline", "rate-1");
  for (double snr : {0.0, 10.0, 20.0, 30.0}) {
    const auto ch = channel_capacity(8, n_r, snr, trials, 1);
    const auto c2 = code_capacity(rate2, n_r, snr, trials, 1);
    const auto cb = code_capacity(baseline, n_r, snr, trials, 1);
    const auto c1 = code_capacity(rate1, n_r, snr, trials, 1);
    std::printf("%6.1f %9.3f %9.3f %9.3f %9.3f\n", snr, ch.mean, c2.mean, cb.mean, c1.mean);
  }

  const auto hs = high_snr_decomposition(rate2, n_r, 30.0, trials, 1);
  std::printf("30 dB: log-det %.3f, R-diagonal form %.3f bits\n", hs.exact.mean, hs.r_form.mean);
}
