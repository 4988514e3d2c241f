#pragma once

// Monte-Carlo ergodic capacity, in bits per channel use.
//   code:    (1/2T) E log2 det(I + (SNR/n_t) H_eq H_eq^T), H_eq of the design scaled to E||S||^2 = n_t T
//   channel: E log2 det(I + (SNR/n_t) H H^H)
// Log-determinants go through the QR factor of the bordered matrix
// [sqrt(rho) A; I], whose R satisfies R^T R = I + rho A^T A.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "stbc/channel.hpp"
#include "stbc/complex_linalg.hpp"
#include "stbc/designs.hpp"
#include "stbc/parallel.hpp"
#include "stbc/random.hpp"
#include "stbc/report.hpp"

namespace stbc {

inline constexpr std::size_t kMinCapacityTrials = 100;

struct CapacityEstimate {
  double snr_db = 0.0;
  double mean = 0.0;       // bits per channel use
  double std_error = 0.0;  // sample std / sqrt(trials)
  std::size_t trials = 0;
  std::size_t resampled = 0;
};

inline CapacityEstimate summarize(double snr_db, const std::vector<double>& v,
                                  std::size_t resampled = 0) {
  CapacityEstimate e;
  e.snr_db = snr_db;
  e.trials = v.size();
  e.resampled = resampled;
  if (v.empty()) return e;
  const double n = static_cast<double>(v.size());
  e.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - e.mean) * (x - e.mean);
  e.std_error = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  return e;
}

// log2 det(I + rho A^T A).
inline double log2det_bordered(const RealMatrix& a, double rho) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  RealMatrix b(m + n, n);
  const double s = std::sqrt(rho);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = s * a(i, j);
  for (std::size_t j = 0; j < n; ++j) b(m + j, j) = 1.0;
  const auto qr = gram_schmidt_qr(b, 1e-14);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::log2(qr.r(i, i));
  return 2.0 * acc;
}

// Same quantity through LU of the explicit Gram matrix; independent check.
inline double log2det_direct(const RealMatrix& a, double rho) {
  RealMatrix g = a.transpose() * a;
  for (auto& v : g.entries()) v *= rho;
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) += 1.0;
  return log_abs_det(g) / std::log(2.0);
}

inline void require_trials(std::size_t trials) {
  if (trials < kMinCapacityTrials) {
    throw Error(Errc::InvalidArgument, "capacity estimates need at least " +
                                           std::to_string(kMinCapacityTrials) + " trials");
  }
}

inline double code_capacity_trial(const STBCDesign& scaled, const ComplexMatrix& H, double snr) {
  const RealMatrix heq = equivalent_channel(H, scaled);
  return log2det_bordered(heq, snr / static_cast<double>(scaled.n_t)) /
         (2.0 * static_cast<double>(scaled.T));
}

inline double channel_capacity_trial(const ComplexMatrix& H, double snr) {
  return 0.5 * log2det_bordered(realify(H), snr / static_cast<double>(H.cols()));
}

inline CapacityEstimate code_capacity(const STBCDesign& d, std::size_t n_r, double snr_db,
                                      std::size_t trials, std::uint64_t seed,
                                      std::uint32_t snr_index = 0, std::size_t workers = 1) {
  require_trials(trials);
  validate(d);
  const STBCDesign scaled = normalized(d);
  const double snr = std::pow(10.0, snr_db / 10.0);
  std::vector<double> v(trials);
  parallel_chunks(trials, workers, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t t = b; t < e; ++t) {
      const auto ch = sample_channel(d.n_t, n_r, seed, snr_index, static_cast<std::uint32_t>(t));
      v[t] = code_capacity_trial(scaled, ch.H, snr);
    }
  });
  return summarize(snr_db, v);
}

inline CapacityEstimate channel_capacity(std::size_t n_t, std::size_t n_r, double snr_db,
                                         std::size_t trials, std::uint64_t seed,
                                         std::uint32_t snr_index = 0, std::size_t workers = 1) {
  require_trials(trials);
  const double snr = std::pow(10.0, snr_db / 10.0);
  std::vector<double> v(trials);
  parallel_chunks(trials, workers, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t t = b; t < e; ++t) {
      const auto ch = sample_channel(n_t, n_r, seed, snr_index, static_cast<std::uint32_t>(t));
      v[t] = channel_capacity_trial(ch.H, snr);
    }
  });
  return summarize(snr_db, v);
}

// Paired per-trial difference code - channel on the same channel draws.
inline CapacityEstimate capacity_gap(const STBCDesign& d, std::size_t n_r, double snr_db,
                                     std::size_t trials, std::uint64_t seed,
                                     std::uint32_t snr_index = 0) {
  require_trials(trials);
  const STBCDesign scaled = normalized(d);
  const double snr = std::pow(10.0, snr_db / 10.0);
  std::vector<double> v(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto ch = sample_channel(d.n_t, n_r, seed, snr_index, static_cast<std::uint32_t>(t));
    v[t] = code_capacity_trial(scaled, ch.H, snr) - channel_capacity_trial(ch.H, snr);
  }
  return summarize(snr_db, v);
}

struct LowSnrReport {
  Report report;
  double constant = 0.0;  // c with A_i A_i^H = c I for every weight (when it holds)
  double ratio = 0.0;     // code / channel capacity at the probe SNR
};

// A_i A_i^H proportional to I for all weights, plus the empirical ratio of
// code to channel capacity at `probe_db`.
inline LowSnrReport low_snr_condition(const STBCDesign& d, std::size_t n_r, double probe_db = -20.0,
                                      std::size_t trials = 2000, std::uint64_t seed = 1) {
  LowSnrReport out;
  const auto id = ComplexMatrix::identity(d.n_t);
  double c = 0.0;
  std::string wit;
  for (std::size_t i = 0; i < d.weights.size(); ++i) {
    const ComplexMatrix g = d.weights[i] * d.weights[i].adjoint();
    const double ci = g(0, 0).real();
    if (i == 0) c = ci;
    if (wit.empty() && (max_abs_diff(g, cplx(ci) * id) > 1e-10 || std::abs(ci - c) > 1e-10)) {
      wit = "A" + std::to_string(i + 1) + " A^H is not " + detail::format_real(c) + " I";
    }
  }
  out.constant = wit.empty() ? c : 0.0;
  out.report.add("weights satisfy A A^H = c I", wit.empty(),
                 wit.empty() ? "c = " + detail::format_real(c) : wit);
  const auto code = code_capacity(d, n_r, probe_db, trials, seed);
  const auto chan = channel_capacity(d.n_t, n_r, probe_db, trials, seed);
  out.ratio = code.mean / chan.mean;
  const bool close = std::abs(out.ratio - 1.0) <= 0.05;
  out.report.add("low-SNR capacity ratio within 5%", close,
                 "ratio " + detail::format_real(out.ratio));
  return out;
}

struct HighSnrResult {
  CapacityEstimate exact;    // log-det form
  CapacityEstimate r_form;   // (k/T) log2 rho + (1/2T) sum log2 R_ii^2
  CapacityEstimate difference;  // exact - r_form, paired per trial
  double identity_residual = 0.0;  // max |R_ii^2 - (||h_i||^2 - sum_{j<i} <q_j,h_i>^2)|
  std::size_t resampled = 0;
};

inline HighSnrResult high_snr_decomposition(const STBCDesign& d, std::size_t n_r, double snr_db,
                                            std::size_t trials, std::uint64_t seed,
                                            std::uint32_t snr_index = 0) {
  require_trials(trials);
  const STBCDesign scaled = normalized(d);
  const double rho = std::pow(10.0, snr_db / 10.0) / static_cast<double>(d.n_t);
  const double two_t = 2.0 * static_cast<double>(d.T);
  const double k = static_cast<double>(d.weights.size()) / 2.0;
  std::vector<double> ex;
  std::vector<double> rf;
  std::vector<double> diff;
  HighSnrResult out;
  std::uint32_t draw = 0;
  while (ex.size() < trials) {
    const auto ch = sample_channel(d.n_t, n_r, seed, snr_index, draw++);
    const RealMatrix heq = equivalent_channel(ch.H, scaled);
    QRResult qr;
    try {
      qr = gram_schmidt_qr(heq);
    } catch (const Error& e) {
      if (e.code() != Errc::RankDeficient) throw;
      ++out.resampled;
      continue;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < heq.cols(); ++i) {
      const double rii2 = qr.r(i, i) * qr.r(i, i);
      const auto h = heq.column(i);
      double rhs = dot(h, h);
      for (std::size_t j = 0; j < i; ++j) {
        const auto qj = qr.q.column(j);
        const double p = dot(qj, h);
        rhs -= p * p;
      }
      out.identity_residual = std::max(out.identity_residual, std::abs(rii2 - rhs));
      sum += std::log2(rii2);
    }
    const double r_form = (k / static_cast<double>(d.T)) * std::log2(rho) + sum / two_t;
    const double exact = log2det_bordered(heq, rho) / two_t;
    ex.push_back(exact);
    rf.push_back(r_form);
    diff.push_back(exact - r_form);
  }
  out.exact = summarize(snr_db, ex, out.resampled);
  out.r_form = summarize(snr_db, rf, out.resampled);
  out.difference = summarize(snr_db, diff, out.resampled);
  return out;
}

// Haar-distributed orthogonal matrix: QR of an i.i.d. Gaussian matrix with a
// positive diagonal in R.
inline RealMatrix haar_orthogonal(std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed, StreamTag::Mixing, 0, 0);
  RealMatrix g(n, n);
  for (auto& v : g.entries()) v = rng.normal();
  return gram_schmidt_qr(g).q;
}

// Weights B_j = sum_i O(i,j) A_i for a fixed orthogonal O mixing the given
// design's own columns. Same column space of G, so the same capacity.
inline STBCDesign column_space_mixing(const STBCDesign& d, std::uint64_t seed) {
  const RealMatrix o = haar_orthogonal(d.weights.size(), seed);
  STBCDesign out = d;
  out.labels.clear();
  out.layer_multipliers.clear();
  out.layers = 1;
  out.groups_per_layer = 1;
  std::vector<std::size_t> all(d.weights.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  out.layout.groups = {all};
  for (std::size_t j = 0; j < d.weights.size(); ++j) {
    ComplexMatrix b(d.n_t, d.T);
    for (std::size_t i = 0; i < d.weights.size(); ++i) b += o(i, j) * d.weights[i];
    out.weights[j] = b;
  }
  out.provenance = d.provenance + "; Haar column-space mixing seed " + std::to_string(seed);
  return out;
}

// Baseline with the same number of weights and the same weight norms as a
// rate-`layers` design, but no structure: 2k columns of a Haar rotation of the
// complete orthogonal weight basis (all n_t layers).
inline STBCDesign random_mixing_baseline(int a, std::size_t layers, std::uint64_t seed) {
  const STBCDesign full = build_design(a, std::size_t{1} << a);
  const std::size_t keep = 2 * (std::size_t{1} << a) * layers;
  const RealMatrix o = haar_orthogonal(full.weights.size(), seed);
  STBCDesign out;
  out.n_t = full.n_t;
  out.T = full.T;
  out.layers = 1;
  out.groups_per_layer = 1;
  std::vector<std::size_t> all(keep);
  std::iota(all.begin(), all.end(), std::size_t{0});
  out.layout.groups = {all};
  for (std::size_t j = 0; j < keep; ++j) {
    ComplexMatrix b(full.n_t, full.T);
    for (std::size_t i = 0; i < full.weights.size(); ++i) b += o(i, j) * full.weights[i];
    out.weights.push_back(std::move(b));
  }
  out.provenance = "Haar mixing of the full weight basis, a=" + std::to_string(a) +
                   ", " + std::to_string(keep) + " columns, seed " + std::to_string(seed);
  return out;
}

inline std::vector<double> parse_snr_range(const std::string& text) {
  std::vector<double> out;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  try {
    if (parts.size() == 1) return {detail::parse_real(parts[0])};
    if (parts.size() != 3) throw Error(Errc::ParseError, "expected A:B:STEP");
    const double a = detail::parse_real(parts[0]);
    const double b = detail::parse_real(parts[1]);
    const double step = detail::parse_real(parts[2]);
    if (!(step > 0.0) || b < a) throw Error(Errc::ParseError, "need STEP > 0 and B >= A");
    const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
  } catch (const Error& e) {
    throw Error(Errc::ParseError, "bad SNR range '" + text + "': " + e.what());
  }
  return out;
}

inline std::vector<CapacityEstimate> capacity_sweep(const STBCDesign& d, std::size_t n_r,
                                                    const std::vector<double>& snr_db,
                                                    std::size_t trials, std::uint64_t seed,
                                                    std::size_t workers = 1) {
  std::vector<CapacityEstimate> out;
  for (std::size_t i = 0; i < snr_db.size(); ++i) {
    out.push_back(code_capacity(d, n_r, snr_db[i], trials, seed, static_cast<std::uint32_t>(i),
                                workers));
  }
  return out;
}

inline void write_capacity_csv(std::ostream& os, const std::vector<CapacityEstimate>& rows) {
  os << "snr_db,mean_bits,std_err,trials\n";
  for (const auto& r : rows) {
    os << detail::format_real(r.snr_db) << ',' << detail::format_real(r.mean) << ','
       << detail::format_real(r.std_error) << ',' << r.trials << '\n';
  }
}

}  // namespace stbc
