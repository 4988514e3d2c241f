#pragma once

// Maximum-likelihood decoding of Y = sqrt(SNR/n_t) H (beta S) + N.
//
// Everything runs on real info vectors z (length 2k): complex symbol c is
// z[2c] + j z[2c+1], each coordinate drawn from the normalized PAM component
// of a square QAM. The received model is y = B z + n with
// y = tilde_vec(vec(Y)) and B = sqrt(SNR/n_t) beta H_eq E, where E applies the
// per-group rotation. Candidates are compared by metric, and metrics within a
// relative 1e-10 are broken toward the lexicographically smallest PAM index
// vector, which is the same order as complex QAM indices.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "stbc/channel.hpp"
#include "stbc/coding_gain.hpp"
#include "stbc/complex_linalg.hpp"
#include "stbc/designs.hpp"
#include "stbc/parallel.hpp"

namespace stbc {

inline constexpr std::uint64_t kOracleBudget = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kConditionalBudget = 200'000'000;

class Constellation {
 public:
  static Constellation qam(std::size_t m) {
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m))));
    if (m < 4 || side * side != m) {
      throw Error(Errc::InvalidArgument, "only square QAM with M >= 4 is supported, got " +
                                             std::to_string(m));
    }
    Constellation c;
    c.label_ = std::to_string(m) + "-QAM";
    c.size_ = m;
    const double norm = std::sqrt(3.0 / (2.0 * static_cast<double>(m - 1)));
    for (std::size_t i = 0; i < side; ++i) {
      c.pam_.push_back(norm * (2.0 * static_cast<double>(i) - static_cast<double>(side - 1)));
    }
    return c;
  }

  // Accepts "4qam", "16qam", "4-QAM", "qpsk".
  static Constellation parse(std::string name) {
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (name == "qpsk") return qam(4);
    std::erase(name, '-');
    if (name.size() > 3 && name.ends_with("qam")) {
      const std::string digits = name.substr(0, name.size() - 3);
      if (std::all_of(digits.begin(), digits.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
        return qam(std::stoul(digits));
      }
    }
    throw Error(Errc::InvalidArgument, "unknown constellation '" + name + "'");
  }

  const std::string& label() const { return label_; }
  std::size_t size() const { return size_; }
  std::size_t pam_size() const { return pam_.size(); }
  const std::vector<double>& pam() const { return pam_; }

  // Complex point for index re_idx * sqrt(M) + im_idx.
  cplx point(std::size_t index) const {
    return {pam_[index / pam_.size()], pam_[index % pam_.size()]};
  }
  std::vector<cplx> points() const {
    std::vector<cplx> p;
    for (std::size_t i = 0; i < size_; ++i) p.push_back(point(i));
    return p;
  }

 private:
  std::string label_;
  std::size_t size_ = 0;
  std::vector<double> pam_;
};

// Everything fixed for a decoding session: design, encoder, alphabet, SNR.
struct LinkModel {
  STBCDesign design;
  Encoder encoder;
  Constellation constellation;
  double snr = 1.0;    // linear
  double beta = 1.0;   // energy scale for E||beta S||^2 = n_t T
  bool group_decodable = false;  // cross-group condition holds inside every layer

  double amplitude() const { return std::sqrt(snr / static_cast<double>(design.n_t)) * beta; }
  std::size_t complex_symbols() const { return design.weights.size() / 2; }
};

inline bool check_group_decodable(const STBCDesign& d, double tol = 1e-10) {
  if (d.groups_per_layer != 4 || d.layout.group_count() != 4 * d.layers) return false;
  const std::size_t q = d.layout.groups.front().size();
  for (std::size_t g = 0; g < d.layout.group_count(); ++g) {
    const auto& grp = d.layout.groups[g];
    if (grp.size() != q) return false;
    for (std::size_t k = 0; k < q; ++k)
      if (grp[k] != g * q + k) return false;  // contiguous, layer-major
  }
  for (std::size_t l = 0; l < d.layers; ++l)
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b)
        for (std::size_t x : d.layout.groups[l * 4 + a])
          for (std::size_t y : d.layout.groups[l * 4 + b])
            if (hurwitz_radon_residual(d.weights[x], d.weights[y]) > tol) return false;
  return true;
}

inline LinkModel make_link(const STBCDesign& d, const Encoder& e, const Constellation& c,
                           double snr_linear) {
  validate(d);
  if (snr_linear < 0.0 || !std::isfinite(snr_linear)) {
    throw Error(Errc::InvalidArgument, "SNR must be finite and non-negative");
  }
  LinkModel link{d, e, c, snr_linear, energy_scale(d), check_group_decodable(d)};
  link.encoder.alphabet = c.pam();
  return link;
}

// Rotated encoder when the design has the group-1 diagonal structure, the
// identity map otherwise.
inline LinkModel make_link(const STBCDesign& d, const Constellation& c, double snr_linear) {
  Encoder e;
  try {
    e = make_encoder(d);
  } catch (const Error& err) {
    if (err.code() != Errc::StructureError && err.code() != Errc::UnsupportedDim &&
        err.code() != Errc::DimensionMismatch) {
      throw;
    }
    e = identity_encoder(d);
  }
  return make_link(d, e, c, snr_linear);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline std::vector<double> info_values(const LinkModel& link, std::span<const std::size_t> pam_idx) {
  std::vector<double> z(pam_idx.size());
  const auto& pam = link.constellation.pam();
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = pam.at(pam_idx[i]);
  return z;
}

// beta * S for the given PAM index vector.
inline ComplexMatrix transmitted(const LinkModel& link, std::span<const std::size_t> pam_idx) {
  const auto z = info_values(link, pam_idx);
  return link.beta * codeword(link.design, encode(link.encoder, z));
}

// ||Y - sqrt(SNR/n_t) H beta S||_F^2 evaluated directly in the complex domain.
inline double metric_of(const ComplexMatrix& Y, const ComplexMatrix& H, const LinkModel& link,
                        std::span<const std::size_t> pam_idx) {
  const ComplexMatrix r = Y - std::sqrt(link.snr / static_cast<double>(link.design.n_t)) *
                                  (H * transmitted(link, pam_idx));
  const double f = fro_norm(r);
  return f * f;
}

// B = amplitude * H_eq * E.
inline RealMatrix effective_matrix(const ComplexMatrix& H, const LinkModel& link) {
  const RealMatrix heq = equivalent_channel(H, link.design);
  RealMatrix b(heq.rows(), heq.cols());
  const RealMatrix& map = link.encoder.map;
  for (const auto& g : link.design.layout.groups)
    for (std::size_t c = 0; c < g.size(); ++c)
      for (std::size_t r = 0; r < heq.rows(); ++r) {
        double acc = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) acc += heq(r, g[k]) * map(k, c);
        b(r, g[c]) = link.amplitude() * acc;
      }
  return b;
}

struct DecodeResult {
  std::vector<std::size_t> pam_indices;  // one per real info coordinate
  std::vector<std::size_t> symbols;      // complex QAM index per symbol
  double metric = 0.0;                   // recomputed from scratch
  std::uint64_t metric_evaluations = 0;
};

namespace detail {

inline bool better(double m, const std::vector<std::size_t>& idx, double best,
                   const std::vector<std::size_t>& best_idx) {
  if (!std::isfinite(best)) return std::isfinite(m) || m < best;
  const double tol = 1e-10 * (1.0 + std::abs(best));
  if (m < best - tol) return true;
  if (m > best + tol) return false;
  return std::lexicographical_compare(idx.begin(), idx.end(), best_idx.begin(), best_idx.end());
}

// Advances a mixed-radix counter (last coordinate fastest); false on wrap.
inline bool next_index(std::vector<std::size_t>& idx, std::size_t base) {
  for (std::size_t k = idx.size(); k-- > 0;) {
    if (++idx[k] < base) return true;
    idx[k] = 0;
  }
  return false;
}

inline std::uint64_t checked_power(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (v > cap / base) return cap + 1;
    v *= base;
  }
  return v;
}

inline DecodeResult finish(const ComplexMatrix& Y, const ComplexMatrix& H, const LinkModel& link,
                           std::vector<std::size_t> idx, std::uint64_t evals) {
  DecodeResult r;
  const std::size_t side = link.constellation.pam_size();
  r.pam_indices = std::move(idx);
  for (std::size_t c = 0; c + 1 < r.pam_indices.size(); c += 2) {
    r.symbols.push_back(r.pam_indices[c] * side + r.pam_indices[c + 1]);
  }
  r.metric = metric_of(Y, H, link, r.pam_indices);
  r.metric_evaluations = evals;
  return r;
}

// Best PAM index vector for min ||t - V z|| over one group, V upper triangular
// q x q at offset `o` of R. Returns the partial metric.
inline double search_group(const RealMatrix& R, std::size_t o, std::size_t q,
                           std::span<const double> t, const std::vector<double>& pam,
                           std::vector<std::size_t>& best_idx, std::uint64_t& evals) {
  std::vector<std::size_t> idx(q, 0);
  std::vector<double> z(q);
  double best = std::numeric_limits<double>::infinity();
  best_idx.assign(q, 0);
  do {
    for (std::size_t k = 0; k < q; ++k) z[k] = pam[idx[k]];
    double m = 0.0;
    for (std::size_t r = 0; r < q; ++r) {
      double acc = t[r];
      for (std::size_t c = r; c < q; ++c) acc -= R(o + r, o + c) * z[c];
      m += acc * acc;
    }
    ++evals;
    if (better(m, idx, best, best_idx)) {
      best = m;
      best_idx = idx;
    }
  } while (next_index(idx, pam.size()));
  return best;
}

}  // namespace detail

// Exhaustive search over all M^k candidates in lexicographic order.
inline DecodeResult ml_oracle(const ComplexMatrix& Y, const ComplexMatrix& H,
                              const LinkModel& link, std::uint64_t budget = kOracleBudget) {
  const std::size_t n = link.design.weights.size();
  const std::size_t side = link.constellation.pam_size();
  if (link.complex_symbols() > 8 || detail::checked_power(side, n, budget) > budget) {
    throw Error(Errc::TooLarge, "exhaustive search over " + std::to_string(link.complex_symbols()) +
                                    " symbols of " + link.constellation.label() +
                                    " exceeds the oracle budget");
  }
  const RealMatrix B = effective_matrix(H, link);
  const RealVector y = tilde_vec(Y);
  const auto& pam = link.constellation.pam();
  std::vector<std::size_t> idx(n, 0);
  std::vector<std::size_t> best_idx(n, 0);
  std::vector<double> res(y.size());
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t evals = 0;
  do {
    res = y;
    for (std::size_t c = 0; c < n; ++c) {
      const double z = pam[idx[c]];
      for (std::size_t r = 0; r < res.size(); ++r) res[r] -= B(r, c) * z;
    }
    const double m = dot(res, res);
    ++evals;
    if (detail::better(m, idx, best, best_idx)) {
      best = m;
      best_idx = idx;
    }
  } while (detail::next_index(idx, side));
  return detail::finish(Y, H, link, std::move(best_idx), evals);
}

namespace detail {

// Group-decodes the first layer given the rotated observation t = Q^T y - (outer part).
inline double decode_layer_groups(const RealMatrix& R, std::span<const double> t,
                                  const LinkModel& link, std::vector<std::size_t>& out,
                                  std::uint64_t& evals) {
  const std::size_t q = link.design.group_size();
  const auto& pam = link.constellation.pam();
  double total = 0.0;
  std::vector<std::size_t> gi;
  for (std::size_t g = 0; g < 4; ++g) {
    total += search_group(R, g * q, q, t.subspan(g * q, q), pam, gi, evals);
    std::copy(gi.begin(), gi.end(), out.begin() + static_cast<std::ptrdiff_t>(g * q));
  }
  return total;
}

}  // namespace detail

// Independent per-group search for rate-1 4-group decodable designs.
inline DecodeResult group_decode(const ComplexMatrix& Y, const ComplexMatrix& H,
                                 const LinkModel& link) {
  if (!link.group_decodable || link.design.layers != 1) {
    throw Error(Errc::NotGroupDecodable, "design is not a single-layer 4-group decodable code");
  }
  const RealMatrix B = effective_matrix(H, link);
  const auto qr = gram_schmidt_qr(B);
  const RealVector t = qr.q.transpose() * tilde_vec(Y);
  std::vector<std::size_t> idx(B.cols(), 0);
  std::uint64_t evals = 0;
  detail::decode_layer_groups(qr.r, t, link, idx, evals);
  return detail::finish(Y, H, link, std::move(idx), evals);
}

// Enumerates every candidate for layers 2..L, removes its contribution, and
// group-decodes layer 1. With `prune`, outer candidates whose partial metric
// already exceeds the best total are skipped; the answer is unchanged.
inline DecodeResult conditional_decode(const ComplexMatrix& Y, const ComplexMatrix& H,
                                       const LinkModel& link, bool prune = false,
                                       std::size_t workers = 1,
                                       std::uint64_t budget = kConditionalBudget) {
  if (!link.group_decodable) {
    throw Error(Errc::NotGroupDecodable, "layers are not 4-group decodable");
  }
  const std::size_t n = link.design.weights.size();
  const std::size_t n1 = link.design.layer_size();
  const std::size_t n2 = n - n1;
  const std::size_t side = link.constellation.pam_size();
  const std::size_t q = link.design.group_size();
  const std::uint64_t outer = detail::checked_power(side, n2, budget);
  const std::uint64_t inner = 4 * detail::checked_power(side, q, budget);
  if (outer > budget || inner > budget || outer > budget / inner) {
    throw Error(Errc::BudgetExceeded, "conditional search exceeds budget " + std::to_string(budget));
  }
  const RealMatrix B = effective_matrix(H, link);
  const auto qr = gram_schmidt_qr(B);
  const RealVector t = qr.q.transpose() * tilde_vec(Y);
  const auto& pam = link.constellation.pam();
  const RealMatrix& R = qr.r;

  struct Best {
    double metric = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx;
    std::uint64_t evals = 0;
  };
  const std::size_t nw = std::max<std::size_t>(1, workers);
  std::vector<Best> parts(nw);
  parallel_chunks(static_cast<std::size_t>(outer), nw,
                  [&](std::size_t begin, std::size_t end, std::size_t w) {
    Best& b = parts[w];
    b.idx.assign(n, 0);
    std::vector<std::size_t> cand(n, 0);
    std::vector<std::size_t> oidx(n2, 0);
    std::vector<double> z2(n2);
    std::vector<double> t1(n1);
    std::vector<std::size_t> inner_idx(n1, 0);
    for (std::size_t o = begin; o < end; ++o) {
      std::size_t rest = o;
      for (std::size_t k = n2; k-- > 0;) {
        oidx[k] = rest % side;
        rest /= side;
        z2[k] = pam[oidx[k]];
      }
      double outer_metric = 0.0;
      for (std::size_t r = 0; r < n2; ++r) {
        double acc = t[n1 + r];
        for (std::size_t c = r; c < n2; ++c) acc -= R(n1 + r, n1 + c) * z2[c];
        outer_metric += acc * acc;
      }
      if (prune && outer_metric > b.metric + 1e-10 * (1.0 + std::abs(b.metric))) continue;
      for (std::size_t r = 0; r < n1; ++r) {
        double acc = t[r];
        for (std::size_t c = 0; c < n2; ++c) acc -= R(r, n1 + c) * z2[c];
        t1[r] = acc;
      }
      const double inner_metric = detail::decode_layer_groups(R, t1, link, inner_idx, b.evals);
      std::copy(inner_idx.begin(), inner_idx.end(), cand.begin());
      std::copy(oidx.begin(), oidx.end(), cand.begin() + static_cast<std::ptrdiff_t>(n1));
      const double m = outer_metric + inner_metric;
      if (detail::better(m, cand, b.metric, b.idx)) {
        b.metric = m;
        b.idx = cand;
      }
    }
  });
  Best total;
  total.idx.assign(n, 0);
  for (const auto& p : parts) {
    total.evals += p.evals;
    if (!p.idx.empty() && detail::better(p.metric, p.idx, total.metric, total.idx)) {
      total.metric = p.metric;
      total.idx = p.idx;
    }
  }
  return detail::finish(Y, H, link, std::move(total.idx), total.evals);
}

struct ComplexityAccount {
  std::uint64_t evaluations = 0;   // exact count per codeword
  double order_exponent = 0.0;     // evaluations ~ M^order_exponent
  std::string formula;
};

// Counter prediction for the decoder matching the design: group decoding for
// a single layer, conditional decoding for several.
inline ComplexityAccount complexity_account(const STBCDesign& d, const Constellation& c) {
  ComplexityAccount a;
  const std::size_t side = c.pam_size();
  const std::size_t q = d.group_size();
  const std::size_t n2 = d.weights.size() - d.layer_size();
  const auto cap = std::numeric_limits<std::uint64_t>::max() / 8;
  a.evaluations = detail::checked_power(side, n2, cap) * 4 * detail::checked_power(side, q, cap);
  a.order_exponent = static_cast<double>(n2 + q) / 2.0;
  if (d.layers == 1) {
    a.formula = "4*M^" + detail::format_real(static_cast<double>(q) / 2.0);
  } else {
    a.formula = "M^" + std::to_string(n2 / 2) + "*4*M^" +
                detail::format_real(static_cast<double>(q) / 2.0);
  }
  return a;
}

inline std::uint64_t oracle_evaluations(const STBCDesign& d, const Constellation& c) {
  return detail::checked_power(c.pam_size(), d.weights.size(),
                               std::numeric_limits<std::uint64_t>::max() / 2);
}

}  // namespace stbc
