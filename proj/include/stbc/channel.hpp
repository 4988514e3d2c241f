#pragma once

// Rayleigh block fading, the real equivalent channel H_eq = (I_T (x) realify(H)) G
// and the zero structure of its column-ordered QR factor.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stbc/complex_linalg.hpp"
#include "stbc/designs.hpp"
#include "stbc/random.hpp"

namespace stbc {

struct ChannelRealization {
  ComplexMatrix H;  // n_r x n_t
  std::uint64_t seed = 0;
  std::uint32_t snr_index = 0;
  std::uint32_t trial_index = 0;
};

inline ChannelRealization sample_channel(std::size_t n_t, std::size_t n_r, std::uint64_t seed,
                                         std::uint32_t snr_index, std::uint32_t trial_index) {
  RandomStream rng(seed, StreamTag::Channel, snr_index, trial_index);
  return {complex_normal_matrix(n_r, n_t, rng), seed, snr_index, trial_index};
}

// Column i is tilde_vec(vec(H A_i)).
inline RealMatrix equivalent_channel(const ComplexMatrix& H, const STBCDesign& d) {
  if (H.cols() != d.n_t) {
    throw Error(Errc::DimensionMismatch, "H has " + std::to_string(H.cols()) +
                                             " columns, design has n_t = " +
                                             std::to_string(d.n_t));
  }
  RealMatrix heq(2 * H.rows() * d.T, d.weights.size());
  for (std::size_t i = 0; i < d.weights.size(); ++i) {
    heq.set_column(i, tilde_vec(H * d.weights[i]));
  }
  return heq;
}

// Weight pairs meeting A_i A_j^H + A_j A_i^H = 0, whose H_eq columns are
// orthogonal for every H.
inline std::vector<std::pair<std::size_t, std::size_t>> column_orthogonality_pairs(
    const STBCDesign& d, double tol = 1e-12) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < d.weights.size(); ++i)
    for (std::size_t j = i + 1; j < d.weights.size(); ++j)
      if (hurwitz_radon_residual(d.weights[i], d.weights[j]) < tol) out.emplace_back(i, j);
  return out;
}

struct BlockClass {
  std::size_t layer = 0;
  bool kron_form = false;     // block equals I_g (x) V
  double max_cross = 0.0;     // largest |entry| outside the g diagonal sub-blocks
  double max_v_spread = 0.0;  // largest difference between the g copies of V
};

struct RProfile {
  RealMatrix R;                       // from unit-norm columns
  std::vector<std::uint8_t> zero_mask;  // row-major, 1 where |R(i,j)| < tol
  std::vector<BlockClass> blocks;     // one per layer diagonal block
  std::size_t upper_zeros = 0;        // zeros strictly above the diagonal
  double off_block_density = 0.0;     // nonzero fraction of strictly upper layer blocks
  double tol = 1e-9;

  bool is_zero(std::size_t i, std::size_t j) const { return zero_mask[i * R.cols() + j] != 0; }
  bool all_kron_form() const {
    return std::all_of(blocks.begin(), blocks.end(), [](const BlockClass& b) { return b.kron_form; });
  }
};

inline RealMatrix normalize_columns(const RealMatrix& a) {
  RealMatrix out = a;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * a(i, j);
    s = std::sqrt(s);
    if (s == 0.0) throw Error(Errc::RankDeficient, "zero column " + std::to_string(j));
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) /= s;
  }
  return out;
}

// QR of H_eq after scaling columns to unit norm. Each layer's diagonal block
// (width layer_size) is tested for the form I_g (x) V with g = groups_per_layer.
inline RProfile r_profile(const RealMatrix& heq, std::size_t layer_size,
                          std::size_t groups_per_layer, double tol = 1e-9) {
  if (layer_size == 0 || heq.cols() % layer_size != 0) {
    throw Error(Errc::InvalidArgument, "layer size does not divide the column count");
  }
  if (groups_per_layer == 0 || layer_size % groups_per_layer != 0) {
    throw Error(Errc::InvalidArgument, "groups do not divide the layer size");
  }
  RProfile p;
  p.tol = tol;
  p.R = gram_schmidt_qr(normalize_columns(heq)).r;
  const std::size_t n = p.R.cols();
  p.zero_mask.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const bool z = std::abs(p.R(i, j)) < tol;
      p.zero_mask[i * n + j] = z;
      if (z && j > i) ++p.upper_zeros;
    }
  const std::size_t q = layer_size / groups_per_layer;
  const std::size_t layers = n / layer_size;
  std::size_t off_total = 0;
  std::size_t off_nonzero = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    BlockClass b;
    b.layer = l;
    const std::size_t o = l * layer_size;
    for (std::size_t gi = 0; gi < groups_per_layer; ++gi)
      for (std::size_t gj = 0; gj < groups_per_layer; ++gj)
        for (std::size_t r = 0; r < q; ++r)
          for (std::size_t c = 0; c < q; ++c) {
            const double v = p.R(o + gi * q + r, o + gj * q + c);
            if (gi != gj) {
              b.max_cross = std::max(b.max_cross, std::abs(v));
            } else if (gi > 0) {
              b.max_v_spread = std::max(b.max_v_spread, std::abs(v - p.R(o + r, o + c)));
            }
          }
    b.kron_form = b.max_cross < tol && b.max_v_spread < tol;
    p.blocks.push_back(b);
    for (std::size_t l2 = l + 1; l2 < layers; ++l2)
      for (std::size_t r = 0; r < layer_size; ++r)
        for (std::size_t c = 0; c < layer_size; ++c) {
          ++off_total;
          off_nonzero += !p.is_zero(o + r, l2 * layer_size + c);
        }
  }
  p.off_block_density =
      off_total ? static_cast<double>(off_nonzero) / static_cast<double>(off_total) : 0.0;
  return p;
}

inline RProfile r_profile(const RealMatrix& heq, const STBCDesign& d, double tol = 1e-9) {
  return r_profile(heq, d.layer_size(), d.groups_per_layer, tol);
}

// Entries of R that must vanish for any channel, derived only from the
// orthogonal column pairs: q_i lies in the span of a tracked set of original
// columns, and R(i,j) = <q_i, h_j> is zero when h_j is orthogonal to all of them.
inline std::vector<std::uint8_t> implied_zero_mask(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<std::uint8_t> orth(n * n, 0);
  for (const auto& [i, j] : pairs) {
    orth[i * n + j] = 1;
    orth[j * n + i] = 1;
  }
  std::vector<std::vector<std::size_t>> support(n);
  std::vector<std::uint8_t> mask(n * n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    support[j].push_back(j);
    for (std::size_t i = 0; i < j; ++i) {
      const bool zero = std::all_of(support[i].begin(), support[i].end(),
                                    [&](std::size_t m) { return orth[m * n + j] != 0; });
      mask[i * n + j] = zero;
      if (!zero) support[j].insert(support[j].end(), support[i].begin(), support[i].end());
    }
    std::sort(support[j].begin(), support[j].end());
    support[j].erase(std::unique(support[j].begin(), support[j].end()), support[j].end());
  }
  return mask;
}

// Zero grid: '#' nonzero, '.' zero, ' ' below the diagonal.
inline std::string zero_mask_grid(const RProfile& p) {
  std::string s;
  const std::size_t n = p.R.cols();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) s += j < i ? ' ' : (p.is_zero(i, j) ? '.' : '#');
    s += '\n';
  }
  return s;
}

}  // namespace stbc
