#pragma once

// Coding gain of the rate-1 4-group construction. Group-1 weights are ±1
// diagonals whose entries repeat in consecutive pairs, so for a difference
// confined to one group det(dS dS^H) = prod_j (sum_i d_{i,2j-1} ds_i)^4.
// Collecting those diagonals into W (orthogonal) turns the factors into
// (W^T ds)_j / sqrt(2/n_t); encoding ds = W U dz with a full-diversity
// rotation U keeps them away from zero.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "stbc/complex_linalg.hpp"
#include "stbc/designs.hpp"
#include "stbc/errors.hpp"
#include "stbc/parallel.hpp"

namespace stbc {

inline constexpr std::size_t kDefaultDetBudget = 10'000'000;

struct RotationSpec {
  std::size_t dim = 0;
  RealMatrix U;
  std::string source;            // "builtin" or "user-file"
  double certified_min_product = 0.0;  // min |prod (U z)_j| over the certification box
};

// W(i, j) = sqrt(2/n_t) * d_{i, 2j-1}: row i is the i-th group-1 weight,
// column j picks its (2j-1)-th diagonal entry.
inline RealMatrix extract_W(const STBCDesign& d) {
  if (d.layout.groups.empty()) throw Error(Errc::StructureError, "design has no groups");
  if (d.n_t % 2 != 0 && d.n_t != 1) throw Error(Errc::StructureError, "odd n_t");
  const auto& g0 = d.layout.groups[0];
  const std::size_t half = d.n_t / 2;
  if (g0.size() != half || half == 0) {
    throw Error(Errc::StructureError, "group 1 must hold n_t/2 weights");
  }
  const double c = std::sqrt(2.0 / static_cast<double>(d.n_t));
  RealMatrix w(half, half);
  for (std::size_t i = 0; i < half; ++i) {
    const ComplexMatrix& a = d.weights[g0[i]];
    for (std::size_t r = 0; r < d.n_t; ++r)
      for (std::size_t s = 0; s < d.n_t; ++s) {
        const cplx v = a(r, s);
        const bool ok = r == s ? (v == cplx(1.0) || v == cplx(-1.0)) : v == cplx(0.0);
        if (!ok) {
          throw Error(Errc::StructureError,
                      "group-1 weight " + std::to_string(g0[i] + 1) + " is not a +-1 diagonal");
        }
      }
    for (std::size_t j = 0; j < half; ++j) {
      if (a(2 * j, 2 * j) != a(2 * j + 1, 2 * j + 1)) {
        throw Error(Errc::StructureError, "group-1 diagonal entries do not pair up");
      }
      w(i, j) = c * a(2 * j, 2 * j).real();
    }
  }
  return w;
}

// Smallest |prod_j (U z)_j| over nonzero z with entries from `values` and at
// most `max_support` nonzero coordinates (0 = no limit).
inline double min_product_distance(const RealMatrix& u, const std::vector<double>& values,
                                   std::size_t max_support = 0) {
  const std::size_t n = u.cols();
  const std::size_t base = values.size();
  std::vector<std::size_t> digit(n, 0);
  std::vector<double> z(n);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::size_t support = 0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = values[digit[i]];
      support += z[i] != 0.0;
    }
    if (support > 0 && (max_support == 0 || support <= max_support)) {
      double p = 1.0;
      for (std::size_t r = 0; r < u.rows(); ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < n; ++c) acc += u(r, c) * z[c];
        p *= acc;
      }
      best = std::min(best, std::abs(p));
    }
    std::size_t pos = 0;
    while (pos < n) {
      if (++digit[pos] < base) break;
      digit[pos++] = 0;
    }
    if (pos == n) break;
  }
  return best;
}

namespace detail {

inline RealMatrix dct4(std::size_t n) {
  RealMatrix u(n, n);
  const double s = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      u(k, l) = s * std::cos(std::numbers::pi * static_cast<double>((2 * k + 1) * (2 * l + 1)) /
                             (4.0 * static_cast<double>(n)));
  return u;
}

// Enumerates vectors in {-2,0,2}^n with at most `support` nonzeros directly.
inline double sparse_min_product(const RealMatrix& u, std::size_t support) {
  const std::size_t n = u.cols();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pos;
  std::vector<double> z(n, 0.0);
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (!pos.empty()) {
      for (std::size_t mask = 0; mask < (std::size_t{1} << pos.size()); ++mask) {
        for (std::size_t k = 0; k < pos.size(); ++k) z[pos[k]] = ((mask >> k) & 1U) ? -2.0 : 2.0;
        double p = 1.0;
        for (std::size_t r = 0; r < u.rows(); ++r) {
          double acc = 0.0;
          for (std::size_t k : pos) acc += u(r, k) * z[k];
          p *= acc;
        }
        best = std::min(best, std::abs(p));
      }
      for (std::size_t k : pos) z[k] = 0.0;
    }
    if (pos.size() == support) return;
    for (std::size_t i = start; i < n; ++i) {
      pos.push_back(i);
      rec(i + 1);
      pos.pop_back();
    }
  };
  rec(0);
  return best;
}

}  // namespace detail

inline double certify_rotation(const RealMatrix& u) {
  if (u.rows() <= 8) return min_product_distance(u, {-2.0, 0.0, 2.0});
  return detail::sparse_min_product(u, 3);
}

// Built-in rotations: [1]; the 2x2 rotation by atan(2)/2; and for 4, 8, 16 the
// cosine matrix sqrt(2/n) cos(pi (2k-1)(2l-1) / 4n). Each is certified by
// brute force before being returned; dim 16 is certified on differences with
// at most three nonzero coordinates.
inline RotationSpec builtin_rotation(std::size_t dim) {
  RotationSpec rs;
  rs.dim = dim;
  rs.source = "builtin";
  switch (dim) {
    case 1:
      rs.U = RealMatrix{{1.0}};
      rs.certified_min_product = 2.0;
      return rs;
    case 2: {
      const double t = 0.5 * std::atan(2.0);
      rs.U = RealMatrix{{std::cos(t), -std::sin(t)}, {std::sin(t), std::cos(t)}};
      break;
    }
    case 4:
    case 8:
    case 16:
      rs.U = detail::dct4(dim);
      break;
    default:
      throw Error(Errc::UnsupportedDim, "no built-in rotation of dimension " + std::to_string(dim));
  }
  rs.certified_min_product = certify_rotation(rs.U);
  if (!(rs.certified_min_product > 1e-9)) {
    throw Error(Errc::StructureError, "built-in rotation failed its product-distance check");
  }
  return rs;
}

inline RotationSpec rotation_from_matrix(const ComplexMatrix& m, std::string source) {
  if (!m.is_square()) throw Error(Errc::NonSquare, "rotation must be square");
  for (const auto& v : m.entries()) {
    if (v.imag() != 0.0) throw Error(Errc::InvalidArgument, "rotation must be real");
  }
  RotationSpec rs;
  rs.dim = m.rows();
  rs.U = real_part(m);
  rs.source = std::move(source);
  if (!is_orthogonal(rs.U, 1e-10)) {
    throw Error(Errc::InvalidArgument, "rotation matrix is not orthogonal to 1e-10");
  }
  rs.certified_min_product = rs.dim <= 8 ? certify_rotation(rs.U) : 0.0;
  return rs;
}

inline RotationSpec load_rotation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open rotation file " + path);
  return rotation_from_matrix(read_matrix(in), "user-file");
}

// Per-group real encoder: stored symbols s_p = (W U) z_p for every group p.
struct Encoder {
  STBCDesign design;
  RealMatrix W;
  RotationSpec rotation;
  RealMatrix map;                 // W * U
  std::vector<double> alphabet;   // allowed real info values (PAM component set)

  std::size_t group_size() const { return map.rows(); }
};

inline Encoder make_encoder(const STBCDesign& d, const RotationSpec& rot,
                            std::vector<double> alphabet = {}) {
  Encoder e;
  e.design = d;
  e.W = extract_W(d);
  if (rot.dim != e.W.rows()) {
    throw Error(Errc::DimensionMismatch, "rotation dimension " + std::to_string(rot.dim) +
                                             " != n_t/2 = " + std::to_string(e.W.rows()));
  }
  for (const auto& g : d.layout.groups) {
    if (g.size() != rot.dim) throw Error(Errc::StructureError, "unequal group sizes");
  }
  e.rotation = rot;
  e.map = e.W * rot.U;
  if (!is_orthogonal(e.map, 1e-10)) throw Error(Errc::StructureError, "W U is not orthogonal");
  e.alphabet = std::move(alphabet);
  return e;
}

inline Encoder make_encoder(const STBCDesign& d, std::vector<double> alphabet = {}) {
  return make_encoder(d, builtin_rotation(d.n_t / 2), std::move(alphabet));
}

inline Encoder identity_encoder(const STBCDesign& d, std::vector<double> alphabet = {}) {
  Encoder e;
  e.design = d;
  const std::size_t q = d.group_size();
  try {
    e.W = extract_W(d);
  } catch (const Error&) {
    e.W = RealMatrix::identity(q);  // no diagonal structure to expose
  }
  e.rotation = RotationSpec{q, RealMatrix::identity(q), "identity", 0.0};
  e.map = RealMatrix::identity(q);
  e.alphabet = std::move(alphabet);
  return e;
}

// Info and stored vectors are indexed like the weights; group p's entries
// sit at the indices listed in layout.groups[p].
inline std::vector<double> encode(const Encoder& e, std::span<const double> info) {
  if (info.size() != e.design.weights.size()) {
    throw Error(Errc::DimensionMismatch, "info vector length");
  }
  if (!e.alphabet.empty()) {
    for (double x : info) {
      const bool member = std::any_of(e.alphabet.begin(), e.alphabet.end(),
                                      [x](double a) { return std::abs(a - x) < 1e-12; });
      if (!member) throw Error(Errc::AlphabetError, "symbol " + detail::format_real(x) +
                                                        " is outside the alphabet");
    }
  }
  std::vector<double> out(info.size());
  std::vector<double> z(e.group_size());
  for (const auto& g : e.design.layout.groups) {
    for (std::size_t k = 0; k < g.size(); ++k) z[k] = info[g[k]];
    const auto s = e.map * z;
    for (std::size_t k = 0; k < g.size(); ++k) out[g[k]] = s[k];
  }
  return out;
}

inline std::vector<double> decode_symbols(const Encoder& e, std::span<const double> stored) {
  if (stored.size() != e.design.weights.size()) {
    throw Error(Errc::DimensionMismatch, "stored vector length");
  }
  const RealMatrix inv = e.map.transpose();
  std::vector<double> out(stored.size());
  std::vector<double> s(e.group_size());
  for (const auto& g : e.design.layout.groups) {
    for (std::size_t k = 0; k < g.size(); ++k) s[k] = stored[g[k]];
    const auto z = inv * s;
    for (std::size_t k = 0; k < g.size(); ++k) out[g[k]] = z[k];
  }
  return out;
}

// Per-coordinate difference sets of integer PAM components.
inline std::vector<double> difference_alphabet(const std::string& name) {
  if (name == "2pam" || name == "4qam") return {-2.0, 0.0, 2.0};
  if (name == "4pam" || name == "16qam") return {-6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 6.0};
  if (name == "8pam" || name == "64qam") {
    std::vector<double> v;
    for (int k = -7; k <= 7; ++k) v.push_back(2.0 * k);
    return v;
  }
  throw Error(Errc::InvalidArgument, "unknown alphabet '" + name + "'");
}

// det(dS dS^H) for a difference living in one group.
inline double literal_group_det(const STBCDesign& d, std::size_t group,
                                std::span<const double> ds) {
  const auto& g = d.layout.groups.at(group);
  ComplexMatrix delta(d.n_t, d.T);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (ds[k] != 0.0) delta += ds[k] * d.weights[g[k]];
  }
  return det(delta * delta.adjoint()).real();
}

// prod_j ((W^T ds)_j / sqrt(2/n_t))^4.
inline double closed_form_det(const RealMatrix& w, std::span<const double> ds) {
  const double c = std::sqrt(2.0 / static_cast<double>(2 * w.rows()));
  double p = 1.0;
  for (std::size_t j = 0; j < w.cols(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < w.rows(); ++i) acc += w(i, j) * ds[i];
    const double f = acc / c;
    p *= f * f * f * f;
  }
  return p;
}

struct MinDetResult {
  double min_det = 0.0;          // literal determinant
  double min_det_closed = 0.0;   // closed-form product at the same minimizer
  std::vector<double> argmin;    // info difference achieving the minimum
  std::size_t evaluations = 0;
  double max_rel_discrepancy = 0.0;
  bool agree = true;             // literal and closed form within 1e-9 relative everywhere
};

// Minimum of det(dS dS^H) over nonzero info differences dz in diffs^q placed
// in one group, with ds = (W U) dz. Both evaluation routes are run for every
// candidate and compared.
inline MinDetResult min_determinant(const Encoder& e, const std::vector<double>& diffs,
                                    std::size_t budget = kDefaultDetBudget,
                                    std::size_t group = 0, std::size_t workers = 1) {
  const std::size_t q = e.group_size();
  const std::size_t base = diffs.size();
  if (base == 0) throw Error(Errc::InvalidArgument, "empty difference alphabet");
  double total = 1.0;
  for (std::size_t i = 0; i < q; ++i) total *= static_cast<double>(base);
  if (total - 1.0 > static_cast<double>(budget)) {
    throw Error(Errc::BudgetExceeded, "difference enumeration needs " +
                                          detail::format_real(total - 1.0) +
                                          " determinants, budget " + std::to_string(budget));
  }
  if (group >= e.design.layout.group_count()) throw Error(Errc::InvalidArgument, "group index");
  const auto count = static_cast<std::size_t>(total);

  struct Partial {
    double best = std::numeric_limits<double>::infinity();
    double closed = 0.0;
    std::size_t arg = 0;
    std::size_t evals = 0;
    double disc = 0.0;
  };
  const std::size_t nw = std::max<std::size_t>(1, workers);
  std::vector<Partial> parts(nw);
  parallel_chunks(count, nw, [&](std::size_t begin, std::size_t end, std::size_t w) {
    Partial& p = parts[w];
    std::vector<double> dz(q);
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::size_t rest = idx;
      bool nonzero = false;
      for (std::size_t k = 0; k < q; ++k) {
        dz[k] = diffs[rest % base];
        rest /= base;
        nonzero = nonzero || dz[k] != 0.0;
      }
      if (!nonzero) continue;
      const auto ds = e.map * dz;
      const double lit = literal_group_det(e.design, group, ds);
      const double cf = closed_form_det(e.W, ds);
      ++p.evals;
      // Values far below the trace bound ||ds||^(2 n_t) are compared on that scale.
      const double bound = std::pow(dot(ds, ds), static_cast<double>(e.design.n_t));
      const double denom = std::max({std::abs(lit), std::abs(cf), 1e-4 * bound});
      p.disc = std::max(p.disc, std::abs(lit - cf) / denom);
      if (lit < p.best) {
        p.best = lit;
        p.closed = cf;
        p.arg = idx;
      }
    }
  });
  MinDetResult r;
  r.min_det = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (const auto& p : parts) {
    r.evaluations += p.evals;
    r.max_rel_discrepancy = std::max(r.max_rel_discrepancy, p.disc);
    if (p.best < r.min_det) {
      r.min_det = p.best;
      r.min_det_closed = p.closed;
      arg = p.arg;
    }
  }
  r.argmin.resize(q);
  for (std::size_t k = 0; k < q; ++k) {
    r.argmin[k] = diffs[arg % base];
    arg /= base;
  }
  r.agree = r.max_rel_discrepancy <= 1e-9;
  return r;
}

}  // namespace stbc
