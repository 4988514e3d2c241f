#pragma once

// Pairwise anticommuting, anti-Hermitian, unitary generators F_1..F_{2a} for
// n = 2^a, built from Kronecker powers of three 2x2 matrices, plus the
// product machinery over them (signed products, power sets, commutation and
// squaring rules).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stbc/complex_linalg.hpp"
#include "stbc/errors.hpp"
#include "stbc/report.hpp"

namespace stbc {

inline constexpr int kMaxCliffordOrder = 5;

inline ComplexMatrix pauli_p1() { return ComplexMatrix{{0.0, 1.0}, {-1.0, 0.0}}; }
inline ComplexMatrix pauli_p2() { return ComplexMatrix{{0.0, kJ}, {kJ, 0.0}}; }
inline ComplexMatrix pauli_p3() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }

// j^p for p in {0,1,2,3}.
inline cplx j_power_value(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

inline std::string j_power_prefix(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return "";
    case 1: return "j";
    case 2: return "-";
    default: return "-j";
  }
}

struct CliffordSet {
  int a = 0;
  std::size_t n = 0;
  int sign_choice = 1;
  // F_1..F_{2a}; at a = 1 a third matrix P_2 is appended so that three
  // pairwise anticommuting matrices exist.
  std::vector<ComplexMatrix> generators;

  std::size_t core_count() const { return static_cast<std::size_t>(2 * a); }
};

inline CliffordSet build_generators(int a, int sign = 1) {
  if (a < 1 || a > kMaxCliffordOrder) {
    throw Error(Errc::UnsupportedSize, "Clifford order a must be in [1, 5], got " +
                                           std::to_string(a));
  }
  if (sign != 1 && sign != -1) throw Error(Errc::InvalidArgument, "sign must be +1 or -1");
  const auto ua = static_cast<std::size_t>(a);
  const auto i2 = ComplexMatrix::identity(2);
  CliffordSet set;
  set.a = a;
  set.n = std::size_t{1} << ua;
  set.sign_choice = sign;
  set.generators.push_back(cplx(0.0, sign) * kron_power(pauli_p3(), ua));
  for (std::size_t k = 1; k <= ua; ++k) {
    const auto left = kron_power(i2, ua - k);
    const auto right = kron_power(pauli_p3(), k - 1);
    set.generators.push_back(kron(kron(left, pauli_p1()), right));
    if (k < ua || ua == 1) set.generators.push_back(kron(kron(left, pauli_p2()), right));
  }
  return set;
}

inline int subset_square_sign(std::size_t s) {
  const std::size_t e = s * (s + 1) / 2;
  return (e % 2 == 0) ? 1 : -1;
}

// Products of r and s distinct generators sharing p of them commute iff
// (-1)^{rs-p} = 1, otherwise they anticommute.
inline bool products_commute(std::size_t r, std::size_t s, std::size_t p) {
  if (p > std::min(r, s)) throw Error(Errc::InvalidArgument, "overlap exceeds subset size");
  return ((r * s - p) % 2) == 0;
}

struct SignedProduct {
  ComplexMatrix matrix;
  std::vector<int> indices;  // 1-based, ascending
  int j_power = 0;           // scalar = j^j_power

  cplx scalar() const { return j_power_value(j_power); }

  std::string label() const {
    std::string s = j_power_prefix(j_power);
    if (indices.empty()) return s + "I";
    for (int i : indices) s += "F" + std::to_string(i);
    return s;
  }
};

inline SignedProduct product_of(const CliffordSet& set, std::span<const int> indices,
                                int j_power = 0) {
  const int count = static_cast<int>(set.generators.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 1 || indices[k] > count || (k > 0 && indices[k] <= indices[k - 1])) {
      throw Error(Errc::BadIndexOrder, "generator indices must be ascending in 1..2a");
    }
  }
  SignedProduct p;
  p.matrix = ComplexMatrix::identity(set.n);
  for (int i : indices) p.matrix = p.matrix * set.generators[static_cast<std::size_t>(i - 1)];
  p.j_power = ((j_power % 4) + 4) % 4;
  p.matrix *= p.scalar();
  p.indices.assign(indices.begin(), indices.end());
  return p;
}

inline SignedProduct product_of(const CliffordSet& set, std::initializer_list<int> indices,
                                int j_power = 0) {
  return product_of(set, std::span<const int>(indices.begin(), indices.size()), j_power);
}

// Symbolic product in canonical ascending form. Each inversion of the merged
// index sequence contributes -1, and every repeated generator squares to -I.
inline std::pair<std::vector<int>, int> canonical_product(std::span<const int> x, int jx,
                                                          std::span<const int> y, int jy) {
  int sign_flips = 0;
  for (int xi : x)
    for (int yi : y)
      if (xi > yi) ++sign_flips;
  std::vector<int> out;
  std::size_t i = 0;
  std::size_t k = 0;
  while (i < x.size() || k < y.size()) {
    if (k == y.size() || (i < x.size() && x[i] < y[k])) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[k] < x[i]) {
      out.push_back(y[k++]);
    } else {
      ++sign_flips;  // F_i F_i = -I
      ++i;
      ++k;
    }
  }
  const int jp = (jx + jy + 2 * (sign_flips % 2)) % 4;
  return {out, jp};
}

// Literal matrix product with the symbolic label tracked alongside.
inline SignedProduct multiply(const SignedProduct& x, const SignedProduct& y) {
  auto [idx, jp] = canonical_product(x.indices, x.j_power, y.indices, y.j_power);
  return SignedProduct{x.matrix * y.matrix, std::move(idx), jp};
}

inline SignedProduct identity_product(const CliffordSet& set) {
  return SignedProduct{ComplexMatrix::identity(set.n), {}, 0};
}

// All 2^|S| products s_1^{l_1} ... s_m^{l_m}, lambda read as a binary number
// with s_1 as the least significant bit, so the identity comes first.
inline std::vector<SignedProduct> power_set_products(const CliffordSet& set,
                                                     std::span<const SignedProduct> s) {
  if (s.size() > 12) throw Error(Errc::TooLarge, "power set limited to 12 elements");
  std::vector<SignedProduct> out;
  const std::size_t total = std::size_t{1} << s.size();
  out.reserve(total);
  for (std::size_t lambda = 0; lambda < total; ++lambda) {
    SignedProduct p = identity_product(set);
    for (std::size_t b = 0; b < s.size(); ++b) {
      if ((lambda >> b) & 1U) p = multiply(p, s[b]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

// Every product F_1^{l_1} ... F_{2a}^{l_{2a}} over the 2a core generators,
// ordered by subset size then lexicographically; the identity is first.
inline std::vector<SignedProduct> all_generator_products(const CliffordSet& set) {
  const std::size_t m = set.core_count();
  std::vector<std::vector<int>> subsets;
  for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
    std::vector<int> idx;
    for (std::size_t b = 0; b < m; ++b)
      if ((mask >> b) & 1U) idx.push_back(static_cast<int>(b) + 1);
    subsets.push_back(std::move(idx));
  }
  std::stable_sort(subsets.begin(), subsets.end(), [](const auto& l, const auto& r) {
    if (l.size() != r.size()) return l.size() < r.size();
    return l < r;
  });
  std::vector<SignedProduct> out;
  out.reserve(subsets.size());
  for (const auto& idx : subsets) out.push_back(product_of(set, idx));
  return out;
}

struct TracelessReport {
  std::size_t checked = 0;  // non-identity products examined
  double max_trace = 0.0;
  cplx identity_trace{};
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

inline TracelessReport verify_traceless(const CliffordSet& set, double tol = 1e-12) {
  TracelessReport rep;
  for (const auto& p : all_generator_products(set)) {
    const cplx t = trace(p.matrix);
    if (p.indices.empty()) {
      rep.identity_trace = t;
      continue;
    }
    ++rep.checked;
    rep.max_trace = std::max(rep.max_trace, std::abs(t));
    if (std::abs(t) > tol) rep.violations.push_back(p.label());
  }
  return rep;
}

// Anti-Hermitian, unitary and pairwise anticommuting, both in floating point
// and through the exact Gaussian-integer product.
inline Report verify_generators(const CliffordSet& set, double tol = 1e-12) {
  Report rep;
  const auto& g = set.generators;
  const auto id = ComplexMatrix::identity(set.n);
  double anti_herm = 0.0;
  double unitary = 0.0;
  double anticomm = 0.0;
  std::string herm_w;
  std::string unit_w;
  std::string comm_w;
  bool exact_ok = true;
  std::string exact_w;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double h = max_abs(g[i].adjoint() + g[i]);
    if (h > anti_herm) {
      anti_herm = h;
      herm_w = "F" + std::to_string(i + 1);
    }
    const double u = max_abs_diff(g[i].adjoint() * g[i], id);
    if (u > unitary) {
      unitary = u;
      unit_w = "F" + std::to_string(i + 1);
    }
    for (std::size_t k = i + 1; k < g.size(); ++k) {
      const double c = max_abs(g[i] * g[k] + g[k] * g[i]);
      if (c > anticomm) {
        anticomm = c;
        comm_w = "F" + std::to_string(i + 1) + ",F" + std::to_string(k + 1);
      }
      if (is_gaussian_integer(g[i]) && is_gaussian_integer(g[k])) {
        const auto gi = to_gaussian(g[i]);
        const auto gk = to_gaussian(g[k]);
        const auto ab = exact_product(gi, gk);
        const auto ba = exact_product(gk, gi);
        for (std::size_t e = 0; e < ab.entries().size(); ++e) {
          const auto s = ab.entries()[e] + ba.entries()[e];
          if (s.re != 0 || s.im != 0) {
            exact_ok = false;
            exact_w = "F" + std::to_string(i + 1) + ",F" + std::to_string(k + 1);
          }
        }
      } else {
        exact_ok = false;
        exact_w = "non-integer entries";
      }
    }
  }
  auto fmt = [](double v) { return detail::format_real(v); };
  rep.add("anti-Hermitian", anti_herm < tol,
          anti_herm < tol ? "" : herm_w + " residual " + fmt(anti_herm));
  rep.add("unitary", unitary < tol, unitary < tol ? "" : unit_w + " residual " + fmt(unitary));
  rep.add("pairwise anticommute", anticomm < tol,
          anticomm < tol ? "" : comm_w + " residual " + fmt(anticomm));
  rep.add("pairwise anticommute (exact)", exact_ok, exact_w);
  return rep;
}

inline double max_generator_residual(const CliffordSet& set) {
  const auto& g = set.generators;
  const auto id = ComplexMatrix::identity(set.n);
  double r = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    r = std::max(r, max_abs(g[i].adjoint() + g[i]));
    r = std::max(r, max_abs_diff(g[i].adjoint() * g[i], id));
    for (std::size_t k = i + 1; k < g.size(); ++k)
      r = std::max(r, max_abs(g[i] * g[k] + g[k] * g[i]));
  }
  return r;
}

// B == c * A for some c in {1, j, -1, -j}; returns the power of j or -1.
inline int unit_multiple(const ComplexMatrix& b, const ComplexMatrix& a, double tol = 1e-12) {
  for (int p = 0; p < 4; ++p) {
    if (max_abs_diff(b, j_power_value(p) * a) < tol) return p;
  }
  return -1;
}

}  // namespace stbc
