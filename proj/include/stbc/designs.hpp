#pragma once

// Linear-dispersion designs S = sum_i s_i A_i: the rate-1 4-group decodable
// construction for n_t = 2^a, its certification, and the layered full-rate
// extension (each extra layer is the rate-1 weight set left-multiplied by a
// unitary from a fresh coset of the generator products, then by j).

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stbc/clifford.hpp"
#include "stbc/complex_linalg.hpp"
#include "stbc/errors.hpp"
#include "stbc/report.hpp"

namespace stbc {

struct GroupLayout {
  std::vector<std::vector<std::size_t>> groups;

  std::size_t group_count() const { return groups.size(); }

  // Every index in [0, count) appears in exactly one group.
  bool is_partition(std::size_t count) const {
    std::vector<int> seen(count, 0);
    for (const auto& g : groups)
      for (std::size_t i : g) {
        if (i >= count || seen[i]++) return false;
      }
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
  }
};

struct STBCDesign {
  std::size_t n_t = 0;
  std::size_t T = 0;
  std::vector<ComplexMatrix> weights;
  std::vector<std::string> labels;  // symbolic name per weight, may be empty
  GroupLayout layout;
  std::size_t layers = 1;            // weights are stored layer-major
  std::size_t groups_per_layer = 4;
  int clifford_order = 0;            // a for Clifford constructions, 0 otherwise
  int sign_choice = 1;
  cplx layer_scalar{1.0, 0.0};       // applied to every layer after the first
  std::vector<std::string> layer_multipliers;
  std::string provenance;

  std::size_t real_symbols() const { return weights.size(); }
  std::size_t complex_symbols() const { return weights.size() / 2; }
  std::size_t layer_size() const { return weights.size() / layers; }
  double rate() const { return static_cast<double>(complex_symbols()) / static_cast<double>(T); }
  std::size_t group_size() const {
    return layout.groups.empty() ? 0 : layout.groups.front().size();
  }
};

inline void validate(const STBCDesign& d) {
  if (d.n_t == 0 || d.T == 0) throw Error(Errc::InvalidArgument, "empty design dimensions");
  if (d.weights.empty() || d.weights.size() % 2 != 0) {
    throw Error(Errc::InvalidArgument, "design needs an even, non-zero number of weights");
  }
  for (const auto& w : d.weights) {
    if (w.rows() != d.n_t || w.cols() != d.T) {
      throw Error(Errc::DimensionMismatch, "weight matrix is not n_t x T");
    }
  }
  if (!d.labels.empty() && d.labels.size() != d.weights.size()) {
    throw Error(Errc::DimensionMismatch, "label count differs from weight count");
  }
  if (d.layers == 0 || d.weights.size() % d.layers != 0) {
    throw Error(Errc::InvalidArgument, "weights do not split evenly into layers");
  }
  if (!d.layout.is_partition(d.weights.size())) {
    throw Error(Errc::InvalidArgument, "group layout is not a partition of the weights");
  }
  if (d.layout.group_count() != d.layers * d.groups_per_layer) {
    throw Error(Errc::InvalidArgument, "group count differs from layers * groups_per_layer");
  }
}

// Parses labels such as "I", "-F2F3", "jF1F4F5", "-jF1F2" into the canonical
// (indices, power of j) pair.
inline std::pair<std::vector<int>, int> parse_product_label(std::string_view s) {
  int jp = 0;
  if (s.starts_with("-j")) {
    jp = 3;
    s.remove_prefix(2);
  } else if (s.starts_with("-")) {
    jp = 2;
    s.remove_prefix(1);
  } else if (s.starts_with("j")) {
    jp = 1;
    s.remove_prefix(1);
  }
  std::vector<int> idx;
  if (s == "I") return {idx, jp};
  while (!s.empty()) {
    if (s.front() != 'F') throw Error(Errc::ParseError, "bad product label");
    s.remove_prefix(1);
    std::size_t k = 0;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
    if (k == 0) throw Error(Errc::ParseError, "bad product label");
    idx.push_back(std::stoi(std::string(s.substr(0, k))));
    s.remove_prefix(k);
  }
  return {idx, jp};
}

inline RealMatrix generator_matrix(const STBCDesign& d) {
  if (d.weights.empty()) throw Error(Errc::InvalidArgument, "design has no weights");
  const std::size_t rows = 2 * d.weights.front().rows() * d.weights.front().cols();
  RealMatrix g(rows, d.weights.size());
  for (std::size_t i = 0; i < d.weights.size(); ++i) g.set_column(i, tilde_vec(d.weights[i]));
  return g;
}

inline ComplexMatrix codeword(const STBCDesign& d, std::span<const double> s) {
  if (s.size() != d.weights.size()) {
    throw Error(Errc::DimensionMismatch, "symbol vector length " + std::to_string(s.size()) +
                                             " != " + std::to_string(d.weights.size()));
  }
  ComplexMatrix out(d.n_t, d.T);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 0.0) continue;
    out += s[i] * d.weights[i];
  }
  return out;
}

// Scale beta with E||beta*S||^2 = n_t*T for i.i.d. real symbols of variance 1/2
// (unit-energy complex symbols) and an orthogonal per-group rotation.
inline double energy_scale(const STBCDesign& d) {
  double total = 0.0;
  for (const auto& w : d.weights) {
    const double f = fro_norm(w);
    total += f * f;
  }
  return std::sqrt(static_cast<double>(d.n_t * d.T) / (0.5 * total));
}

inline STBCDesign normalized(const STBCDesign& d) {
  STBCDesign out = d;
  const double beta = energy_scale(d);
  for (auto& w : out.weights) w *= cplx(beta);
  return out;
}

inline double hurwitz_radon_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
  return max_abs(a * b.adjoint() + b * a.adjoint());
}

inline STBCDesign build_rate1_4group(int a, int sign = 1) {
  const CliffordSet set = build_generators(a, sign);
  std::vector<SignedProduct> s;
  for (int i = 2; i <= a - 1; ++i) s.push_back(product_of(set, {2 * i, 2 * i + 1}, 1));
  if (a >= 2) s.push_back(product_of(set, {1, 2, 3}));
  const auto first_group = power_set_products(set, s);
  const SignedProduct headers[4] = {identity_product(set), product_of(set, {1}),
                                    product_of(set, {2}), product_of(set, {3})};

  STBCDesign d;
  d.n_t = set.n;
  d.T = set.n;
  d.clifford_order = a;
  d.sign_choice = sign;
  d.layers = 1;
  d.groups_per_layer = 4;
  const std::size_t q = first_group.size();
  for (std::size_t m = 0; m < 4; ++m) {
    std::vector<std::size_t> group;
    for (std::size_t i = 0; i < q; ++i) {
      const SignedProduct w = multiply(first_group[i], headers[m]);
      group.push_back(d.weights.size());
      d.weights.push_back(w.matrix);
      d.labels.push_back(w.label());
    }
    d.layout.groups.push_back(std::move(group));
  }
  d.layer_multipliers = {"I"};
  d.provenance = "rate-1 4-group Clifford construction a=" + std::to_string(a) +
                 " sign=" + std::to_string(sign);
  return d;
}

// Checks on the first layer: the six conditions of the g-group sufficient
// construction (group-1 squares to I, headers square to -I, group 1 commutes
// internally and with headers, headers anticommute, rows generated by
// A_{mq+i} = A_i A_{mq}), then the cross-group Hurwitz-Radon condition in
// every layer, group-1 closure and real linear independence.
inline Report verify_theorem1(const STBCDesign& d, double tol = 1e-10) {
  Report rep;
  if (!d.layout.is_partition(d.weights.size())) {
    rep.add("layout partition", false, "groups do not partition the weights");
    return rep;
  }
  rep.add("layout partition", true);
  const std::size_t g = d.groups_per_layer;
  if (d.layout.group_count() < g || g < 2) {
    rep.add("group count", false, "fewer groups than groups_per_layer");
    return rep;
  }
  const auto& groups = d.layout.groups;
  const std::size_t q = groups[0].size();
  for (std::size_t m = 0; m < g; ++m) {
    if (groups[m].size() != q) {
      rep.add("equal group sizes", false, "group " + std::to_string(m));
      return rep;
    }
  }
  const auto& w = d.weights;
  const auto id = ComplexMatrix::identity(d.n_t);
  auto name = [&](std::size_t i) {
    std::string s = "A" + std::to_string(i + 1);
    if (!d.labels.empty()) s += "(" + d.labels[i] + ")";
    return s;
  };
  auto fmt = [](double v) { return detail::format_real(v); };

  {  // 1: group-1 members square to I
    std::string wit;
    for (std::size_t i : groups[0]) {
      const double r = max_abs_diff(w[i] * w[i], id);
      if (r > tol && wit.empty()) wit = name(i) + "^2 != I, residual " + fmt(r);
    }
    rep.add("cond1 group-1 squares to I", wit.empty(), wit);
  }
  {  // 2: headers square to -I
    std::string wit;
    for (std::size_t m = 1; m < g; ++m) {
      const std::size_t h = groups[m][0];
      const double r = max_abs_diff(w[h] * w[h], -id);
      if (r > tol && wit.empty()) wit = name(h) + "^2 != -I, residual " + fmt(r);
    }
    rep.add("cond2 headers square to -I", wit.empty(), wit);
  }
  {  // 3: group-1 pairwise commute
    std::string wit;
    for (std::size_t x : groups[0])
      for (std::size_t y : groups[0]) {
        if (x >= y) continue;
        const double r = max_abs_diff(w[x] * w[y], w[y] * w[x]);
        if (r > tol && wit.empty()) wit = name(x) + "," + name(y) + " residual " + fmt(r);
      }
    rep.add("cond3 group-1 commute", wit.empty(), wit);
  }
  {  // 4: group-1 commutes with headers
    std::string wit;
    for (std::size_t x : groups[0])
      for (std::size_t m = 1; m < g; ++m) {
        const std::size_t h = groups[m][0];
        const double r = max_abs_diff(w[x] * w[h], w[h] * w[x]);
        if (r > tol && wit.empty()) wit = name(x) + "," + name(h) + " residual " + fmt(r);
      }
    rep.add("cond4 group-1 commutes with headers", wit.empty(), wit);
  }
  {  // 5: headers pairwise anticommute
    std::string wit;
    for (std::size_t m = 1; m < g; ++m)
      for (std::size_t p = m + 1; p < g; ++p) {
        const std::size_t x = groups[m][0];
        const std::size_t y = groups[p][0];
        const double r = max_abs(w[x] * w[y] + w[y] * w[x]);
        if (r > tol && wit.empty()) wit = name(x) + "," + name(y) + " residual " + fmt(r);
      }
    rep.add("cond5 headers anticommute", wit.empty(), wit);
  }
  {  // 6: row rule
    std::string wit;
    for (std::size_t m = 1; m < g; ++m)
      for (std::size_t i = 1; i < q; ++i) {
        const std::size_t target = groups[m][i];
        const double r = max_abs_diff(w[target], w[groups[0][i]] * w[groups[m][0]]);
        if (r > tol && wit.empty()) {
          wit = name(target) + " != " + name(groups[0][i]) + "*" + name(groups[m][0]);
        }
      }
    rep.add("cond6 row rule", wit.empty(), wit);
  }
  {  // cross-group Hurwitz-Radon, every layer
    std::string wit;
    for (std::size_t layer = 0; layer < d.layers && wit.empty(); ++layer) {
      for (std::size_t m = 0; m < g && wit.empty(); ++m)
        for (std::size_t p = m + 1; p < g && wit.empty(); ++p)
          for (std::size_t x : groups[layer * g + m])
            for (std::size_t y : groups[layer * g + p]) {
              const double r = hurwitz_radon_residual(w[x], w[y]);
              if (r > tol && wit.empty()) {
                wit = name(x) + "," + name(y) + " residual " + fmt(r);
              }
            }
    }
    rep.add("cross-group Hurwitz-Radon", wit.empty(), wit);
  }
  {  // group-1 closure up to sign
    std::string wit;
    for (std::size_t x : groups[0])
      for (std::size_t y : groups[0]) {
        const ComplexMatrix p = w[x] * w[y];
        bool found = false;
        for (std::size_t z : groups[0]) {
          if (max_abs_diff(p, w[z]) < tol || max_abs_diff(p, -w[z]) < tol) {
            found = true;
            break;
          }
        }
        if (!found && wit.empty()) wit = name(x) + "*" + name(y) + " outside group 1";
      }
    rep.add("group-1 closure", wit.empty(), wit);
  }
  {
    const std::size_t rank = column_rank(generator_matrix(d));
    rep.add("real linear independence", rank == d.weights.size(),
            rank == d.weights.size()
                ? ""
                : "rank " + std::to_string(rank) + " < " + std::to_string(d.weights.size()));
  }
  return rep;
}

// Adds layers 2..n_layers. Multipliers come from new cosets of the rate-1
// weight set inside the generator products (ordered by size then indices);
// once those are used up, the same representatives times j follow.
inline STBCDesign extend_full_rate(const STBCDesign& base, std::size_t n_layers,
                                   const CliffordSet& set, cplx layer_scalar = 1.0) {
  if (base.layers != 1) throw Error(Errc::InvalidArgument, "base must be a rate-1 design");
  if (base.n_t != set.n) throw Error(Errc::DimensionMismatch, "Clifford set size != n_t");
  if (n_layers < 1 || n_layers > base.n_t) {
    throw Error(Errc::InvalidArgument, "layer count must be in [1, n_t]");
  }
  if (std::abs(std::abs(layer_scalar) - 1.0) > 1e-12) {
    throw Error(Errc::InvalidArgument, "layer scalar must have unit modulus");
  }

  std::vector<SignedProduct> reps{identity_product(set)};
  const std::size_t coset_count = base.n_t / 2;
  for (const auto& cand : all_generator_products(set)) {
    if (reps.size() >= coset_count) break;
    if (cand.indices.empty()) continue;
    bool known = false;
    for (const auto& r : reps) {
      const ComplexMatrix rel = r.matrix.adjoint() * cand.matrix;
      for (const auto& w : base.weights) {
        if (unit_multiple(rel, w) >= 0) {
          known = true;
          break;
        }
      }
      if (known) break;
    }
    if (!known) reps.push_back(cand);
  }
  std::vector<SignedProduct> multipliers = reps;
  for (const auto& r : reps) {
    SignedProduct jr = r;
    jr.j_power = (jr.j_power + 1) % 4;
    jr.matrix *= kJ;
    multipliers.push_back(std::move(jr));
  }
  if (multipliers.size() < n_layers) {
    throw Error(Errc::DependentExtension, "not enough independent multipliers");
  }

  STBCDesign out = base;
  out.weights.clear();
  out.labels.clear();
  out.layout.groups.clear();
  out.layer_multipliers.clear();
  out.layers = n_layers;
  out.layer_scalar = layer_scalar;
  const bool scaled = std::abs(layer_scalar - cplx(1.0)) > 1e-15;
  for (std::size_t layer = 0; layer < n_layers; ++layer) {
    const auto& mult = multipliers[layer];
    const cplx c = layer == 0 ? cplx(1.0) : layer_scalar;
    const std::size_t offset = out.weights.size();
    for (std::size_t i = 0; i < base.weights.size(); ++i) {
      out.weights.push_back(c * (mult.matrix * base.weights[i]));
      std::string label;
      if (!base.labels.empty()) {
        const auto [bi, bj] = parse_product_label(base.labels[i]);
        const auto [idx, jp] = canonical_product(mult.indices, mult.j_power, bi, bj);
        label = SignedProduct{{}, idx, jp}.label();
      } else {
        label = mult.label() + "*A" + std::to_string(i + 1);
      }
      if (layer > 0 && scaled) label = "(" + format_complex(layer_scalar) + ")" + label;
      out.labels.push_back(label);
    }
    for (const auto& grp : base.layout.groups) {
      std::vector<std::size_t> shifted;
      for (std::size_t i : grp) shifted.push_back(i + offset);
      out.layout.groups.push_back(std::move(shifted));
    }
    out.layer_multipliers.push_back(mult.label());
  }
  out.provenance = base.provenance + "; extended to " + std::to_string(n_layers) + " layers";

  const std::size_t rank = column_rank(generator_matrix(out));
  if (rank != out.weights.size()) {
    throw Error(Errc::DependentExtension, "extended weights have real rank " +
                                              std::to_string(rank) + " < " +
                                              std::to_string(out.weights.size()));
  }
  return out;
}

inline STBCDesign build_design(int a, std::size_t layers, cplx layer_scalar = 1.0, int sign = 1) {
  STBCDesign base = build_rate1_4group(a, sign);
  if (layers == 1) return base;
  return extend_full_rate(base, layers, build_generators(a, sign), layer_scalar);
}

// Single-antenna reference: one complex symbol per channel use, no coding.
inline STBCDesign uncoded_siso_design() {
  STBCDesign d;
  d.n_t = 1;
  d.T = 1;
  d.weights = {ComplexMatrix{{1.0}}, ComplexMatrix{{kJ}}};
  d.labels = {"1", "j"};
  d.layout.groups = {{0}, {1}};
  d.layers = 1;
  d.groups_per_layer = 2;
  d.provenance = "uncoded SISO";
  return d;
}

}  // namespace stbc
