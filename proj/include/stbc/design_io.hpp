#pragma once

// Plain-text design files.
//
//   n_t 4
//   T 4
//   layers 1
//   groups_per_layer 4
//   clifford_order 2
//   sign 1
//   layer_scalar 1+0i
//   multipliers I
//   provenance free text to end of line
//   group 0 1          (one line per group, 0-based weight indices)
//   weight 1 I         (1-based index, label; n_t matrix rows follow)
//   1+0i 0+0i ...
//
// Lines starting with '#' are comments. Numbers use shortest round-trip
// formatting, so write -> read reproduces every weight bit for bit.

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "stbc/complex_linalg.hpp"
#include "stbc/designs.hpp"
#include "stbc/errors.hpp"

namespace stbc {

inline void write_design(std::ostream& os, const STBCDesign& d) {
  os << "# stbc design\n";
  os << "n_t " << d.n_t << '\n';
  os << "T " << d.T << '\n';
  os << "layers " << d.layers << '\n';
  os << "groups_per_layer " << d.groups_per_layer << '\n';
  os << "clifford_order " << d.clifford_order << '\n';
  os << "sign " << d.sign_choice << '\n';
  os << "layer_scalar " << format_complex(d.layer_scalar) << '\n';
  if (!d.layer_multipliers.empty()) {
    os << "multipliers";
    for (const auto& m : d.layer_multipliers) os << ' ' << m;
    os << '\n';
  }
  if (!d.provenance.empty()) os << "provenance " << d.provenance << '\n';
  for (const auto& g : d.layout.groups) {
    os << "group";
    for (std::size_t i : g) os << ' ' << i;
    os << '\n';
  }
  for (std::size_t i = 0; i < d.weights.size(); ++i) {
    os << "weight " << (i + 1);
    if (!d.labels.empty()) os << ' ' << d.labels[i];
    os << '\n';
    write_matrix(os, d.weights[i]);
  }
}

inline std::string design_to_string(const STBCDesign& d) {
  std::ostringstream os;
  write_design(os, d);
  return os.str();
}

inline STBCDesign read_design(std::istream& is) {
  STBCDesign d;
  d.layers = 0;
  d.groups_per_layer = 0;
  bool have_nt = false;
  bool have_t = false;
  bool any_label = false;
  std::vector<std::string> labels;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(Errc::ParseError, "design line " + std::to_string(line_no) + ": " + msg);
  };
  auto to_size = [&](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      fail("expected a non-negative integer, got '" + s + "'");
    }
    if (pos != s.size()) fail("expected a non-negative integer, got '" + s + "'");
    return static_cast<std::size_t>(v);
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    std::string value;
    if (key == "n_t") {
      ls >> value;
      d.n_t = to_size(value);
      have_nt = true;
    } else if (key == "T") {
      ls >> value;
      d.T = to_size(value);
      have_t = true;
    } else if (key == "layers") {
      ls >> value;
      d.layers = to_size(value);
    } else if (key == "groups_per_layer") {
      ls >> value;
      d.groups_per_layer = to_size(value);
    } else if (key == "clifford_order") {
      ls >> value;
      d.clifford_order = static_cast<int>(to_size(value));
    } else if (key == "sign") {
      ls >> value;
      if (value != "1" && value != "-1") fail("sign must be 1 or -1");
      d.sign_choice = value == "1" ? 1 : -1;
    } else if (key == "layer_scalar") {
      ls >> value;
      try {
        d.layer_scalar = parse_complex(value);
      } catch (const Error&) {
        fail("bad layer_scalar");
      }
    } else if (key == "multipliers") {
      d.layer_multipliers.clear();
      while (ls >> value) d.layer_multipliers.push_back(value);
    } else if (key == "provenance") {
      const auto pos = line.find("provenance") + 10;
      d.provenance = pos < line.size() ? line.substr(pos + 1) : "";
    } else if (key == "group") {
      std::vector<std::size_t> g;
      while (ls >> value) g.push_back(to_size(value));
      if (g.empty()) fail("empty group");
      d.layout.groups.push_back(std::move(g));
    } else if (key == "weight") {
      if (!have_nt || !have_t) fail("weight before n_t and T");
      ls >> value;
      if (to_size(value) != d.weights.size() + 1) fail("weights must be numbered 1, 2, ...");
      std::string label;
      if (ls >> label) any_label = true;
      labels.push_back(label);
      try {
        auto m = read_matrix(is, d.n_t);
        line_no += d.n_t;
        if (m.cols() != d.T) fail("weight has " + std::to_string(m.cols()) + " columns");
        d.weights.push_back(std::move(m));
      } catch (const Error& e) {
        if (e.code() != Errc::ParseError) throw;
        fail(e.what());
      }
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (!have_nt || !have_t) throw Error(Errc::ParseError, "design is missing n_t or T");
  if (d.layers == 0) d.layers = 1;
  if (d.groups_per_layer == 0) d.groups_per_layer = d.layout.group_count() / d.layers;
  if (any_label) d.labels = std::move(labels);
  validate(d);
  return d;
}

inline STBCDesign parse_design(const std::string& text) {
  std::istringstream is(text);
  return read_design(is);
}

inline STBCDesign load_design(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open design file " + path);
  return read_design(in);
}

inline void save_design(const std::string& path, const STBCDesign& d) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write design file " + path);
  write_design(out, d);
  if (!out) throw Error(Errc::IoError, "write failed for " + path);
}

}  // namespace stbc
