#pragma once

// Seeded error-rate sweeps, the combined verification suite, config files
// and CSV output.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "stbc/capacity.hpp"
#include "stbc/channel.hpp"
#include "stbc/clifford.hpp"
#include "stbc/coding_gain.hpp"
#include "stbc/decoder.hpp"
#include "stbc/design_io.hpp"
#include "stbc/designs.hpp"
#include "stbc/parallel.hpp"
#include "stbc/random.hpp"
#include "stbc/report.hpp"

namespace stbc {

inline constexpr std::uint64_t kMaxEvaluationsPerCodeword = 100'000'000;

enum class DecoderKind { Auto, Oracle, Group, Conditional };

inline DecoderKind parse_decoder(const std::string& s) {
  if (s == "auto") return DecoderKind::Auto;
  if (s == "oracle" || s == "ml") return DecoderKind::Oracle;
  if (s == "group") return DecoderKind::Group;
  if (s == "conditional") return DecoderKind::Conditional;
  throw Error(Errc::InvalidArgument, "unknown decoder '" + s + "'");
}

inline std::string decoder_name(DecoderKind k) {
  switch (k) {
    case DecoderKind::Auto: return "auto";
    case DecoderKind::Oracle: return "oracle";
    case DecoderKind::Group: return "group";
    case DecoderKind::Conditional: return "conditional";
  }
  return "auto";
}

// "1", "pi/4" (meaning e^{j pi/4}) or a complex literal such as "0.7+0.7i".
inline cplx parse_layer_scalar(const std::string& s) {
  if (s.starts_with("pi/")) {
    const double den = detail::parse_real(s.substr(3));
    if (den == 0.0) throw Error(Errc::ParseError, "layer scalar pi/0");
    return std::polar(1.0, std::numbers::pi / den);
  }
  return parse_complex(s);
}

struct SimConfig {
  std::string design = "builtin";  // "builtin", "siso" or a design file path
  int a = 1;
  std::size_t layers = 2;
  cplx layer_scalar{1.0, 0.0};
  std::size_t n_r = 2;
  std::string constellation = "4qam";
  std::vector<double> snr_db{0.0, 5.0, 10.0};
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  DecoderKind decoder = DecoderKind::Auto;
  std::string out;
  std::size_t workers = 1;
  bool timing = false;
  bool noiseless = false;
  bool prune = false;
};

inline std::vector<double> parse_snr_list(const std::string& s) {
  if (s.find(':') != std::string::npos) return parse_snr_range(s);
  std::vector<double> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) out.push_back(detail::parse_real(part));
  }
  if (out.empty()) throw Error(Errc::ParseError, "empty SNR list");
  return out;
}

inline bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error(Errc::ParseError, "bad boolean '" + v + "'");
}

// Applies one key=value setting; shared by config files and CLI overrides.
inline void apply_setting(SimConfig& cfg, const std::string& key, const std::string& value) {
  auto to_size = [&](const std::string& v) {
    std::size_t pos = 0;
    unsigned long long x = 0;
    try {
      x = std::stoull(v, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != v.size()) throw Error(Errc::ParseError, "bad integer for " + key);
    return static_cast<std::size_t>(x);
  };
  if (key == "design") cfg.design = value;
  else if (key == "a") cfg.a = static_cast<int>(to_size(value));
  else if (key == "layers") cfg.layers = to_size(value);
  else if (key == "layer_scalar") cfg.layer_scalar = parse_layer_scalar(value);
  else if (key == "nr" || key == "n_r") cfg.n_r = to_size(value);
  else if (key == "constellation") cfg.constellation = value;
  else if (key == "snr_db") cfg.snr_db = parse_snr_list(value);
  else if (key == "trials") cfg.trials = to_size(value);
  else if (key == "seed") cfg.seed = to_size(value);
  else if (key == "decoder") cfg.decoder = parse_decoder(value);
  else if (key == "out") cfg.out = value;
  else if (key == "workers") cfg.workers = to_size(value);
  else if (key == "timing") cfg.timing = parse_bool(value);
  else if (key == "noiseless") cfg.noiseless = parse_bool(value);
  else if (key == "prune") cfg.prune = parse_bool(value);
  else throw Error(Errc::ParseError, "unknown config key '" + key + "'");
}

// Flat "key = value" lines; '#' starts a comment.
inline std::map<std::string, std::string> read_config_pairs(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t n = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    ++n;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::ParseError, "config line " + std::to_string(n) + ": expected key=value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Settings from the file are layered over `cfg`.
inline SimConfig load_config(const std::string& path, SimConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open config " + path);
  for (const auto& [k, v] : read_config_pairs(in)) apply_setting(cfg, k, v);
  return cfg;
}

inline void check_config(const SimConfig& cfg) {
  if (cfg.trials < 1) throw Error(Errc::InvalidArgument, "trials must be >= 1");
  if (cfg.snr_db.empty()) throw Error(Errc::InvalidArgument, "SNR list is empty");
  if (cfg.n_r < 1) throw Error(Errc::InvalidArgument, "n_r must be >= 1");
}

inline STBCDesign design_from_config(const SimConfig& cfg) {
  if (cfg.design == "builtin") return build_design(cfg.a, cfg.layers, cfg.layer_scalar);
  if (cfg.design == "siso") return uncoded_siso_design();
  return load_design(cfg.design);
}

struct SimRecord {
  double snr_db = 0.0;
  std::size_t trials = 0;
  std::size_t codeword_errors = 0;
  std::size_t symbol_errors = 0;
  double ser = 0.0;  // symbol errors / (trials * symbols per codeword)
  double cer = 0.0;
  double mean_evals = 0.0;
  double wall_time_s = 0.0;  // 0 unless timing was requested
};

inline DecoderKind resolve_decoder(DecoderKind k, const LinkModel& link) {
  if (k != DecoderKind::Auto) return k;
  if (!link.group_decodable) return DecoderKind::Oracle;
  return link.design.layers == 1 ? DecoderKind::Group : DecoderKind::Conditional;
}

inline std::uint64_t predicted_evaluations(DecoderKind k, const LinkModel& link) {
  if (k == DecoderKind::Oracle) return oracle_evaluations(link.design, link.constellation);
  return complexity_account(link.design, link.constellation).evaluations;
}

inline DecodeResult run_decoder(DecoderKind k, const ComplexMatrix& Y, const ComplexMatrix& H,
                                const LinkModel& link, bool prune) {
  switch (k) {
    case DecoderKind::Oracle: return ml_oracle(Y, H, link);
    case DecoderKind::Group: return group_decode(Y, H, link);
    case DecoderKind::Conditional: return conditional_decode(Y, H, link, prune);
    case DecoderKind::Auto: break;
  }
  throw Error(Errc::InvalidArgument, "decoder not resolved");
}

struct TrialOutcome {
  std::size_t symbol_errors = 0;
  std::uint64_t evaluations = 0;
};

// One transmission: uniform symbols, Rayleigh H, CN(0,1) noise, decode.
inline TrialOutcome run_trial(const LinkModel& link, DecoderKind kind, std::size_t n_r,
                              std::uint64_t seed, std::uint32_t snr_index,
                              std::uint32_t trial_index, bool noiseless, bool prune) {
  const std::size_t n = link.design.weights.size();
  const std::size_t side = link.constellation.pam_size();
  RandomStream sym(seed, StreamTag::Symbols, snr_index, trial_index);
  std::vector<std::size_t> idx(n);
  for (auto& v : idx) v = static_cast<std::size_t>(sym.below(side));
  const auto ch = sample_channel(link.design.n_t, n_r, seed, snr_index, trial_index);
  ComplexMatrix Y = std::sqrt(link.snr / static_cast<double>(link.design.n_t)) *
                    (ch.H * transmitted(link, idx));
  if (!noiseless) {
    RandomStream noise(seed, StreamTag::Noise, snr_index, trial_index);
    Y += complex_normal_matrix(n_r, link.design.T, noise);
  }
  const DecodeResult r = run_decoder(kind, Y, ch.H, link, prune);
  TrialOutcome out;
  out.evaluations = r.metric_evaluations;
  for (std::size_t c = 0; c + 1 < n; c += 2) {
    out.symbol_errors += r.pam_indices[c] != idx[c] || r.pam_indices[c + 1] != idx[c + 1];
  }
  return out;
}

inline std::vector<SimRecord> run_error_sweep(const SimConfig& cfg, const STBCDesign& design) {
  check_config(cfg);
  const Constellation cons = Constellation::parse(cfg.constellation);
  std::vector<SimRecord> out;
  for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
    const auto start = std::chrono::steady_clock::now();
    const LinkModel link = make_link(design, cons, db_to_linear(cfg.snr_db[s]));
    const DecoderKind kind = resolve_decoder(cfg.decoder, link);
    const std::uint64_t predicted = predicted_evaluations(kind, link);
    if (predicted > kMaxEvaluationsPerCodeword) {
      throw Error(Errc::Intractable, decoder_name(kind) + " decoding needs " +
                                         std::to_string(predicted) +
                                         " metric evaluations per codeword");
    }
    std::vector<TrialOutcome> outcomes(cfg.trials);
    parallel_chunks(cfg.trials, cfg.workers, [&](std::size_t b, std::size_t e, std::size_t) {
      for (std::size_t t = b; t < e; ++t) {
        outcomes[t] = run_trial(link, kind, cfg.n_r, cfg.seed, static_cast<std::uint32_t>(s),
                                static_cast<std::uint32_t>(t), cfg.noiseless, cfg.prune);
      }
    });
    SimRecord rec;
    rec.snr_db = cfg.snr_db[s];
    rec.trials = cfg.trials;
    std::uint64_t evals = 0;
    for (const auto& o : outcomes) {
      rec.symbol_errors += o.symbol_errors;
      rec.codeword_errors += o.symbol_errors > 0;
      evals += o.evaluations;
    }
    const double trials = static_cast<double>(cfg.trials);
    rec.cer = static_cast<double>(rec.codeword_errors) / trials;
    rec.ser = static_cast<double>(rec.symbol_errors) / (trials * static_cast<double>(link.complex_symbols()));
    rec.mean_evals = static_cast<double>(evals) / trials;
    if (cfg.timing) {
      rec.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    out.push_back(rec);
  }
  return out;
}

inline std::vector<SimRecord> run_error_sweep(const SimConfig& cfg) {
  return run_error_sweep(cfg, design_from_config(cfg));
}

inline constexpr const char* kSimCsvHeader = "snr_db,trials,cer,ser,mean_evals,wall_time_s";

inline void write_sim_csv(std::ostream& os, const std::vector<SimRecord>& rows) {
  os << kSimCsvHeader << '\n';
  for (const auto& r : rows) {
    os << detail::format_real(r.snr_db) << ',' << r.trials << ',' << detail::format_real(r.cer)
       << ',' << detail::format_real(r.ser) << ',' << detail::format_real(r.mean_evals) << ','
       << detail::format_real(r.wall_time_s) << '\n';
  }
}

inline void emit_csv(const std::vector<SimRecord>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  write_sim_csv(out, rows);
  out.flush();
  if (!out) throw Error(Errc::IoError, "write failed for " + path);
}

// Reads the CSV back. Error counts are not stored and are reconstructed from
// cer * trials; symbol_errors stays 0.
inline std::vector<SimRecord> parse_sim_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kSimCsvHeader) {
    throw Error(Errc::ParseError, "missing or unexpected CSV header");
  }
  std::vector<SimRecord> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 6) throw Error(Errc::ParseError, "CSV row needs 6 fields: " + line);
    SimRecord r;
    r.snr_db = detail::parse_real(f[0]);
    r.trials = static_cast<std::size_t>(detail::parse_real(f[1]));
    r.cer = detail::parse_real(f[2]);
    r.ser = detail::parse_real(f[3]);
    r.mean_evals = detail::parse_real(f[4]);
    r.wall_time_s = detail::parse_real(f[5]);
    r.codeword_errors = static_cast<std::size_t>(std::llround(r.cer * static_cast<double>(r.trials)));
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Verification

// Construction checks that apply to any design file.
inline Report verify_design(const STBCDesign& d) {
  Report rep;
  try {
    validate(d);
    rep.add("design well-formed", true);
  } catch (const Error& e) {
    rep.add("design well-formed", false, e.what());
    return rep;
  }
  rep.merge(verify_theorem1(d));
  return rep;
}

// Runs every module's certification for (a, layers) and collects the result.
inline Report verify_all(int a, std::size_t layers, std::uint64_t seed = 1) {
  Report rep;
  const CliffordSet set = build_generators(a);
  rep.merge(verify_generators(set), "generators: ");
  const auto tr = verify_traceless(set);
  rep.add("generators: non-identity products traceless", tr.ok(),
          tr.ok() ? std::to_string(tr.checked) + " products" : tr.violations.front());

  const STBCDesign base = build_rate1_4group(a);
  STBCDesign d;
  try {
    d = build_design(a, layers);
  } catch (const Error& e) {
    rep.add("design: construction", false, e.what());
    return rep;
  }
  rep.merge(verify_theorem1(d), "design: ");

  const RealMatrix w = extract_W(base);
  const double wres = max_abs_diff(w.transpose() * w, RealMatrix::identity(w.rows()));
  rep.add("coding gain: W orthogonal", wres < 1e-12, "residual " + detail::format_real(wres));
  const Encoder enc = make_encoder(base);
  {
    RandomStream rng(seed, StreamTag::Test, 0, 0);
    double worst = 0.0;
    const std::size_t q = enc.group_size();
    std::vector<double> ds(q);
    for (int t = 0; t < 200; ++t) {
      for (auto& v : ds) v = static_cast<double>(static_cast<int>(rng.below(7)) - 3);
      const double lit = literal_group_det(base, 0, ds);
      const double cf = closed_form_det(w, ds);
      const double bound = std::pow(dot(ds, ds), static_cast<double>(base.n_t));
      worst = std::max(worst, std::abs(lit - cf) / std::max({std::abs(lit), std::abs(cf), 1e-4 * bound, 1e-300}));
    }
    rep.add("coding gain: closed-form determinant", worst <= 1e-9,
            "max relative gap " + detail::format_real(worst));
  }
  if (a <= 3) {
    const auto md = min_determinant(enc, difference_alphabet("4qam"));
    rep.add("coding gain: rotated minimum determinant positive", md.min_det > 1e-9 && md.agree,
            "min det " + detail::format_real(md.min_det));
  }

  {
    bool ok = true;
    std::string wit;
    const std::size_t n_r = std::max<std::size_t>(layers, 1);
    for (std::uint32_t t = 0; t < 20 && ok; ++t) {
      const auto ch = sample_channel(d.n_t, n_r, seed, 0, t);
      const auto prof = r_profile(equivalent_channel(ch.H, d), d);
      if (!prof.all_kron_form()) {
        ok = false;
        wit = "channel " + std::to_string(t) + " layer block not I_4 (x) V";
      }
    }
    rep.add("channel: R diagonal blocks are I_4 (x) V", ok, ok ? "20 channels" : wit);
  }

  {
    const Constellation cons = Constellation::qam(4);
    const LinkModel link = make_link(d, cons, db_to_linear(10.0));
    const DecoderKind kind = resolve_decoder(DecoderKind::Auto, link);
    const bool oracle_ok = oracle_evaluations(d, cons) <= kOracleBudget && link.complex_symbols() <= 8;
    const std::size_t trials = oracle_ok ? 100 : 3;
    bool same = true;
    bool counts = true;
    std::string wit;
    const auto predicted = complexity_account(d, cons).evaluations;
    for (std::uint32_t t = 0; t < trials; ++t) {
      const auto ch = sample_channel(d.n_t, layers, seed, 1, t);
      RandomStream sym(seed, StreamTag::Symbols, 1, t);
      std::vector<std::size_t> idx(d.weights.size());
      for (auto& v : idx) v = static_cast<std::size_t>(sym.below(cons.pam_size()));
      RandomStream noise(seed, StreamTag::Noise, 1, t);
      ComplexMatrix Y = std::sqrt(link.snr / static_cast<double>(d.n_t)) * (ch.H * transmitted(link, idx));
      Y += complex_normal_matrix(layers, d.T, noise);
      const DecodeResult fast = run_decoder(kind, Y, ch.H, link, false);
      counts = counts && fast.metric_evaluations == predicted;
      DecodeResult ref = oracle_ok ? ml_oracle(Y, ch.H, link) : run_decoder(kind, Y, ch.H, link, true);
      if (fast.pam_indices != ref.pam_indices || std::abs(fast.metric - ref.metric) > 1e-9) {
        same = false;
        wit = "trial " + std::to_string(t);
      }
    }
    rep.add(std::string("decoder: ") + decoder_name(kind) +
                (oracle_ok ? " matches exhaustive search" : " matches pruned search"),
            same, same ? std::to_string(trials) + " trials" : wit);
    rep.add("decoder: evaluation count matches prediction", counts,
            complexity_account(d, cons).formula + " = " + std::to_string(predicted));
  }
  return rep;
}

}  // namespace stbc
