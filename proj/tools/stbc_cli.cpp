// Command-line front end: build and certify designs, profile channels,
// decode, estimate capacity and coding gain, and run error-rate sweeps.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "stbc/stbc.hpp"

namespace {

using namespace stbc;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("STBC_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) return v;
    std::cerr << "warning: ignoring non-numeric STBC_SEED\n";
  }
  return 1;
}

STBCDesign open_design(const std::string& name) {
  if (name == "siso") return uncoded_siso_design();
  return load_design(name);
}

// Writes to `path`, or stdout when path is empty or "-".
void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(Errc::IoError, "write failed for " + path);
}

struct DesignBuildArgs {
  int a = 1;
  std::size_t layers = 1;
  std::string layer_scalar = "1";
  int sign = 1;
  std::string out;
};

struct ProfileArgs {
  std::string design;
  std::size_t n_r = 2;
  std::size_t seeds = 10;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::string out;
};

struct DecodeArgs {
  std::string design;
  std::string constellation = "4qam";
  double snr_db = 10.0;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::size_t n_r = 0;
  std::string decoder = "auto";
  std::string out;
};

struct CapacityArgs {
  std::string design;
  std::size_t n_r = 2;
  std::string snr = "0:30:5";
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string out;
};

struct GainArgs {
  std::string design;
  std::string alphabet = "4qam";
  std::string rotation = "builtin";
  std::size_t budget = kDefaultDetBudget;
  std::size_t group = 0;
};

int cmd_design_build(const DesignBuildArgs& args) {
  const STBCDesign d = build_design(args.a, args.layers, parse_layer_scalar(args.layer_scalar), args.sign);
  write_output(args.out, design_to_string(d));
  return 0;
}

int cmd_design_verify(const std::string& path) {
  const Report rep = verify_design(load_design(path));
  std::cout << rep.to_text();
  return rep.passed() ? 0 : 1;
}

int cmd_design_dump(const std::string& path) {
  const STBCDesign d = load_design(path);
  std::cout << "n_t " << d.n_t << "  T " << d.T << "  weights " << d.weights.size()
            << "  layers " << d.layers << "  rate " << detail::format_real(d.rate()) << '\n';
  if (!d.provenance.empty()) std::cout << "provenance: " << d.provenance << '\n';
  for (std::size_t g = 0; g < d.layout.group_count(); ++g) {
    std::cout << "group " << g + 1 << ':';
    for (std::size_t i : d.layout.groups[g]) {
      std::cout << ' ' << (d.labels.empty() ? "A" + std::to_string(i + 1) : d.labels[i]);
    }
    std::cout << '\n';
  }
  for (std::size_t i = 0; i < d.weights.size(); ++i) {
    std::cout << "\nA" << i + 1 << (d.labels.empty() ? "" : " = " + d.labels[i]) << '\n';
    write_matrix(std::cout, d.weights[i]);
  }
  return 0;
}

int cmd_clifford_dump(int a, int sign) {
  const CliffordSet set = build_generators(a, sign);
  for (std::size_t i = 0; i < set.generators.size(); ++i) {
    std::cout << "F" << i + 1 << '\n';
    write_matrix(std::cout, set.generators[i]);
    std::cout << '\n';
  }
  std::cout << verify_generators(set).to_text();
  return 0;
}

int cmd_channel_profile(const ProfileArgs& args) {
  const STBCDesign d = open_design(args.design);
  std::size_t n = d.weights.size();
  std::vector<double> sum(n * n, 0.0);
  std::vector<double> peak(n * n, 0.0);
  std::vector<std::uint8_t> always_zero(n * n, 1);
  std::size_t kron_ok = 0;
  for (std::uint32_t s = 0; s < args.seeds; ++s) {
    const auto ch = sample_channel(d.n_t, args.n_r, args.seed, 0, s);
    const RProfile p = r_profile(equivalent_channel(ch.H, d), d, args.tol);
    kron_ok += p.all_kron_form();
    for (std::size_t k = 0; k < n * n; ++k) {
      const double v = std::abs(p.R.entries()[k]);
      sum[k] += v;
      peak[k] = std::max(peak[k], v);
      always_zero[k] = always_zero[k] && p.zero_mask[k];
    }
  }
  std::cout << "zero mask over " << args.seeds << " channels ('.' zero in every channel)\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) std::cout << (j < i ? ' ' : (always_zero[i * n + j] ? '.' : '#'));
    std::cout << '\n';
  }
  std::cout << "diagonal blocks of form I_4 (x) V in " << kron_ok << " of " << args.seeds
            << " channels\n";
  std::ostringstream csv;
  csv << "i,j,mean_abs,max_abs\n";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      csv << i + 1 << ',' << j + 1 << ','
          << detail::format_real(sum[i * n + j] / static_cast<double>(args.seeds)) << ','
          << detail::format_real(peak[i * n + j]) << '\n';
    }
  if (!args.out.empty()) write_output(args.out, csv.str());
  return 0;
}

int cmd_decode(const DecodeArgs& args) {
  const STBCDesign d = open_design(args.design);
  const Constellation cons = Constellation::parse(args.constellation);
  const LinkModel link = make_link(d, cons, db_to_linear(args.snr_db));
  const DecoderKind kind = resolve_decoder(parse_decoder(args.decoder), link);
  const std::size_t n_r = args.n_r ? args.n_r : std::max<std::size_t>(d.layers, 1);
  std::ostringstream csv;
  csv << "trial,metric,symbol_errors,evaluations\n";
  for (std::uint32_t t = 0; t < args.trials; ++t) {
    RandomStream sym(args.seed, StreamTag::Symbols, 0, t);
    std::vector<std::size_t> idx(d.weights.size());
    for (auto& v : idx) v = static_cast<std::size_t>(sym.below(cons.pam_size()));
    const auto ch = sample_channel(d.n_t, n_r, args.seed, 0, t);
    RandomStream noise(args.seed, StreamTag::Noise, 0, t);
    ComplexMatrix Y = std::sqrt(link.snr / static_cast<double>(d.n_t)) * (ch.H * transmitted(link, idx));
    Y += complex_normal_matrix(n_r, d.T, noise);
    const DecodeResult r = run_decoder(kind, Y, ch.H, link, false);
    std::size_t errors = 0;
    for (std::size_t c = 0; c + 1 < idx.size(); c += 2) {
      errors += r.pam_indices[c] != idx[c] || r.pam_indices[c + 1] != idx[c + 1];
    }
    csv << t << ',' << detail::format_real(r.metric) << ',' << errors << ','
        << r.metric_evaluations << '\n';
  }
  write_output(args.out, csv.str());
  return 0;
}

int cmd_capacity_sweep(const CapacityArgs& args) {
  const STBCDesign d = open_design(args.design);
  const auto rows = capacity_sweep(d, args.n_r, parse_snr_range(args.snr), args.trials, args.seed,
                                   args.workers);
  std::ostringstream csv;
  write_capacity_csv(csv, rows);
  write_output(args.out, csv.str());
  return 0;
}

int cmd_gain(const GainArgs& args) {
  const STBCDesign d = open_design(args.design);
  const RotationSpec rot = args.rotation == "builtin" ? builtin_rotation(d.n_t / 2)
                                                      : load_rotation(args.rotation);
  const Encoder enc = make_encoder(d, rot);
  const MinDetResult r = min_determinant(enc, difference_alphabet(args.alphabet), args.budget,
                                         args.group);
  std::cout << "rotation " << rot.source << " (dim " << rot.dim << ")\n";
  std::cout << "evaluations " << r.evaluations << '\n';
  std::cout << "min_det " << detail::format_real(r.min_det) << '\n';
  std::cout << "min_det_closed_form " << detail::format_real(r.min_det_closed) << '\n';
  std::cout << "argmin";
  for (double v : r.argmin) std::cout << ' ' << detail::format_real(v);
  std::cout << "\nmax_relative_discrepancy " << detail::format_real(r.max_rel_discrepancy) << '\n';
  std::cout << (r.agree ? "closed form agrees" : "closed form DISAGREES") << '\n';
  return r.agree ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time block code construction and evaluation toolkit"};
  app.require_subcommand(1);
  const std::uint64_t seed0 = default_seed();

  auto* design = app.add_subcommand("design", "Build, verify or print a design");
  design->require_subcommand(1);
  DesignBuildArgs build_args;
  auto* build = design->add_subcommand("build", "Construct a design and write it as text");
  build->add_option("--a", build_args.a, "n_t = 2^a")->required()->check(CLI::Range(1, 5));
  build->add_option("--layers", build_args.layers, "Number of layers (rate)")->default_val(1);
  build->add_option("--layer-scalar", build_args.layer_scalar,
                    "Scalar for layers 2.. : 1, pi/4 or a+bi")->default_val("1");
  build->add_option("--sign", build_args.sign, "Sign of F_1")->default_val(1)->check(CLI::IsMember({1, -1}));
  build->add_option("--out", build_args.out, "Output file (stdout if omitted)");
  std::string verify_path;
  auto* verify = design->add_subcommand("verify", "Certify a design file");
  verify->add_option("--design", verify_path, "Design file")->required();
  std::string dump_path;
  auto* dump = design->add_subcommand("dump", "Print a design file in readable form");
  dump->add_option("--design", dump_path, "Design file")->required();

  auto* clifford = app.add_subcommand("clifford", "Generator matrices");
  clifford->require_subcommand(1);
  int cl_a = 1;
  int cl_sign = 1;
  auto* cl_dump = clifford->add_subcommand("dump", "Print F_1..F_2a and their checks");
  cl_dump->add_option("--a", cl_a, "n = 2^a")->required()->check(CLI::Range(1, 5));
  cl_dump->add_option("--sign", cl_sign)->default_val(1)->check(CLI::IsMember({1, -1}));

  auto* channel = app.add_subcommand("channel", "Channel tools");
  channel->require_subcommand(1);
  ProfileArgs prof{};
  prof.seed = seed0;
  auto* profile = channel->add_subcommand("profile", "Zero pattern of R over random channels");
  profile->add_option("--design", prof.design, "Design file or 'siso'")->required();
  profile->add_option("--nr", prof.n_r, "Receive antennas")->default_val(2);
  profile->add_option("--seeds", prof.seeds, "Number of channel draws")->default_val(10);
  profile->add_option("--tol", prof.tol, "Zero tolerance on unit-norm columns")->default_val(1e-9);
  profile->add_option("--seed", prof.seed, "Master seed (default STBC_SEED or 1)");
  profile->add_option("--out", prof.out, "CSV of |R(i,j)| statistics");

  DecodeArgs dec{};
  dec.seed = seed0;
  auto* decode = app.add_subcommand("decode", "Decode random transmissions, one CSV row per trial");
  decode->add_option("--design", dec.design, "Design file or 'siso'")->required();
  decode->add_option("--constellation", dec.constellation)->default_val("4qam");
  decode->add_option("--snr-db", dec.snr_db)->default_val(10.0);
  decode->add_option("--trials", dec.trials)->default_val(100);
  decode->add_option("--seed", dec.seed, "Master seed (default STBC_SEED or 1)");
  decode->add_option("--nr", dec.n_r, "Receive antennas (default: number of layers)");
  decode->add_option("--decoder", dec.decoder, "auto|oracle|group|conditional")->default_val("auto");
  decode->add_option("--out", dec.out, "CSV output (stdout if omitted)");

  auto* capacity = app.add_subcommand("capacity", "Ergodic capacity");
  capacity->require_subcommand(1);
  CapacityArgs cap{};
  cap.seed = seed0;
  auto* sweep = capacity->add_subcommand("sweep", "Monte-Carlo capacity over an SNR range");
  sweep->add_option("--design", cap.design, "Design file or 'siso'")->required();
  sweep->add_option("--nr", cap.n_r)->default_val(2);
  sweep->add_option("--snr-db", cap.snr, "A:B:STEP or a single value")->default_val("0:30:5");
  sweep->add_option("--trials", cap.trials)->default_val(1000);
  sweep->add_option("--seed", cap.seed, "Master seed (default STBC_SEED or 1)");
  sweep->add_option("--workers", cap.workers)->default_val(1);
  sweep->add_option("--out", cap.out, "CSV output (stdout if omitted)");

  auto* gain = app.add_subcommand("gain", "Coding gain");
  gain->require_subcommand(1);
  GainArgs ga{};
  auto* mindet = gain->add_subcommand("min-det", "Minimum determinant by enumeration");
  mindet->add_option("--design", ga.design, "Rate-1 design file")->required();
  mindet->add_option("--alphabet", ga.alphabet, "2pam|4qam|4pam|16qam|8pam|64qam")->default_val("4qam");
  mindet->add_option("--rotation", ga.rotation, "builtin or a matrix file")->default_val("builtin");
  mindet->add_option("--budget", ga.budget)->default_val(kDefaultDetBudget);
  mindet->add_option("--group", ga.group, "Group index (0-based)")->default_val(0);

  auto* sim = app.add_subcommand("sim", "Error-rate simulation");
  sim->require_subcommand(1);
  auto* sim_sweep = sim->add_subcommand("sweep", "SER/CER sweep; flags override --config");
  std::string config_path;
  std::map<std::string, std::string> overrides;
  sim_sweep->add_option("--config", config_path, "key=value config file");
  const std::vector<std::pair<std::string, std::string>> sim_flags = {
      {"--design", "design"}, {"--a", "a"}, {"--layers", "layers"},
      {"--layer-scalar", "layer_scalar"}, {"--nr", "nr"}, {"--constellation", "constellation"},
      {"--snr-db", "snr_db"}, {"--trials", "trials"}, {"--seed", "seed"},
      {"--decoder", "decoder"}, {"--out", "out"}, {"--workers", "workers"}};
  std::vector<std::pair<CLI::Option*, std::string>> sim_opts;
  auto holder = std::make_shared<std::map<std::string, std::string>>();
  for (const auto& [flag, key] : sim_flags) {
    auto* opt = sim_sweep->add_option(flag, (*holder)[key]);
    sim_opts.emplace_back(opt, key);
  }
  bool timing = false;
  bool noiseless = false;
  bool prune = false;
  auto* timing_flag = sim_sweep->add_flag("--timing", timing, "Record wall-clock time per point");
  auto* noiseless_flag = sim_sweep->add_flag("--noiseless", noiseless, "Transmit without noise");
  auto* prune_flag = sim_sweep->add_flag("--prune", prune, "Prune the conditional search");

  int va = 1;
  std::size_t vl = 1;
  std::uint64_t vseed = seed0;
  auto* verify_all_cmd = app.add_subcommand("verify-all", "Run every certification");
  verify_all_cmd->add_option("--a", va)->required()->check(CLI::Range(1, 5));
  verify_all_cmd->add_option("--layers", vl)->default_val(1);
  verify_all_cmd->add_option("--seed", vseed, "Master seed (default STBC_SEED or 1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_design_build(build_args);
    if (verify->parsed()) return cmd_design_verify(verify_path);
    if (dump->parsed()) return cmd_design_dump(dump_path);
    if (cl_dump->parsed()) return cmd_clifford_dump(cl_a, cl_sign);
    if (profile->parsed()) return cmd_channel_profile(prof);
    if (decode->parsed()) return cmd_decode(dec);
    if (sweep->parsed()) return cmd_capacity_sweep(cap);
    if (mindet->parsed()) return cmd_gain(ga);
    if (sim_sweep->parsed()) {
      SimConfig cfg;
      cfg.seed = seed0;
      if (!config_path.empty()) cfg = load_config(config_path, cfg);
      for (const auto& [opt, key] : sim_opts) {
        if (opt->count() > 0) apply_setting(cfg, key, (*holder)[key]);
      }
      if (timing_flag->count() > 0) cfg.timing = timing;
      if (noiseless_flag->count() > 0) cfg.noiseless = noiseless;
      if (prune_flag->count() > 0) cfg.prune = prune;
      const auto rows = run_error_sweep(cfg);
      std::ostringstream csv;
      write_sim_csv(csv, rows);
      write_output(cfg.out, csv.str());
      return 0;
    }
    if (verify_all_cmd->parsed()) {
      const Report rep = verify_all(va, vl, vseed);
      std::cout << rep.to_text();
      return rep.passed() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
