// lcachar: command-line front end for generalized characters of
// R^m x Z^n x K, their Gel'fand transforms and the power-escape bound.
//
// Exit codes: 0 success, 1 usage / input / IO error, 2 certificate rejected
// by the grid oracle.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>
#include <unistd.h>

#include <CLI11.hpp>

#include "lcachar/io.hpp"
#include "lcachar/lcachar.hpp"

namespace {

using namespace lcachar;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRejected = 2;

/// Raised for bad arguments that CLI11 cannot catch by itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string out;
  std::uint64_t seed = 0;
  unsigned parallel = 1;
};

/// Writes to stdout, or atomically to `path` (temp file + rename) so a failed
/// run never leaves a partial file behind.
void emit(const CommonOptions& opts, const std::string& text) {
  if (opts.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(opts.out);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + opts.out);
    file << text;
    file.close();
    if (!file) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("cannot write " + opts.out);
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot write " + opts.out);
  }
}

struct SweepGrid {
  double re_min = -1.0, re_max = 1.0;
  int n_re = 3;
  double im_min = -1.0, im_max = 1.0;
  int n_im = 3;

  std::size_t size() const { return static_cast<std::size_t>(n_re) * static_cast<std::size_t>(n_im); }

  /// Row-major: real part outer, imaginary part inner.
  cplx at(std::size_t i) const {
    const auto a = static_cast<int>(i / static_cast<std::size_t>(n_im));
    const auto b = static_cast<int>(i % static_cast<std::size_t>(n_im));
    return {axis(re_min, re_max, n_re, a), axis(im_min, im_max, n_im, b)};
  }

  static double axis(double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + ": '" + s + "' is not a number");
  }
}

SweepGrid parse_sweep_grid(const std::string& spec) {
  const auto parts = split(spec, ',');
  if (parts.size() != 6) throw UsageError("--grid expects re_min,re_max,n_re,im_min,im_max,n_im");
  SweepGrid g;
  g.re_min = parse_double(parts[0], "--grid");
  g.re_max = parse_double(parts[1], "--grid");
  g.n_re = static_cast<int>(parse_double(parts[2], "--grid"));
  g.im_min = parse_double(parts[3], "--grid");
  g.im_max = parse_double(parts[4], "--grid");
  g.n_im = static_cast<int>(parse_double(parts[5], "--grid"));
  if (g.n_re < 1 || g.n_im < 1) throw UsageError("--grid counts must be positive");
  return g;
}

std::vector<double> parse_doubles(const std::string& spec, const std::string& what) {
  std::vector<double> out;
  for (const auto& p : split(spec, ',')) out.push_back(parse_double(p, what));
  return out;
}

/// z on every real factor, e^z on every Z factor, trivial on K.
GenChar sweep_character(const GroupSpec& group, cplx z) {
  auto a = trivial_character(group);
  for (auto& zj : a.z) zj = z;
  for (auto& w : a.w) w = std::exp(z);
  return a;
}

/// Tent on each real axis times the point mass at 0 on the discrete axes.
CcFunction default_probe(const GroupSpec& group, double h) {
  const auto k = last_grid_index_at_or_below(1.0, h);
  std::vector<std::size_t> extents(group.real_rank(), static_cast<std::size_t>(2 * k + 1));
  extents.insert(extents.end(), group.int_rank(), 1);
  return sample_function(group, std::vector<double>(group.real_rank(), h),
                         std::vector<std::int64_t>(group.real_rank(), -k), std::vector<std::int64_t>(group.int_rank(), 0),
                         extents, [](const GroupElement& t) {
                           double v = 1.0;
                           for (double x : t.real) v *= std::max(0.0, 1.0 - std::abs(x));
                           for (auto r : t.residues) v *= (r == 0 ? 1.0 : 0.0);
                           return cplx(v);
                         });
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line + '\n';
}

// ---------------------------------------------------------------------------

struct LemmaArgs {
  int m = 0;
  std::string eps_text;
  bool verify = false;
  std::string grid = "360,50";
  int assume_n = 0;
};

int run_lemma_n(const LemmaArgs& args, const CommonOptions& opts) {
  if (args.m <= 1) throw UsageError("m must exceed 1");
  const double eps = parse_double(args.eps_text, "eps");
  if (!(eps > 0.0)) throw UsageError("eps must be > 0");
  if (!(eps < 1.0 / args.m)) throw UsageError("eps must be < 1/m");
  const auto dims = split(args.grid, ',');
  if (dims.size() != 2) throw UsageError("--grid expects ANGLES,RADII for lemma-n");
  const int n_angles = static_cast<int>(parse_double(dims[0], "--grid"));
  const int n_radii = static_cast<int>(parse_double(dims[1], "--grid"));
  if (n_angles < 2 || n_radii < 2) throw UsageError("grid counts must be >= 2");

  auto cert = compute_N(args.m, eps);
  if (args.assume_n != 0) {
    if (args.assume_n < 1) throw UsageError("--assume-N must be >= 1");
    cert.N = args.assume_n;
  }
  nlohmann::ordered_json out;
  out["m"] = cert.m;
  out["eps"] = cert.eps;
  out["delta"] = cert.delta;
  out["r0"] = cert.r0;
  out["r1"] = cert.r1;
  out["n1"] = cert.n1;
  out["n2"] = cert.n2;
  out["n3"] = cert.n3;
  out["N"] = cert.N;
  int code = kExitOk;
  if (args.verify) {
    const auto report = verify_certificate(cert, n_angles, n_radii, opts.parallel);
    out["verified"] = report.holds;
    out["grid_max_k"] = report.max_k;
    if (!report.holds) {
      spdlog::error("grid oracle needs k = {} > N = {}", report.max_k, cert.N);
      code = kExitRejected;
    }
  } else {
    out["verified"] = false;
    out["grid_max_k"] = nullptr;
  }
  emit(opts, out.dump() + "\n");
  return code;
}

struct TransformArgs {
  std::string function;
  std::string grid = "-1,1,3,-1,1,3";
};

int run_transform(const TransformArgs& args, const CommonOptions& opts) {
  const auto f = function_from_json(read_json_file(args.function));
  const auto grid = parse_sweep_grid(args.grid);
  std::vector<std::string> rows(grid.size());
  parallel_for(grid.size(), opts.parallel, [&](std::size_t i) {
    const auto z = grid.at(i);
    const auto v = gelfand_transform(f, sweep_character(f.group(), z));
    rows[i] = csv_line({format_double(z.real()), format_double(z.imag()), format_double(v.real()), format_double(v.imag())});
  });
  std::string text = "re_z,im_z,re_val,im_val\n";
  for (const auto& r : rows) text += r;
  emit(opts, text);
  return kExitOk;
}

struct ConvolveArgs {
  std::string f, g;
};

int run_convolve(const ConvolveArgs& args, const CommonOptions& opts) {
  const auto f = function_from_json(read_json_file(args.f));
  const auto g = function_from_json(read_json_file(args.g));
  emit(opts, to_json(convolve(f, g)).dump() + "\n");
  return kExitOk;
}

int run_chars(const std::vector<std::int64_t>& orders, const CommonOptions& opts) {
  const GroupSpec k(0, 0, orders);
  const auto chars = enumerate_characters(orders);
  std::vector<std::string> header{"index"};
  for (std::size_t i = 0; i < orders.size(); ++i) header.push_back("c" + std::to_string(i + 1));
  for (std::size_t i = 0; i < orders.size(); ++i) {
    header.push_back("re_g" + std::to_string(i + 1));
    header.push_back("im_g" + std::to_string(i + 1));
  }
  std::string text = csv_line(header);
  for (std::size_t c = 0; c < chars.size(); ++c) {
    std::vector<std::string> row{std::to_string(c)};
    for (auto r : chars[c].dual_residues) row.push_back(std::to_string(r));
    for (std::size_t i = 0; i < orders.size(); ++i) {
      auto gen = identity(k);
      gen.residues[i] = 1;
      const auto v = evaluate(k, chars[c], gen);
      row.push_back(format_double(v.real()));
      row.push_back(format_double(v.imag()));
    }
    text += csv_line(row);
  }
  emit(opts, text);
  return kExitOk;
}

struct RecoverArgs {
  std::string function;
  std::string hidden;
  std::string functional;
  std::vector<std::int64_t> orders;
  double span = 1.0;
  std::int64_t int_span = 3;
  double step = 0.01;
  double tol = 1e-9;
};

int run_recover(const RecoverArgs& args, const CommonOptions& opts) {
  if (args.hidden.empty() == args.functional.empty()) {
    throw UsageError("give exactly one of --hidden or --functional");
  }
  GenChar hidden;
  if (!args.hidden.empty()) {
    hidden = character_from_json(parse_json_text(args.hidden, "--hidden"));
  } else {
    const auto spec = read_json_file(args.functional);
    if (spec.value("kind", std::string{}) != "gelfand" || !spec.contains("char")) {
      throw UsageError("functional file must be {\"kind\":\"gelfand\",\"char\":...}");
    }
    hidden = character_from_json(spec.at("char"));
  }

  std::optional<CcFunction> probe;
  GroupSpec group;
  if (!args.function.empty()) {
    probe = function_from_json(read_json_file(args.function));
    group = probe->group();
  } else {
    group = GroupSpec(static_cast<int>(hidden.z.size()), static_cast<int>(hidden.w.size()), args.orders);
  }
  require_conforms(group, hidden);
  const auto phi = gelfand_functional(group, hidden);

  if (!probe && !group.is_discrete()) probe = default_probe(group, args.step);
  const auto steps = probe ? probe->real_step() : std::vector<double>{};
  const auto samples = grid_samples(group, steps, args.span, args.int_span);

  // The oracle must look multiplicative on a few probe pairs before it is trusted.
  const auto base = probe ? *probe : delta(group, identity(group));
  std::vector<std::pair<CcFunction, CcFunction>> pairs{{base, base}};
  if (samples.size() > 1) pairs.emplace_back(base, translate(base, samples[samples.size() / 3]));
  require_multiplicative(phi, pairs, args.tol);

  const auto rc = probe ? recover_character(phi, *probe, samples) : discrete_recover(phi, samples);
  spdlog::info("recovered {} values, homomorphism residual {}", rc.values.size(), rc.residual);

  std::vector<std::string> header;
  for (int j = 0; j < group.real_rank(); ++j) header.push_back("s_r" + std::to_string(j + 1));
  for (int j = 0; j < group.int_rank(); ++j) header.push_back("s_z" + std::to_string(j + 1));
  for (std::size_t i = 0; i < group.torsion_rank(); ++i) header.push_back("s_k" + std::to_string(i + 1));
  header.push_back("re_alpha");
  header.push_back("im_alpha");
  std::string text = csv_line(header);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::vector<std::string> row;
    for (double x : samples[i].real) row.push_back(format_double(x));
    for (auto k : samples[i].ints) row.push_back(std::to_string(k));
    for (auto r : samples[i].residues) row.push_back(std::to_string(r));
    row.push_back(format_double(rc.values[i].real()));
    row.push_back(format_double(rc.values[i].imag()));
    text += csv_line(row);
  }
  emit(opts, text);
  return kExitOk;
}

struct StripArgs {
  double r = 1.0;
  std::string grid = "-2,2,9,-2,2,5";
  std::string function;
  std::string witness;
  int witness_count = 5;
};

int run_strip(const StripArgs& args, const CommonOptions& opts) {
  if (!(args.r > 0.0)) throw UsageError("--r must be > 0");
  if (!args.witness.empty()) {
    const auto parts = parse_doubles(args.witness, "--witness");
    if (parts.size() != 2) throw UsageError("--witness expects RE,IM");
    const auto ratios = divergence_witness(cplx(parts[0], parts[1]), args.r, args.witness_count);
    std::string text = "k,ratio\n";
    for (std::size_t k = 0; k < ratios.size(); ++k) text += csv_line({std::to_string(k), format_double(ratios[k])});
    emit(opts, text);
    return kExitOk;
  }

  CcFunction f;
  if (!args.function.empty()) {
    f = function_from_json(read_json_file(args.function));
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    f = sample_function(make_group(1, 0), {0.01}, {-100}, {}, {201}, [&](const GroupElement&) {
      return cplx(u(rng), u(rng));
    });
  }
  const auto grid = parse_sweep_grid(args.grid);
  std::vector<std::string> rows(grid.size());
  parallel_for(grid.size(), opts.parallel, [&](std::size_t i) {
    const auto z = grid.at(i);
    const auto check = strip_bound_check(f, z, args.r);
    rows[i] = csv_line({format_double(z.real()), format_double(z.imag()), format_double(check.transform_abs),
                        format_double(check.norm), check.in_strip ? "1" : "0", check.ok ? "1" : "0"});
  });
  std::string text = "re_z,im_z,abs_transform,weighted_norm,in_strip,ok\n";
  for (const auto& r : rows) text += r;
  emit(opts, text);
  return kExitOk;
}

struct WordlenArgs {
  std::string group;
  std::string element;
  std::string box;
};

int run_wordlen(const WordlenArgs& args, const CommonOptions& opts) {
  const auto group = group_from_json(parse_json_text(args.group, "--group"));
  const auto t = element_from_json(group, parse_json_text(args.element, "--element"));
  const auto box = args.box.empty() ? unit_box(group) : make_box(group, parse_doubles(args.box, "--box"));
  emit(opts, std::to_string(word_length(group, t, box)) + "\n");
  return kExitOk;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("lcachar");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("lcachar: %l: %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("LCACHAR_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Generalized characters of R^m x Z^n x K: transforms, recovery, escape bounds"};
  app.require_subcommand(1);
  CommonOptions opts;
  auto add_common = [&opts](CLI::App* sub) {
    sub->add_option("--out", opts.out, "Output path (written atomically); default stdout");
    sub->add_option("--seed", opts.seed, "Seed for randomized inputs")->capture_default_str();
    sub->add_option("--parallel", opts.parallel, "Worker threads for sweeps")->capture_default_str();
  };

  LemmaArgs lemma;
  auto* lemma_cmd = app.add_subcommand("lemma-n", "Certificate N for the power-escape bound");
  lemma_cmd->add_option("m", lemma.m, "Integer m > 1")->required();
  lemma_cmd->add_option("eps", lemma.eps_text, "0 < eps < 1/m")->required();
  lemma_cmd->add_flag("--verify", lemma.verify, "Check N against the annulus grid oracle");
  lemma_cmd->add_option("--grid", lemma.grid, "ANGLES,RADII for the oracle grid")->capture_default_str();
  lemma_cmd->add_option("--assume-N", lemma.assume_n, "Check this N instead of the constructed one");
  add_common(lemma_cmd);

  TransformArgs transform;
  auto* transform_cmd = app.add_subcommand("transform", "Gel'fand transform sweep over a z rectangle");
  transform_cmd->add_option("--function", transform.function, "Function JSON file")->required();
  transform_cmd->add_option("--grid", transform.grid, "re_min,re_max,n_re,im_min,im_max,n_im")->capture_default_str();
  add_common(transform_cmd);

  ConvolveArgs conv;
  auto* conv_cmd = app.add_subcommand("convolve", "Convolve two function files");
  conv_cmd->add_option("--f", conv.f, "First function JSON file")->required();
  conv_cmd->add_option("--g", conv.g, "Second function JSON file")->required();
  add_common(conv_cmd);

  std::vector<std::int64_t> orders;
  auto* chars_cmd = app.add_subcommand("chars", "Character table of prod Z_d");
  chars_cmd->add_option("orders", orders, "Cyclic orders d_i >= 2")->required();
  add_common(chars_cmd);

  RecoverArgs recover;
  auto* recover_cmd = app.add_subcommand("recover", "Recover a character from a Gel'fand functional");
  recover_cmd->add_option("--function", recover.function, "Probe function JSON file");
  recover_cmd->add_option("--hidden", recover.hidden, "Hidden character as inline JSON");
  recover_cmd->add_option("--functional", recover.functional, "Functional description JSON file");
  recover_cmd->add_option("--orders", recover.orders, "Cyclic orders when no function file is given");
  recover_cmd->add_option("--span", recover.span, "Real sample range [-span, span]")->capture_default_str();
  recover_cmd->add_option("--int-span", recover.int_span, "Integer sample range")->capture_default_str();
  recover_cmd->add_option("--step", recover.step, "Grid step of the default probe")->capture_default_str();
  recover_cmd->add_option("--tol", recover.tol, "Multiplicativity tolerance")->capture_default_str();
  add_common(recover_cmd);

  StripArgs strip;
  auto* strip_cmd = app.add_subcommand("strip", "Beurling strip bound sweep");
  strip_cmd->add_option("--r", strip.r, "Weight rate r > 0")->capture_default_str();
  strip_cmd->add_option("--grid", strip.grid, "re_min,re_max,n_re,im_min,im_max,n_im")->capture_default_str();
  strip_cmd->add_option("--function", strip.function, "Function JSON file (default: seeded random on [-1,1])");
  strip_cmd->add_option("--witness", strip.witness, "RE,IM: print divergence ratios instead of the sweep");
  strip_cmd->add_option("--witness-count", strip.witness_count, "Number of translated bumps")->capture_default_str();
  add_common(strip_cmd);

  WordlenArgs wordlen;
  auto* wordlen_cmd = app.add_subcommand("wordlen", "Word length relative to a generating box");
  wordlen_cmd->add_option("--group", wordlen.group, "GroupSpec JSON")->required();
  wordlen_cmd->add_option("--element", wordlen.element, "Element JSON {\"real\":[..],\"int\":[..],\"residues\":[..]}")
      ->required();
  wordlen_cmd->add_option("--box", wordlen.box, "Comma-separated real half-widths (default 1)");
  add_common(wordlen_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*lemma_cmd) return run_lemma_n(lemma, opts);
    if (*transform_cmd) return run_transform(transform, opts);
    if (*conv_cmd) return run_convolve(conv, opts);
    if (*chars_cmd) return run_chars(orders, opts);
    if (*recover_cmd) return run_recover(recover, opts);
    if (*strip_cmd) return run_strip(strip, opts);
    if (*wordlen_cmd) return run_wordlen(wordlen, opts);
  } catch (const UsageError& e) {
    std::cerr << "lcachar: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "lcachar: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
