// Copyright (c) 2026, The pdncg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pdncg/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "pdncg/errors.hpp"
#include "pdncg/kernels.hpp"

namespace pdncg::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ParameterError("config: '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ParameterError("config: '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& v) {
  const long long x = parse_int(key, v);
  if (x < 0) throw ParameterError("config: '" + key + "' must be nonnegative");
  return static_cast<std::size_t>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "1" || t == "true" || t == "on" || t == "yes") return true;
  if (t == "0" || t == "false" || t == "off" || t == "no") return false;
  throw ParameterError("config: '" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(v);
  while (std::getline(is, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

KeyValues parse_config_text(std::string_view text) {
  KeyValues kv;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ParameterError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return kv;
}

KeyValues read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "problem", "p", "n", "sparsity", "image", "ratio", "noise_db", "c", "mu", "continuation",
      "target_db", "out", "seed", "eta", "tau1", "tau2", "max_backtracks", "max_outer", "max_cg",
      "rho", "precond_activation_mu", "precond", "tol", "stage_tol", "dual_warm", "spectrum_mu",
      "sweep_key", "sweep_values", "ablation_target", "reference_tol"};
  return keys;
}

KeyValues parse_overrides(const std::vector<std::string>& args) {
  KeyValues kv;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0 || a.size() < 3) {
      throw ParameterError("unexpected argument '" + a + "'");
    }
    std::string key = a.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.erase(eq);
    } else {
      if (i + 1 >= args.size()) throw ParameterError("missing value for --" + key);
      value = args[++i];
    }
    std::replace(key.begin(), key.end(), '-', '_');
    kv[key] = value;
  }
  return kv;
}

ExperimentConfig ExperimentConfig::from_keys(const KeyValues& kv) {
  ExperimentConfig cfg;
  const auto& known = config_keys();
  for (const auto& [k, v] : kv) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw ParameterError("config: unknown key '" + k + "'");
    }
    if (k == "problem") {
      if (v == "itv-phantom") {
        cfg.problem = ProblemKind::ItvPhantom;
      } else if (v == "itv-image-file") {
        cfg.problem = ProblemKind::ItvImageFile;
      } else if (v == "l1-analysis-tiny") {
        cfg.problem = ProblemKind::L1AnalysisTiny;
      } else {
        throw ParameterError("config: unknown problem '" + v + "'");
      }
    } else if (k == "p") {
      cfg.p = parse_count(k, v);
    } else if (k == "n") {
      cfg.n = parse_count(k, v);
    } else if (k == "sparsity") {
      cfg.sparsity = parse_count(k, v);
    } else if (k == "image") {
      cfg.image = v;
    } else if (k == "ratio") {
      cfg.ratio = parse_double(k, v);
    } else if (k == "noise_db") {
      cfg.noise_db = parse_double(k, v);
    } else if (k == "c") {
      cfg.c = parse_double(k, v);
    } else if (k == "mu") {
      cfg.mu = parse_double(k, v);
    } else if (k == "continuation") {
      cfg.continuation = parse_bool(k, v);
    } else if (k == "target_db") {
      if (v == "none" || v.empty()) {
        cfg.target_db.reset();
      } else {
        cfg.target_db = parse_double(k, v);
      }
    } else if (k == "out") {
      cfg.out = v;
    } else if (k == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_count(k, v));
      cfg.solver.seed = cfg.seed;
    } else if (k == "eta") {
      cfg.solver.eta = parse_double(k, v);
    } else if (k == "tau1") {
      cfg.solver.tau1 = parse_double(k, v);
    } else if (k == "tau2") {
      cfg.solver.tau2 = parse_double(k, v);
    } else if (k == "max_backtracks") {
      cfg.solver.max_backtracks = static_cast<int>(parse_count(k, v));
    } else if (k == "max_outer") {
      cfg.solver.max_outer = static_cast<int>(parse_count(k, v));
    } else if (k == "max_cg") {
      cfg.solver.max_cg = static_cast<int>(parse_count(k, v));
    } else if (k == "rho") {
      cfg.solver.rho = parse_double(k, v);
    } else if (k == "precond_activation_mu") {
      cfg.solver.precond_activation_mu = parse_double(k, v);
    } else if (k == "precond") {
      if (v == "never") {
        cfg.solver.precond = PrecondPolicy::Never;
      } else if (v == "always") {
        cfg.solver.precond = PrecondPolicy::Always;
      } else if (v == "late") {
        cfg.solver.precond = PrecondPolicy::Late;
      } else {
        throw ParameterError("config: precond must be never, always or late");
      }
    } else if (k == "tol") {
      cfg.solver.tol = parse_double(k, v);
    } else if (k == "stage_tol") {
      cfg.solver.stage_tol = parse_double(k, v);
    } else if (k == "dual_warm") {
      if (v == "carry") {
        cfg.solver.dual_warm = DualWarmStart::Carry;
      } else if (v == "reinit") {
        cfg.solver.dual_warm = DualWarmStart::Reinitialize;
      } else {
        throw ParameterError("config: dual_warm must be carry or reinit");
      }
    } else if (k == "spectrum_mu") {
      cfg.spectrum_mu.clear();
      for (const auto& s : split_list(v)) cfg.spectrum_mu.push_back(parse_double(k, s));
    } else if (k == "sweep_key") {
      cfg.sweep_key = v;
    } else if (k == "sweep_values") {
      cfg.sweep_values = split_list(v);
    } else if (k == "ablation_target") {
      cfg.ablation_target = parse_double(k, v);
    } else if (k == "reference_tol") {
      cfg.reference_tol = parse_double(k, v);
    }
  }
  if (!(cfg.ratio > 0.0 && cfg.ratio <= 1.0)) throw ParameterError("config: ratio must lie in (0, 1]");
  if (!(cfg.c > 0.0)) throw ParameterError("config: c must be positive");
  if (!(cfg.mu > 0.0)) throw ParameterError("config: mu must be positive");
  cfg.solver.validate();
  return cfg;
}

GrayImage read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read image " + path.string());
  auto token = [&]() {
    std::string t;
    char ch = 0;
    while (in.get(ch)) {
      if (ch == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) {
        if (!t.empty()) break;
        continue;
      }
      t.push_back(ch);
    }
    if (t.empty()) throw Error("truncated PGM header in " + path.string());
    return t;
  };
  const std::string magic = token();
  if (magic != "P2" && magic != "P5") throw Error(path.string() + " is not a PGM file");
  GrayImage img;
  img.width = static_cast<std::size_t>(std::stoul(token()));
  img.height = static_cast<std::size_t>(std::stoul(token()));
  const unsigned long maxval = std::stoul(token());
  if (maxval == 0 || maxval > 65535) throw Error("bad PGM maxval in " + path.string());
  const std::size_t count = img.width * img.height;
  std::vector<unsigned> raw(count);
  if (magic == "P2") {
    for (auto& v : raw) v = static_cast<unsigned>(std::stoul(token()));
  } else {
    const std::size_t bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> buf(count * bytes);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size()) {
      throw Error("truncated PGM data in " + path.string());
    }
    for (std::size_t i = 0; i < count; ++i) {
      raw[i] = bytes == 1 ? buf[i] : (static_cast<unsigned>(buf[2 * i]) << 8) | buf[2 * i + 1];
    }
  }
  img.pixels.resize(count);
  for (std::size_t r = 0; r < img.height; ++r) {
    for (std::size_t c = 0; c < img.width; ++c) {
      img.pixels[c * img.height + r] =
          std::min(1.0, static_cast<double>(raw[r * img.width + c]) / static_cast<double>(maxval));
    }
  }
  return img;
}

void write_pgm(const fs::path& path, const GrayImage& img, bool binary) {
  require_size(img.pixels.size(), img.width * img.height, "write_pgm");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << (binary ? "P5" : "P2") << '\n' << img.width << ' ' << img.height << "\n255\n";
  for (std::size_t r = 0; r < img.height; ++r) {
    for (std::size_t c = 0; c < img.width; ++c) {
      const double v = std::clamp(img.pixels[c * img.height + r], 0.0, 1.0);
      const int q = static_cast<int>(std::lround(v * 255.0));
      if (binary) {
        out.put(static_cast<char>(q));
      } else {
        out << q << (c + 1 == img.width ? '\n' : ' ');
      }
    }
  }
  if (!out) throw Error("failed writing " + path.string());
}

Problem build_problem(const ExperimentConfig& cfg) {
  std::mt19937_64 noise_rng(cfg.seed * 0x9E3779B97F4A7C15ULL + 1);
  if (cfg.problem == ProblemKind::L1AnalysisTiny) {
    const std::size_t n = cfg.n;
    if (n < 2) throw ParameterError("l1-analysis-tiny: n must be at least 2");
    const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.ratio * n)));
    Dictionary w = Dictionary::random_orthonormal(n, cfg.seed + 7);
    LinearMap a = LinearMap::gaussian(m, n, cfg.seed, true);
    std::mt19937_64 rng(cfg.seed + 13);
    Vec z(n, 0.0);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t k = 0; k < std::min(cfg.sparsity, n); ++k) z[idx[k]] = 1.0 + std::abs(gauss(rng));
    Vec truth = w.synthesize_real(z, {});
    Vec b = add_noise_to_target(a.apply(truth), cfg.noise_db, noise_rng);
    return Problem{std::move(a), std::move(w), std::move(b), std::move(truth), 0};
  }
  Vec truth;
  std::size_t p = cfg.p;
  if (cfg.problem == ProblemKind::ItvImageFile) {
    if (cfg.image.empty()) throw ParameterError("itv-image-file needs 'image'");
    GrayImage img = read_pgm(cfg.image);
    if (img.width != img.height) throw DimensionError("itv-image-file: image must be square");
    p = img.width;
    truth = std::move(img.pixels);
  } else {
    truth = shepp_logan(p);
  }
  const std::size_t n = p * p;
  const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.ratio * n)));
  LinearMap a = LinearMap::random_partial_dct(p, p, m, cfg.seed);
  Dictionary w = Dictionary::itv(p);
  Vec b = add_noise_to_target(a.apply(truth), cfg.noise_db, noise_rng);
  return Problem{std::move(a), std::move(w), std::move(b), std::move(truth), p};
}

namespace {

double quality(const Problem& pr, std::span<const double> x) {
  return pr.side ? psnr(pr.truth, x, 1.0) : snr(pr.truth, x);
}

ContinuationResult solve_problem(const Problem& pr, const ExperimentConfig& cfg, double c, double mu,
                                 bool use_continuation, const SolveHooks& extra = {}) {
  SolveHooks hooks = extra;
  if (cfg.target_db) {
    const double target = *cfg.target_db;
    auto prev = extra.observer;
    hooks.observer = [&pr, target, prev](const TraceEntry& e, const Iterate& it) {
      if (prev && prev(e, it)) return true;
      return quality(pr, it.x) >= target;
    };
  }
  return use_continuation ? continuation(pr.a, pr.w, pr.b, c, mu, cfg.solver, hooks)
                          : direct_solve(pr.a, pr.w, pr.b, c, mu, cfg.solver, hooks);
}

RunSummary summarize(const Problem& pr, const ContinuationResult& res) {
  RunSummary s;
  s.psnr = pr.side ? psnr(pr.truth, res.iterate.x, 1.0) : 0.0;
  s.snr = snr(pr.truth, res.iterate.x);
  s.outer_iterations = res.total_outer();
  s.total_cg = res.total_cg();
  s.converged = !res.stages.empty() &&
                (res.stages.back().result.converged || res.stopped_by_observer);
  return s;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  return os;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());
}

void write_trace(const fs::path& path, const ContinuationResult& res) {
  auto os = open_out(path);
  os << "stage,iteration,c,mu,objective,grad_norm,cg_iterations,step,preconditioned\n";
  for (const auto& st : res.stages) {
    for (const auto& e : st.result.trace) {
      os << e.stage << ',' << e.iteration << ',' << fmt(e.c) << ',' << fmt(e.mu) << ','
         << fmt(e.objective) << ',' << fmt(e.grad_norm) << ',' << e.cg_iterations << ','
         << fmt(e.step) << ',' << (e.preconditioned ? 1 : 0) << '\n';
    }
  }
}

void write_summary_header(std::ostream& os) {
  os << "psnr,snr,outer_iterations,total_cg,converged\n";
}

void write_summary_row(std::ostream& os, const RunSummary& s) {
  os << fmt(s.psnr) << ',' << fmt(s.snr) << ',' << s.outer_iterations << ',' << s.total_cg << ','
     << (s.converged ? 1 : 0) << '\n';
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files) {
  const Problem pr = build_problem(cfg);
  ExperimentResult out;
  out.solve = solve_problem(pr, cfg, cfg.c, cfg.mu, cfg.continuation);
  out.x = out.solve.iterate.x;
  out.summary = summarize(pr, out.solve);
  if (write_files) {
    ensure_dir(cfg.out);
    if (pr.side) {
      write_pgm(cfg.out / "reconstruction.pgm", GrayImage{pr.side, pr.side, out.x});
      write_pgm(cfg.out / "original.pgm", GrayImage{pr.side, pr.side, pr.truth});
    }
    write_trace(cfg.out / "trace.csv", out.solve);
    auto os = open_out(cfg.out / "summary.csv");
    write_summary_header(os);
    write_summary_row(os, out.summary);
  }
  return out;
}

SpectrumStudyResult run_spectrum_study(const ExperimentConfig& cfg, bool write_files) {
  const Problem pr = build_problem(cfg);
  const std::size_t n = pr.w.signal_size();
  if (n > kMaxDenseSize) throw TooLargeError("spectrum study: n exceeds the dense limit");
  const bool precond = cfg.solver.precond != PrecondPolicy::Never;
  SpectrumStudyResult out;
  for (double mu : cfg.spectrum_mu) {
    SolveHooks hooks;
    hooks.on_system = [&](const NewtonSystem& sys, const Preconditioner& pc, const TraceEntry& e,
                          std::span<const double> rhs) {
      const OperatorFn op = [&sys](std::span<const double> v) { return sys.apply(v); };
      SystemRecord rec;
      rec.mu = mu;
      rec.iteration = e.iteration;
      rec.bhat = densify_and_eig(op, n);
      rec.bhat.iteration = e.iteration;
      rec.precond = preconditioned_spectrum(op, pc);
      rec.precond.iteration = e.iteration;
      rec.cg_iterations =
          pcg(op, rhs, Preconditioner::identity(n), cfg.solver.eta, cfg.solver.max_cg).iterations;
      rec.pcg_iterations = pcg(op, rhs, pc, cfg.solver.eta, cfg.solver.max_cg).iterations;
      out.systems.push_back(std::move(rec));
    };
    SolverConfig sc = cfg.solver;
    sc.precond = precond ? PrecondPolicy::Always : PrecondPolicy::Never;
    direct_solve(pr.a, pr.w, pr.b, cfg.c, mu, sc, hooks);
  }
  if (write_files) {
    ensure_dir(cfg.out);
    for (double mu : cfg.spectrum_mu) {
      std::vector<SpectralReport> b1, p1;
      for (const auto& r : out.systems) {
        if (r.mu != mu) continue;
        b1.push_back(r.bhat);
        p1.push_back(r.precond);
      }
      const std::string tag = "mu" + fmt(mu);
      auto ob = open_out(cfg.out / ("spectrum_" + tag + "_bhat.csv"));
      write_eigenvalue_csv(ob, b1);
      auto op = open_out(cfg.out / ("spectrum_" + tag + "_precond.csv"));
      write_eigenvalue_csv(op, p1);
      // Plot data: iteration, eigenvalue per row, whitespace separated.
      auto db = open_out(cfg.out / ("spectrum_" + tag + "_bhat.dat"));
      auto dp = open_out(cfg.out / ("spectrum_" + tag + "_precond.dat"));
      db << std::setprecision(12);
      dp << std::setprecision(12);
      for (std::size_t k = 0; k < b1.size(); ++k) {
        for (double v : b1[k].eigenvalues) db << b1[k].iteration << ' ' << v << '\n';
        for (double v : p1[k].eigenvalues) dp << p1[k].iteration << ' ' << v << '\n';
      }
    }
    auto os = open_out(cfg.out / "spectral_summary.csv");
    os << "mu,iteration,bhat_min,bhat_max,bhat_band,precond_min,precond_max,precond_band,"
          "cg_iterations,pcg_iterations\n";
    for (const auto& r : out.systems) {
      os << fmt(r.mu) << ',' << r.iteration << ',' << fmt(r.bhat.min()) << ','
         << fmt(r.bhat.max()) << ',' << fmt(r.bhat.band_fraction()) << ','
         << fmt(r.precond.min()) << ',' << fmt(r.precond.max()) << ','
         << fmt(r.precond.band_fraction()) << ',' << r.cg_iterations << ','
         << r.pcg_iterations << '\n';
    }
  }
  return out;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, bool write_files) {
  if (cfg.sweep_values.empty()) throw ParameterError("sweep: 'sweep_values' is empty");
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i) {
    KeyValues kv{{cfg.sweep_key, cfg.sweep_values[i]}};
    ExperimentConfig run = cfg;
    // Re-parse the single override on top of the base configuration.
    const ExperimentConfig one = ExperimentConfig::from_keys(kv);
    if (cfg.sweep_key == "mu") {
      run.mu = one.mu;
    } else if (cfg.sweep_key == "c") {
      run.c = one.c;
    } else if (cfg.sweep_key == "ratio") {
      run.ratio = one.ratio;
    } else if (cfg.sweep_key == "noise_db") {
      run.noise_db = one.noise_db;
    } else if (cfg.sweep_key == "seed") {
      run.seed = one.seed;
    } else if (cfg.sweep_key == "p") {
      run.p = one.p;
    } else if (cfg.sweep_key == "rho") {
      run.solver.rho = one.solver.rho;
    } else if (cfg.sweep_key == "precond") {
      run.solver.precond = one.solver.precond;
    } else if (cfg.sweep_key == "eta") {
      run.solver.eta = one.solver.eta;
    } else {
      throw ParameterError("sweep: unsupported sweep_key '" + cfg.sweep_key + "'");
    }
    run.out = cfg.out / ("run_" + std::to_string(i));
    const ExperimentResult r = run_experiment(run, write_files);
    rows.push_back({cfg.sweep_values[i], r.summary});
  }
  if (write_files) {
    ensure_dir(cfg.out);
    auto os = open_out(cfg.out / "sweep.csv");
    os << cfg.sweep_key << ',';
    write_summary_header(os);
    for (const auto& r : rows) {
      os << r.value << ',';
      write_summary_row(os, r.summary);
    }
  }
  return rows;
}

std::vector<AblationRow> run_ablation(const ExperimentConfig& cfg, bool write_files) {
  const Problem pr = build_problem(cfg);
  ExperimentConfig ref_cfg = cfg;
  ref_cfg.target_db.reset();
  ref_cfg.solver.tol = cfg.reference_tol;
  ref_cfg.solver.precond = PrecondPolicy::Late;
  const Vec xref = solve_problem(pr, ref_cfg, cfg.c, cfg.mu, true).iterate.x;
  const double refn = kernels::norm2(xref);
  if (refn == 0.0) throw Error("ablation: reference solution is zero");

  auto rel_error = [&](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - xref[i]) * (x[i] - xref[i]);
    return std::sqrt(s) / refn;
  };

  std::vector<AblationRow> rows;
  for (int setting = 0; setting < 4; ++setting) {
    AblationRow row;
    row.continuation = setting < 2;
    row.preconditioning = setting % 2 == 0;
    row.setting = std::string(row.continuation ? "continuation" : "direct") + "+" +
                  (row.preconditioning ? "precond" : "noprecond");
    ExperimentConfig run = cfg;
    run.target_db.reset();
    run.solver.precond = row.preconditioning ? PrecondPolicy::Late : PrecondPolicy::Never;
    int cum = 0;
    int outer = 0;
    SolveHooks hooks;
    hooks.observer = [&](const TraceEntry& e, const Iterate& it) {
      cum += e.cg_iterations;
      ++outer;
      const double err = rel_error(it.x);
      row.curve.emplace_back(cum, err);
      if (err <= cfg.ablation_target) {
        row.reached = true;
        row.cg_to_target = cum;
        row.outer_to_target = outer;
        return true;
      }
      return false;
    };
    const ContinuationResult res = solve_problem(pr, run, cfg.c, cfg.mu, row.continuation, hooks);
    row.final_error = rel_error(res.iterate.x);
    if (!row.reached) {
      row.cg_to_target = cum;
      row.outer_to_target = outer;
    }
    rows.push_back(std::move(row));
  }
  if (write_files) {
    ensure_dir(cfg.out);
    auto os = open_out(cfg.out / "ablation.csv");
    os << "setting,outer_iteration,cumulative_cg,relative_error\n";
    for (const auto& r : rows) {
      for (std::size_t k = 0; k < r.curve.size(); ++k) {
        os << r.setting << ',' << k << ',' << r.curve[k].first << ',' << fmt(r.curve[k].second)
           << '\n';
      }
    }
    auto ss = open_out(cfg.out / "ablation_summary.csv");
    ss << "setting,continuation,preconditioning,reached,cg_to_target,outer_to_target,final_error\n";
    for (const auto& r : rows) {
      ss << r.setting << ',' << (r.continuation ? 1 : 0) << ',' << (r.preconditioning ? 1 : 0)
         << ',' << (r.reached ? 1 : 0) << ',' << r.cg_to_target << ',' << r.outer_to_target << ','
         << fmt(r.final_error) << '\n';
    }
    for (const auto& r : rows) {
      auto dat = open_out(cfg.out / ("ablation_" + r.setting + ".dat"));
      dat << std::setprecision(12);
      for (const auto& [cg, err] : r.curve) dat << cg << ' ' << err << '\n';
    }
  }
  return rows;
}

}  // namespace pdncg::cli
