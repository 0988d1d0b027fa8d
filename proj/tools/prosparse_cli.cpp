// Command-line front end: recovery runs, exact/approximate probability
// queries, Monte Carlo gap experiments, phase-diagram grids and coherence
// diagnostics. Emits JSON for single results and CSV for grids; outputs are
// byte-identical for identical commands and seeds (timestamps excluded via
// --no-timestamp).

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "prosparse/asymptotics.hpp"
#include "prosparse/dictionary.hpp"
#include "prosparse/errors.hpp"
#include "prosparse/gaps.hpp"
#include "prosparse/probability.hpp"
#include "prosparse/recover.hpp"
#include "prosparse/rng.hpp"
#include "prosparse/serialization.hpp"
#include "prosparse/version.hpp"

namespace {

using namespace prosparse;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoSolution = 2;
constexpr int kExitBudget = 3;

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct OutputOptions {
  std::string path;  // empty = stdout
  bool no_timestamp = false;
};

void add_output_options(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("-o,--output", out.path, "Write the report to this file");
  cmd->add_flag("--no-timestamp", out.no_timestamp,
                "Omit the timestamp field (byte-reproducible output)");
}

void emit(const OutputOptions& out, const std::string& content) {
  if (out.path.empty()) {
    std::cout << content;
    if (content.empty() || content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(out.path);
  if (!f) throw InvalidInputError("cannot open output file: " + out.path);
  f << content;
  if (content.empty() || content.back() != '\n') f << '\n';
}

void stamp(json& j, const OutputOptions& out) {
  j["version"] = kVersion;
  if (!out.no_timestamp) j["timestamp"] = iso_timestamp();
}

std::string csv_preamble(const OutputOptions& out,
                         const std::vector<std::pair<std::string, std::string>>& cfg) {
  std::ostringstream os;
  os << "# prosparse " << kVersion << "\n";
  for (const auto& [k, v] : cfg) os << "# " << k << "=" << v << "\n";
  if (!out.no_timestamp) os << "# timestamp=" << iso_timestamp() << "\n";
  return os.str();
}

std::vector<double> parse_range(const std::string& spec) {
  // "lo:hi:steps" inclusive, or a single value
  double lo = 0, hi = 0;
  int steps = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &lo, &hi, &steps) == 3) {
    if (steps < 1) throw InvalidInputError("range needs at least one step: " + spec);
    std::vector<double> v(steps);
    for (int i = 0; i < steps; ++i)
      v[i] = (steps == 1) ? lo : lo + (hi - lo) * i / (steps - 1);
    return v;
  }
  try {
    return {std::stod(spec)};
  } catch (...) {
    throw InvalidInputError("cannot parse range: " + spec);
  }
}

// ---------------------------------------------------------------------------
// recover
// ---------------------------------------------------------------------------

struct RecoverArgs {
  std::string signal_path;
  int N = 0;
  int M = 0;  // 0 = N
  bool fourier = true;
  std::vector<int> plant;  // P,K
  std::uint64_t seed = 1;
  int bandwidth = 0;
  std::uint64_t phi_seed = 0;
  bool strict = false;
  bool exhaustive = false;
  bool dual = false;
  int max_order = -1;
  long k_max = -1;
  std::uint64_t budget = UINT64_MAX;
  int jobs = 1;
  ToleranceConfig tol;
  OutputOptions out;
};

int run_recover(const RecoverArgs& a) {
  DictionaryConfig config;
  std::optional<SparseSignal> planted;
  std::vector<cdouble> y;

  if (!a.signal_path.empty()) {
    std::ifstream f(a.signal_path);
    if (!f) throw InvalidInputError("cannot open signal file: " + a.signal_path);
    json j = json::parse(f);
    Fixture fx = fixture_from_json(j);
    config = std::move(fx.config);
    planted = std::move(fx.signal);
    y = fx.y ? std::move(*fx.y) : synthesize(config, *planted);
  } else {
    if (a.N < 1) throw InvalidInputError("recover: --N is required without --signal");
    const int M = a.M > 0 ? a.M : a.N;
    if (!a.fourier)
      throw InvalidInputError("recover: only Fourier dictionaries can be built from "
                              "flags; use --signal for general nodes");
    config = build_fourier_frame(a.N, M);
    if (a.bandwidth > 0) {
      Rng rng(a.phi_seed != 0 ? a.phi_seed : derive_seed(a.seed, 0xba17d));
      config.phi = BandedMatrix::random(a.N, a.bandwidth, rng);
      config.validate();
    }
    if (a.plant.size() != 2)
      throw InvalidInputError("recover: --plant P,K is required without --signal");
    planted = sample_signal(config, a.plant[0], a.plant[1], a.seed);
    y = synthesize(config, *planted);
  }

  RecoverOptions opts;
  opts.strict = a.strict;
  opts.early_exit = !a.exhaustive;
  opts.dual_pass = a.dual;
  opts.max_order = a.max_order;
  opts.k_max = a.k_max;
  opts.window_budget = a.budget;
  opts.jobs = a.jobs;
  opts.tol = a.tol;

  RecoveryResult result = recover(y, config, opts);

  json report = result_to_json(result);
  report["config"] = config_to_json(config);
  if (planted) {
    report["planted"] = signal_to_json(*planted);
    const Solution* hit = result.find(*planted);
    report["planted_recovered"] = (hit != nullptr);
  }
  report["y"] = complex_vector_to_json(y);
  json opt_echo;
  opt_echo["strict"] = opts.strict;
  opt_echo["early_exit"] = opts.early_exit;
  opt_echo["dual_pass"] = opts.dual_pass;
  opt_echo["max_order"] = opts.max_order;
  opt_echo["k_max"] = opts.k_max;
  opt_echo["jobs"] = opts.jobs;
  opt_echo["seed"] = a.seed;
  opt_echo["tol_fit"] = opts.tol.fit;
  opt_echo["tol_snap"] = opts.tol.node_snap;
  opt_echo["tol_residual"] = opts.tol.residual_sparsity;
  opt_echo["tol_merge"] = opts.tol.root_merge;
  report["options"] = std::move(opt_echo);
  stamp(report, a.out);
  emit(a.out, report.dump(2));

  if (result.status == RecoveryStatus::recovered) return kExitOk;
  return result.budget_exhausted ? kExitBudget : kExitNoSolution;
}

// ---------------------------------------------------------------------------
// prob
// ---------------------------------------------------------------------------

struct ProbArgs {
  long N = 0, K = 0, s = 0;
  std::string method = "auto";
  bool circular = false;
  OutputOptions out;
};

int run_prob(const ProbArgs& a) {
  long N = a.N, K = a.K;
  if (a.circular) {
    if (K < 1) throw UndefinedCircularError("prob: --circular requires K >= 1");
    N -= 1;
    K -= 1;
  }
  ExactProbability p;
  if (a.method == "exact")
    p = h_exact(N, K, a.s);
  else if (a.method == "altsum")
    p = h_altsum(N, K, a.s);
  else if (a.method == "dft")
    p = h_dft(N, K, a.s);
  else if (a.method == "auto")
    p = h_auto(N, K, a.s);
  else
    throw InvalidInputError("prob: unknown method " + a.method);

  json j = probability_to_json(p);
  j["N"] = a.N;
  j["K"] = a.K;
  j["s"] = a.s;
  j["circular"] = a.circular;
  stamp(j, a.out);
  emit(a.out, j.dump(2));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
  long N = 0, K = 0;
  long trials = 5000;
  long s = -1;  // -1 = whole distribution as CSV
  bool circular = false;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string format = "csv";
  OutputOptions out;
};

int run_simulate(const SimulateArgs& a) {
  if (a.N < 1 || a.K < 0 || a.K > a.N)
    throw InvalidInputError("simulate: need 0 <= K <= N, N >= 1");
  if (a.circular && a.K < 1)
    throw UndefinedCircularError("simulate: circular gap needs K >= 1");
  if (a.trials < 0) throw InvalidInputError("simulate: negative trial count");

  // histogram of the max gap; per-trial RNG streams keep this independent of
  // the worker count
  std::vector<std::uint64_t> hist(a.N + 2, 0);
  const int jobs = std::max(1, a.jobs);
  std::vector<std::vector<std::uint64_t>> partial(jobs,
                                                  std::vector<std::uint64_t>(a.N + 2, 0));
  std::atomic<long> next{0};
  auto worker = [&](int t) {
    SubsetSampler sampler(static_cast<std::uint32_t>(a.N));
    for (;;) {
      const long trial = next.fetch_add(1);
      if (trial >= a.trials) break;
      Rng rng(derive_seed(a.seed, static_cast<std::uint64_t>(trial)));
      auto support = sampler(static_cast<std::uint32_t>(a.K), rng);
      std::vector<int> sup(support.begin(), support.end());
      const GapProfile prof = gap_profile(sup, static_cast<int>(a.N));
      const long g = a.circular ? prof.circular_max_gap() : prof.max_gap;
      ++partial[t][static_cast<std::size_t>(g)];
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (int t = 0; t < jobs; ++t)
    for (std::size_t g = 0; g < hist.size(); ++g) hist[g] += partial[t][g];

  const std::vector<std::pair<std::string, std::string>> cfg = {
      {"command", "simulate"},
      {"N", std::to_string(a.N)},
      {"K", std::to_string(a.K)},
      {"trials", std::to_string(a.trials)},
      {"seed", std::to_string(a.seed)},
      {"circular", a.circular ? "true" : "false"},
  };

  if (a.s >= 0 || a.format == "json") {
    const long s = (a.s >= 0) ? a.s : a.N - a.K + 1;
    std::uint64_t count = 0;
    for (long g = 0; g < s && g < static_cast<long>(hist.size()); ++g) count += hist[g];
    json j;
    j["N"] = a.N;
    j["K"] = a.K;
    j["s"] = s;
    j["circular"] = a.circular;
    j["trials"] = a.trials;
    j["count"] = count;
    j["empirical"] = a.trials > 0 ? static_cast<double>(count) / a.trials : 0.0;
    j["seed"] = a.seed;
    stamp(j, a.out);
    emit(a.out, j.dump(2));
    return kExitOk;
  }

  std::ostringstream os;
  os << csv_preamble(a.out, cfg);
  os << "s,count,trials,empirical\n";
  std::uint64_t cum = 0;
  const long s_max = a.N - a.K + 1;
  for (long s = 1; s <= s_max + 1; ++s) {
    cum += hist[static_cast<std::size_t>(s - 1)];
    os << s << "," << cum << "," << a.trials << ","
       << fmt_double(a.trials > 0 ? static_cast<double>(cum) / a.trials : 0.0) << "\n";
  }
  emit(a.out, os.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// phase
// ---------------------------------------------------------------------------

struct PhaseArgs {
  double delta = 1.0;
  std::string alpha_spec = "0.05:0.95:19";
  std::string beta_spec = "0.05:2.0:40";
  std::string figure;
  long N = 100000;
  long trials = 100;
  std::uint64_t seed = 1;
  int jobs = 1;
  OutputOptions out;
};

int run_phase(PhaseArgs a) {
  if (!a.figure.empty()) {
    if (a.figure == "1a") {
      a.delta = 1.0;
      a.alpha_spec = "0.05:0.95:19";
      a.beta_spec = "0.05:2.0:40";
    } else if (a.figure == "1b") {
      a.delta = 0.6;
      a.alpha_spec = "0.5:12.0:24";
      a.beta_spec = "0.05:2.0:40";
    } else {
      throw InvalidInputError("phase: unknown figure preset " + a.figure);
    }
  }
  const std::vector<double> alphas = parse_range(a.alpha_spec);
  const std::vector<double> betas = parse_range(a.beta_spec);
  const auto grid = phase_grid(a.delta, alphas, betas, a.N, a.trials, a.seed, a.jobs);

  const std::vector<std::pair<std::string, std::string>> cfg = {
      {"command", "phase"},
      {"delta", fmt_double(a.delta)},
      {"alpha", a.alpha_spec},
      {"beta", a.beta_spec},
      {"N", std::to_string(a.N)},
      {"trials", std::to_string(a.trials)},
      {"seed", std::to_string(a.seed)},
  };
  std::ostringstream os;
  os << csv_preamble(a.out, cfg);
  os << "alpha,beta,delta,N,K,P,trials,successes,beta_c,degenerate\n";
  for (const PhasePoint& pt : grid)
    os << fmt_double(pt.alpha) << "," << fmt_double(pt.beta) << ","
       << fmt_double(pt.delta) << "," << pt.N << "," << pt.K << "," << pt.P << ","
       << pt.trials << "," << pt.successes << "," << fmt_double(pt.beta_c) << ","
       << (pt.degenerate ? 1 : 0) << "\n";
  emit(a.out, os.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// coherence
// ---------------------------------------------------------------------------

struct CoherenceArgs {
  int N = 0;
  int M = 0;  // 0 = N
  bool union_identity = false;
  OutputOptions out;
};

int run_coherence(const CoherenceArgs& a) {
  if (a.N < 1) throw InvalidInputError("coherence: --N is required");
  const int M = a.M > 0 ? a.M : a.N;
  json j;
  j["N"] = a.N;
  j["M"] = M;
  if (a.union_identity) {
    // [I_N, F_N]
    const DictionaryConfig c = build_fourier_frame(a.N, a.N);
    Eigen::MatrixXcd D(a.N, 2 * a.N);
    D.leftCols(a.N) = Eigen::MatrixXcd::Identity(a.N, a.N);
    D.rightCols(a.N) = psi_matrix(c);
    j["dictionary"] = "union-identity-fourier";
    j["mu"] = mutual_coherence(D);
  } else {
    const DictionaryConfig c = build_fourier_frame(a.N, M);
    j["dictionary"] = "fourier-frame";
    j["mu"] = mutual_coherence(psi_matrix(c));
    j["lower_bound"] = fourier_frame_coherence_bound(a.N, M);
    if (M > a.N)
      j["limit"] = fourier_frame_coherence_limit(static_cast<double>(M) / a.N);
  }
  stamp(j, a.out);
  emit(a.out, j.dump(2));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prosparse: sparse recovery in Vandermonde + banded dictionaries"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value config file");

  RecoverArgs rec;
  CLI::App* c_rec = app.add_subcommand("recover", "Run the recovery sweep");
  c_rec->add_option("--signal", rec.signal_path, "JSON fixture with config and signal");
  c_rec->add_option("--N", rec.N, "Signal length");
  c_rec->add_option("--M", rec.M, "Dictionary width (default N)");
  c_rec->add_flag("--fourier,!--no-fourier", rec.fourier, "Fourier frame nodes");
  c_rec->add_option("--plant", rec.plant, "Plant a random (P,K)-sparse signal")
      ->delimiter(',')
      ->expected(0, 2);
  c_rec->add_option("--seed", rec.seed, "RNG seed")->envname("PROSPARSE_SEED");
  c_rec->add_option("--bandwidth", rec.bandwidth, "Random banded Phi bandwidth");
  c_rec->add_option("--phi-seed", rec.phi_seed, "Seed for the random banded Phi");
  c_rec->add_flag("--strict", rec.strict, "Accept only provably unique (P,K) pairs");
  c_rec->add_flag("--exhaustive", rec.exhaustive, "Collect all solutions (no early exit)");
  c_rec->add_flag("--dual", rec.dual, "Also sweep the conjugated spectrum");
  c_rec->add_option("--max-order", rec.max_order, "Highest exponential order swept");
  c_rec->add_option("--k-max", rec.k_max, "Residual sparsity cap");
  c_rec->add_option("--budget", rec.budget, "Window evaluation budget");
  c_rec->add_option("--jobs", rec.jobs, "Worker threads");
  c_rec->add_option("--tol-fit", rec.tol.fit, "Solution fit tolerance (x ||y||)");
  c_rec->add_option("--tol-snap", rec.tol.node_snap, "Node snap tolerance");
  c_rec->add_option("--tol-residual", rec.tol.residual_sparsity,
                    "Residual spike threshold (x max|y|)");
  c_rec->add_option("--tol-merge", rec.tol.root_merge, "Root merge tolerance");
  c_rec->add_option("--tol-zero", rec.tol.zero_threshold, "Zero coefficient threshold");
  add_output_options(c_rec, rec.out);

  ProbArgs prob;
  CLI::App* c_prob = app.add_subcommand("prob", "Max-gap distribution P(gap < s)");
  c_prob->add_option("--N", prob.N, "Ambient size")->required();
  c_prob->add_option("--K", prob.K, "Support size")->required();
  c_prob->add_option("--s", prob.s, "Gap threshold")->required();
  c_prob->add_option("--method", prob.method, "auto|exact|dft|altsum");
  c_prob->add_flag("--circular", prob.circular, "Circular max gap");
  add_output_options(c_prob, prob.out);

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "Monte Carlo max-gap distribution");
  c_sim->add_option("--N", sim.N, "Ambient size")->required();
  c_sim->add_option("--K", sim.K, "Support size")->required();
  c_sim->add_option("--trials", sim.trials, "Trial count");
  c_sim->add_option("--s", sim.s, "Report a single threshold as JSON");
  c_sim->add_flag("--circular", sim.circular, "Circular max gap");
  c_sim->add_option("--seed", sim.seed, "RNG seed")->envname("PROSPARSE_SEED");
  c_sim->add_option("--jobs", sim.jobs, "Worker threads");
  c_sim->add_option("--format", sim.format, "csv|json");
  add_output_options(c_sim, sim.out);

  PhaseArgs ph;
  CLI::App* c_ph = app.add_subcommand("phase", "Phase-diagram success grid");
  c_ph->add_option("--delta", ph.delta, "Scaling exponent in (0, 1]");
  c_ph->add_option("--alpha", ph.alpha_spec, "Grid lo:hi:steps (or single value)");
  c_ph->add_option("--beta", ph.beta_spec, "Grid lo:hi:steps (or single value)");
  c_ph->add_option("--figure", ph.figure, "Preset: 1a or 1b");
  c_ph->add_option("--N", ph.N, "Signal length");
  c_ph->add_option("--trials", ph.trials, "Trials per grid point");
  c_ph->add_option("--seed", ph.seed, "RNG seed")->envname("PROSPARSE_SEED");
  c_ph->add_option("--jobs", ph.jobs, "Worker threads");
  add_output_options(c_ph, ph.out);

  CoherenceArgs coh;
  CLI::App* c_coh = app.add_subcommand("coherence", "Mutual coherence diagnostics");
  c_coh->add_option("--N", coh.N, "Signal length")->required();
  c_coh->add_option("--M", coh.M, "Frame width (default N)");
  c_coh->add_flag("--union-identity", coh.union_identity,
                  "Coherence of [I_N, F_N] instead of the frame");
  add_output_options(c_coh, coh.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(c_rec)) return run_recover(rec);
    if (app.got_subcommand(c_prob)) return run_prob(prob);
    if (app.got_subcommand(c_sim)) return run_simulate(sim);
    if (app.got_subcommand(c_ph)) return run_phase(ph);
    if (app.got_subcommand(c_coh)) return run_coherence(coh);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
