// Command-line front end: batch verification, optimization, pruning and
// noise studies over the 90-state three-qubit exchange model.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "eoqc/builders.hpp"
#include "eoqc/noise.hpp"
#include "eoqc/optimize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eoqc;

namespace {

constexpr const char* kVersion = "0.1.0";

int default_threads() {
  if (const char* env = std::getenv("EOQC_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

// exit codes: 0 success, 1 verification failure, 2 usage error
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path executable_dir() {
  std::error_code ec;
  const fs::path self = fs::read_symlink("/proc/self/exe", ec);
  return ec ? fs::current_path() : self.parent_path();
}

fs::path resolve_data_dir(const std::string& override_dir) {
  if (!override_dir.empty()) {
    if (!fs::is_directory(override_dir)) throw UsageError("no such data dir: " + override_dir);
    return override_dir;
  }
  for (const fs::path cand : {executable_dir() / "data", fs::path("data")})
    if (fs::is_directory(cand)) return cand;
  throw UsageError("bundled data directory not found; pass --data-dir");
}

void ensure_writable(const fs::path& p, bool force) {
  if (fs::exists(p) && !force)
    throw UsageError("refusing to overwrite " + p.string() + " (use --force)");
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_manifest(const fs::path& out_path, const std::string& subcommand,
                    const json& config, double wall_seconds, bool force) {
  json m;
  m["subcommand"] = subcommand;
  m["config"] = config;
  m["version"] = kVersion;
  m["wall_time_seconds"] = wall_seconds;
  const fs::path mp = out_path.string() + ".manifest.json";
  ensure_writable(mp, force);
  std::ofstream(mp) << m.dump(2) << '\n';
}

json report_to_json(const FidelityReport& r) {
  return {{"fidelity_d24", r.fidelity_d24},
          {"infidelity_d24", 1 - r.fidelity_d24},
          {"j_t_re", r.j_t_re},
          {"leakage_norm", r.leakage_norm},
          {"unitary", r.unitary},
          {"unitarity_dev", r.unitarity_dev},
          {"block_max_dev", r.block_max_dev}};
}

class TraceFile {
 public:
  TraceFile() = default;
  explicit TraceFile(const fs::path& p, bool force) {
    if (p.empty()) return;
    ensure_writable(p, force);
    os_.open(p);
  }
  TraceSink sink() {
    if (!os_.is_open()) return {};
    return [this](const TracePoint& t) {
      os_ << json{{"iteration", t.iteration}, {"j_t_re", t.j_t_re}, {"pulses", t.pulses}}
                 .dump()
          << '\n';
    };
  }

 private:
  std::ofstream os_;
};

// ---------------------------------------------------------------------------

int cmd_basis_check(const std::string& dump_path, bool force) {
  const EoModel model;
  const auto& basis = model.basis();
  bool ok = true;

  // orthonormality in the product space
  const Eigen::MatrixXd gram =
      model.product_basis().transpose() * model.product_basis();
  const double dev = (gram - Eigen::MatrixXd::Identity(kDim, kDim)).cwiseAbs().maxCoeff();
  std::cout << "orthonormality: max |<m|n> - delta| = " << dev
            << (dev < 1e-12 ? "  [pass]" : "  [FAIL]") << '\n';
  ok &= dev < 1e-12;

  const auto sectors = basis_sectors(basis);
  static constexpr std::array<int, 10> expected = {10, 18, 9, 5, 18, 10, 5, 9, 5, 1};
  bool counts_ok = sectors.size() == expected.size();
  std::cout << "sector counts:";
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    std::cout << ' ' << sectors[i].count;
    counts_ok &= i < expected.size() && sectors[i].count == expected[i];
  }
  std::cout << (counts_ok ? "  [pass]" : "  [FAIL]") << '\n';
  ok &= counts_ok;

  // generator algebra
  double worst = 0;
  for (int l = 1; l <= 8; ++l) {
    const auto& h = model.generator(l);
    worst = std::max(worst, (h * h + h).cwiseAbs().maxCoeff());
    worst = std::max(worst, (h - h.transpose()).cwiseAbs().maxCoeff());
  }
  std::cout << "generator algebra: max |H^2+H|, |H-H^T| = " << worst
            << (worst < 1e-12 ? "  [pass]" : "  [FAIL]") << '\n';
  ok &= worst < 1e-12;

  std::cout << basis.size() << " states, " << sectors.size() << " sectors, "
            << (ok ? "all checks pass" : "CHECKS FAILED") << '\n';

  if (!dump_path.empty()) {
    ensure_writable(dump_path, force);
    std::ofstream os(dump_path);
    dump_basis_csv(basis, os);
    std::cout << "wrote " << basis.size() << " rows to " << dump_path << '\n';
  }
  return ok ? 0 : 1;
}

int cmd_verify(const fs::path& seq_path, const std::string& target_name,
               const std::string& json_out, bool force) {
  const EoModel model;
  const PulseSequence seq = load_sequence(seq_path);
  const auto [pulses, steps] = count_pulses(seq);
  const Eigen::MatrixXcd u = propagate(seq, model);

  const TargetGate target = make_target(target_name, model);
  const FidelityReport rep = fidelity_report(u, target);

  json out;
  out["sequence"] = seq_path.string();
  out["target"] = target_name;
  out["pulses"] = pulses;
  out["steps"] = steps;
  out["report"] = report_to_json(rep);

  if (target_name == "toffoli" || target_name.rfind("toffoli", 0) == 0) {
    json perms = json::array();
    double best = -1;
    std::string best_name;
    for (const char* t : {"toffoli:A", "toffoli:B", "toffoli:C"}) {
      const auto r = fidelity_report(u, make_target(t, model));
      perms.push_back({{"target", t}, {"fidelity_d24", r.fidelity_d24}});
      if (r.fidelity_d24 > best) {
        best = r.fidelity_d24;
        best_name = t;
      }
    }
    out["toffoli_assignments"] = perms;
    out["best_assignment"] = best_name;
    out["best_infidelity"] = 1 - best;
  }

  const auto sections = derive_toffoli_sections(seq);
  if (!sections.empty()) {
    json js = json::array();
    int idx = 0;
    for (const auto& s : sections) {
      int count = 0;
      for (int i = s.first_step; i <= s.last_step; ++i)
        count += seq.steps[static_cast<std::size_t>(i - 1)].active_count();
      js.push_back({{"label", s.label},
                    {"first_step", s.first_step},
                    {"last_step", s.last_step},
                    {"pulses", count}});
      ++idx;
    }
    out["sections"] = js;
  }

  const std::string text = out.dump(2);
  std::cout << text << '\n';
  if (!json_out.empty()) {
    ensure_writable(json_out, force);
    std::ofstream(json_out) << text << '\n';
  }
  return 1 - rep.fidelity_d24 <= 1e-6 ? 0 : 1;
}

int cmd_optimize(const std::string& target_name, int steps, int seeds,
                 const std::string& method, double lr, int iterations, double epsilon,
                 double lambda, int max_iterations, double init_range, bool sequential,
                 const fs::path& out, const fs::path& trace_path, bool force,
                 json& manifest_cfg) {
  const EoModel model;
  const TargetGate target = make_target(target_name, model);

  TraceFile trace(trace_path, force);
  auto sink = trace.sink();

  double best_j = std::numeric_limits<double>::infinity();
  ControlGrid best_grid;
  bool any_converged = false;
  json per_seed = json::array();

  for (int s = 0; s < seeds; ++s) {
    const std::uint64_t seed = derive_seed(0, 0, static_cast<std::uint64_t>(s));
    const ControlGrid init = random_initial_grid(steps, init_range, seed);
    double j = 0;
    bool conv = false;
    ControlGrid grid;
    if (method == "grape") {
      GrapeConfig cfg;
      cfg.learning_rate = lr;
      cfg.iterations = iterations;
      GrapeResult r = grape_optimize(model, target, init, cfg, sink);
      j = r.final_infidelity;
      grid = std::move(r.grid);
    } else if (method == "krotov") {
      KrotovConfig cfg;
      cfg.epsilon = epsilon;
      cfg.lambda = lambda;
      cfg.max_iterations = iterations > 0 ? iterations : max_iterations;
      cfg.sequential_updates = sequential;
      KrotovResult r = krotov_optimize(model, target, init, cfg, sink);
      j = r.final_j_t_re;
      conv = r.converged;
      grid = std::move(r.grid);
    } else {
      throw UsageError("unknown method '" + method + "'");
    }
    per_seed.push_back({{"seed", s}, {"j_t_re", j}, {"converged", conv}});
    any_converged |= conv;
    if (j < best_j) {
      best_j = j;
      best_grid = std::move(grid);
    }
  }

  PulseSequence seq = grid_to_sequence(best_grid);
  seq.name = target_name + "-" + method;
  ensure_writable(out, force);
  save_sequence(seq, out);
  manifest_cfg["results"] = per_seed;
  manifest_cfg["best_j_t_re"] = best_j;
  manifest_cfg["converged"] = any_converged;
  std::cout << "best J_T,re = " << best_j << (any_converged ? " (converged)" : "")
            << ", wrote " << out << '\n';
  return 0;
}

int cmd_jenga(const fs::path& input, double epsilon, std::uint64_t seed, double lambda,
              int budget, const fs::path& out, const fs::path& log_path, bool force,
              json& manifest_cfg) {
  const EoModel model;
  const TargetGate target = make_target("toffoli", model);
  const PulseSequence seq = load_sequence(input);
  const ControlGrid grid = sequence_to_grid(seq);

  const double j0 = grid_j_t_re(model, target, grid);
  if (j0 >= epsilon) {
    std::cerr << "input sequence is above the threshold: J_T,re = " << j0
              << " >= " << epsilon << '\n';
    return 1;
  }

  JkConfig cfg;
  cfg.krotov.epsilon = epsilon;
  cfg.krotov.lambda = lambda;
  cfg.inner_max_iterations = budget;

  std::ofstream log;
  if (!log_path.empty()) {
    ensure_writable(log_path, force);
    log.open(log_path);
  }

  const JkResult r = jenga_prune(model, target, grid, cfg, seed);
  if (log.is_open())
    for (const auto& h : r.state.history)
      log << json{{"control", h.control},
                  {"step", h.step},
                  {"accepted", h.accepted},
                  {"j_t_re", h.j_after},
                  {"iterations", h.iterations}}
                 .dump()
          << '\n';

  PulseSequence pruned = r.sequence;
  ensure_writable(out, force);
  save_sequence(pruned, out);

  const auto [np, ns] = count_pulses(pruned);
  const auto [ip, is] = count_pulses(seq);
  const double jf = grid_j_t_re(model, target, r.grid);
  std::cout << "pruned " << ip << " pulses / " << is << " steps -> " << np
            << " pulses / " << ns << " steps; final J_T,re = " << jf << '\n';
  manifest_cfg["input_pulses"] = ip;
  manifest_cfg["output_pulses"] = np;
  manifest_cfg["input_steps"] = is;
  manifest_cfg["output_steps"] = ns;
  manifest_cfg["final_j_t_re"] = jf;
  return 0;
}

int cmd_noise_sweep(const std::vector<std::string>& seq_paths, const std::string& kind_name,
                    const std::string& target_name, double grid_min, double grid_max,
                    int grid_points, int samples, std::uint64_t seed, const fs::path& out,
                    bool force, json& manifest_cfg) {
  const EoModel model;
  const TargetGate target = make_target(target_name, model);
  const NoiseKind kind = kind_name == "charge" ? NoiseKind::charge : NoiseKind::crosstalk;
  if (kind_name != "charge" && kind_name != "crosstalk")
    throw UsageError("kind must be charge or crosstalk");

  NoiseConfig cfg;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.threads = default_threads();
  const auto grid = log_grid(grid_min, grid_max, grid_points);

  ensure_writable(out, force);
  std::ofstream os(out);
  os << "sequence,kind,mean,sample_count,mean_infidelity,stderr\n";
  os.precision(17);
  json summary = json::array();
  for (const auto& path : seq_paths) {
    const PulseSequence seq = load_sequence(path);
    const auto sweep = noise_sweep(seq, model, target, kind, grid, cfg);
    for (const auto& r : sweep.rows)
      os << seq.name << ',' << kind_name << ',' << r.mean_strength << ',' << r.samples
         << ',' << r.mean_infidelity << ',' << r.std_error << '\n';
    summary.push_back({{"sequence", seq.name}, {"points", sweep.rows.size()}});
    std::cout << "swept " << seq.name << " over " << grid.size() << " points\n";
  }
  manifest_cfg["curves"] = summary;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exchange-only three-qubit gate compiler and verifier"};
  app.require_subcommand(1);

  bool force = false;
  app.add_flag("--force", force, "allow overwriting existing output files");

  // basis-check
  auto* basis = app.add_subcommand("basis-check", "build the 90-state basis and verify it");
  std::string dump_path;
  basis->add_option("--dump", dump_path, "write the basis as CSV");

  // verify
  auto* verify = app.add_subcommand("verify", "propagate a sequence and report fidelity");
  std::string seq_path, target_name = "toffoli", json_out, data_dir;
  verify->add_option("sequence", seq_path, "sequence CSV file")->required();
  verify->add_option("--target", target_name, "target gate name");
  verify->add_option("--json", json_out, "also write the report to this file");
  verify->add_option("--data-dir", data_dir, "bundled data directory (for bare names)");

  // optimize
  auto* opt = app.add_subcommand("optimize", "run GRAPE or Krotov from random seeds");
  std::string opt_target = "toffoli", method = "krotov";
  int steps = 55, seeds = 1, iterations = 0, max_iterations = 5000;
  double lr = 0.02, epsilon = 1e-8, lambda = 2.0, init_range = 0.5;
  bool sequential = false;
  std::string opt_out = "optimized.csv", opt_trace;
  opt->add_option("--target", opt_target, "target gate name");
  opt->add_option("--steps", steps, "number of time steps");
  opt->add_option("--seeds", seeds, "number of random initializations");
  opt->add_option("--method", method, "grape or krotov");
  opt->add_option("--lr", lr, "GRAPE learning rate");
  opt->add_option("--iterations", iterations, "iteration count (0 = krotov default)");
  opt->add_option("--epsilon", epsilon, "convergence threshold on J_T,re");
  opt->add_option("--lambda", lambda, "Krotov inverse step width");
  opt->add_option("--max-iterations", max_iterations, "Krotov iteration cap");
  opt->add_option("--init-range", init_range, "uniform initial range [-r, r]");
  opt->add_flag("--sequential", sequential, "sequential per-step control updates");
  opt->add_option("--out", opt_out, "output sequence CSV");
  opt->add_option("--trace", opt_trace, "JSON-lines trace file");

  // jenga
  auto* jenga = app.add_subcommand("jenga", "prune a converged sequence");
  std::string jenga_in, jenga_out = "pruned.csv", jenga_log;
  double jenga_eps = 1e-8, jenga_lambda = 2.0;
  int budget = 2000;
  std::uint64_t jenga_seed = 1;
  jenga->add_option("input", jenga_in, "converged sequence CSV")->required();
  jenga->add_option("--epsilon", jenga_eps, "infidelity threshold");
  jenga->add_option("--seed", jenga_seed, "removal-order seed");
  jenga->add_option("--lambda", jenga_lambda, "inner Krotov inverse step width");
  jenga->add_option("--budget", budget, "inner Krotov iteration budget");
  jenga->add_option("--out", jenga_out, "pruned sequence CSV");
  jenga->add_option("--log", jenga_log, "JSON-lines removal log");

  // noise-sweep
  auto* noise = app.add_subcommand("noise-sweep", "Monte Carlo noise robustness sweep");
  std::vector<std::string> noise_seqs;
  std::string noise_kind = "charge", noise_target = "toffoli", noise_out = "sweep.csv";
  double gmin = 1e-8, gmax = 1e-1;
  int gpoints = 8, samples = 100;
  std::uint64_t noise_seed = 1;
  noise->add_option("sequences", noise_seqs, "sequence CSV file(s)")->required();
  noise->add_option("--kind", noise_kind, "charge or crosstalk");
  noise->add_option("--target", noise_target, "target gate name");
  noise->add_option("--grid-min", gmin, "lowest mean noise strength");
  noise->add_option("--grid-max", gmax, "highest mean noise strength");
  noise->add_option("--grid-points", gpoints, "log-spaced grid size");
  noise->add_option("--samples", samples, "Monte Carlo samples per point");
  noise->add_option("--seed", noise_seed, "master seed");
  noise->add_option("--out", noise_out, "output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto wall = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  try {
    if (basis->parsed()) return cmd_basis_check(dump_path, force);
    if (verify->parsed()) {
      fs::path p = seq_path;
      if (!fs::exists(p) && p.is_relative() && p == p.filename())
        p = resolve_data_dir(data_dir) / p;
      return cmd_verify(p, target_name, json_out, force);
    }
    if (opt->parsed()) {
      json cfg{{"target", opt_target}, {"steps", steps},         {"seeds", seeds},
               {"method", method},     {"lr", lr},               {"iterations", iterations},
               {"epsilon", epsilon},   {"lambda", lambda},       {"init_range", init_range},
               {"sequential", sequential}, {"max_iterations", max_iterations}};
      const int rc = cmd_optimize(opt_target, steps, seeds, method, lr, iterations, epsilon,
                                  lambda, max_iterations, init_range, sequential, opt_out,
                                  opt_trace, force, cfg);
      write_manifest(opt_out, "optimize", cfg, wall(), force);
      return rc;
    }
    if (jenga->parsed()) {
      json cfg{{"input", jenga_in}, {"epsilon", jenga_eps},   {"seed", jenga_seed},
               {"budget", budget},  {"lambda", jenga_lambda}};
      const int rc = cmd_jenga(jenga_in, jenga_eps, jenga_seed, jenga_lambda, budget,
                               jenga_out, jenga_log, force, cfg);
      if (rc == 0) write_manifest(jenga_out, "jenga", cfg, wall(), force);
      return rc;
    }
    if (noise->parsed()) {
      json cfg{{"sequences", noise_seqs}, {"kind", noise_kind},     {"target", noise_target},
               {"grid_min", gmin},        {"grid_max", gmax},       {"grid_points", gpoints},
               {"samples", samples},      {"seed", noise_seed}};
      const int rc = cmd_noise_sweep(noise_seqs, noise_kind, noise_target, gmin, gmax,
                                     gpoints, samples, noise_seed, noise_out, force, cfg);
      if (rc == 0) write_manifest(noise_out, "noise-sweep", cfg, wall(), force);
      return rc;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
