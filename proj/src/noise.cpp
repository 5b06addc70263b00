#include "eoqc/noise.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "eoqc/optimize.hpp"

namespace eoqc {

namespace {

constexpr double kPi = std::numbers::pi;

// Box-Muller on the portable uniform; implementation-defined library
// distributions would break bit-identical reproducibility across platforms.
double normal_draw(std::mt19937_64& rng, double mean, double sigma) {
  double u1 = uniform01(rng);
  while (u1 == 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

double d24_infidelity(const Eigen::MatrixXcd& u, const TargetGate& target) {
  const auto& idx = computational_indices();
  Complex tr = 0;
  for (int k = 0; k < kCompDim; ++k) tr += target.columns.col(k).dot(u.col(idx[k]));
  const double d = kCompDim;
  return 1.0 - (d + std::norm(tr)) / (d * (d + 1));
}

}  // namespace

Eigen::MatrixXcd noisy_step_propagator(const PulseStep& step, const EoModel& model,
                                       double alpha, double beta) {
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(kDim, kDim);
  for (int l = 1; l <= 8; ++l) {
    const double p = step.p[l - 1];
    if (p == 0.0) continue;
    const double w = kPi * (1.0 + alpha) * p;
    gen += w * model.generator(l);
    if (beta != 0.0) {
      if (l - 1 >= 1) gen += w * beta * model.generator(l - 1);
      if (l + 1 <= 8) gen += w * beta * model.generator(l + 1);
    }
  }

  // sectorwise real-symmetric eigendecomposition, U = V exp(-i L) V^T
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(kDim, kDim);
  auto expose = [&](int off, int dim) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gen.block(off, off, dim, dim));
    Eigen::VectorXcd phases(dim);
    for (int i = 0; i < dim; ++i) phases[i] = std::polar(1.0, -es.eigenvalues()[i]);
    u.block(off, off, dim, dim) = es.eigenvectors().cast<Complex>() *
                                  phases.asDiagonal() *
                                  es.eigenvectors().transpose().cast<Complex>();
  };
  expose(0, kDimS12);
  expose(kDimS12, kDimS32);
  return u;
}

Eigen::MatrixXcd noisy_propagate(const PulseSequence& seq, const EoModel& model,
                                 double alpha, double beta) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(kDim, kDim);
  for (const auto& st : seq.steps) u = noisy_step_propagator(st, model, alpha, beta) * u;
  return u;
}

MonteCarloResult monte_carlo_infidelity(const PulseSequence& seq, const EoModel& model,
                                        const TargetGate& target, NoiseKind kind,
                                        double mean, const NoiseConfig& config,
                                        std::uint64_t point_index) {
  if (config.samples < 1) throw std::invalid_argument("samples must be >= 1");
  std::vector<double> vals(static_cast<std::size_t>(config.samples));

  auto run = [&](int s) {
    std::mt19937_64 rng(derive_seed(config.seed, point_index, static_cast<std::uint64_t>(s)));
    const double draw = normal_draw(rng, mean, config.relative_sigma * mean);
    const double alpha = kind == NoiseKind::charge ? draw : 0.0;
    const double beta = kind == NoiseKind::crosstalk ? draw : 0.0;
    vals[static_cast<std::size_t>(s)] =
        d24_infidelity(noisy_propagate(seq, model, alpha, beta), target);
  };

  const int nthreads = std::max(1, config.threads);
  if (nthreads == 1) {
    for (int s = 0; s < config.samples; ++s) run(s);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (int s = next++; s < config.samples; s = next++) run(s);
      });
    for (auto& th : pool) th.join();
  }

  MonteCarloResult r;
  r.samples = config.samples;
  double sum = 0, sq = 0;
  for (double v : vals) sum += v;
  r.mean_infidelity = sum / config.samples;
  for (double v : vals) sq += (v - r.mean_infidelity) * (v - r.mean_infidelity);
  if (config.samples > 1)
    r.std_error = std::sqrt(sq / (config.samples - 1.0)) / std::sqrt(double(config.samples));
  return r;
}

NoiseSweepResult noise_sweep(const PulseSequence& seq, const EoModel& model,
                             const TargetGate& target, NoiseKind kind,
                             const std::vector<double>& grid, const NoiseConfig& config) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1]) throw std::invalid_argument("grid must be strictly increasing");
  NoiseSweepResult out;
  out.kind = kind;
  out.sequence_name = seq.name;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto mc = monte_carlo_infidelity(seq, model, target, kind, grid[i], config, i);
    out.rows.push_back({grid[i], mc.mean_infidelity, mc.std_error, mc.samples});
  }
  return out;
}

std::pair<NoiseSweepResult, NoiseSweepResult> robustness_sweep(
    const PulseSequence& seq_a, const PulseSequence& seq_b, const EoModel& model,
    const TargetGate& target, NoiseKind kind, const std::vector<double>& grid,
    const NoiseConfig& config) {
  // common random numbers: both sweeps share (seed, point, sample) draws
  return {noise_sweep(seq_a, model, target, kind, grid, config),
          noise_sweep(seq_b, model, target, kind, grid, config)};
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (points < 2 || lo <= 0 || hi <= lo) throw std::invalid_argument("bad log grid");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] =
        std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1.0));
  return g;
}

void write_sweep_csv(const NoiseSweepResult& sweep, std::ostream& os) {
  os << "kind,mean,sample_count,mean_infidelity,stderr\n";
  const char* kind = sweep.kind == NoiseKind::charge ? "charge" : "crosstalk";
  os.precision(17);
  for (const auto& r : sweep.rows)
    os << kind << ',' << r.mean_strength << ',' << r.samples << ',' << r.mean_infidelity
       << ',' << r.std_error << '\n';
}

}  // namespace eoqc
