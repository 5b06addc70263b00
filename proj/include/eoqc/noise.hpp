#pragma once

#include <cstdint>
#include <iosfwd>

#include "eoqc/sequence.hpp"

namespace eoqc {

enum class NoiseKind { charge, crosstalk };

struct NoiseConfig {
  double relative_sigma = 0.1;  // std = relative_sigma * mean
  int samples = 100;
  std::uint64_t seed = 0;
  int threads = 1;              // Monte Carlo fan-out; determinism is per-sample
};

// Step propagator with quasi-static charge noise alpha and crosstalk beta:
// generator pi * sum_active (1+alpha) p_l [H_l + beta (H_left + H_right)],
// neighbours beyond the chain ends dropped, exponentiated by Hermitian
// eigendecomposition (crosstalk breaks in-step commutativity).
Eigen::MatrixXcd noisy_step_propagator(const PulseStep& step, const EoModel& model,
                                       double alpha, double beta);

Eigen::MatrixXcd noisy_propagate(const PulseSequence& seq, const EoModel& model,
                                 double alpha, double beta);

struct MonteCarloResult {
  double mean_infidelity = 0;
  double std_error = 0;
  int samples = 0;
};

// Per sample draws one alpha ~ N(mean, sigma) (or beta), shared by every
// pulse of the sequence; infidelity is 1 - F with the d = 24 formula.
// Deterministic given (config.seed, point_index, sample index).
MonteCarloResult monte_carlo_infidelity(const PulseSequence& seq, const EoModel& model,
                                        const TargetGate& target, NoiseKind kind,
                                        double mean, const NoiseConfig& config,
                                        std::uint64_t point_index = 0);

struct NoiseSweepRow {
  double mean_strength = 0;
  double mean_infidelity = 0;
  double std_error = 0;
  int samples = 0;
};

struct NoiseSweepResult {
  NoiseKind kind;
  std::string sequence_name;
  std::vector<NoiseSweepRow> rows;
};

// Paired sweeps under common random numbers: point i, sample s uses the
// same draw for both sequences.
std::pair<NoiseSweepResult, NoiseSweepResult> robustness_sweep(
    const PulseSequence& seq_a, const PulseSequence& seq_b, const EoModel& model,
    const TargetGate& target, NoiseKind kind, const std::vector<double>& grid,
    const NoiseConfig& config);

NoiseSweepResult noise_sweep(const PulseSequence& seq, const EoModel& model,
                             const TargetGate& target, NoiseKind kind,
                             const std::vector<double>& grid, const NoiseConfig& config);

std::vector<double> log_grid(double lo, double hi, int points);

// CSV: kind,mean,sample_count,mean_infidelity,stderr
void write_sweep_csv(const NoiseSweepResult& sweep, std::ostream& os);

}  // namespace eoqc
