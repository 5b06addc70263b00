#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>

#include "eoqc/sequence.hpp"

namespace eoqc {

// Interleaved control grid: four controls per step, mapped onto that step's
// parity set. Step k (1-based) uses the odd set {(2,3),(4,5),(6,7),(8,9)}
// when k is odd, the even set otherwise; `first_parity` flips the phase so
// published sequences with the opposite alternation can be represented.
struct ControlGrid {
  Eigen::MatrixXd values;                      // L x 4
  Eigen::Matrix<bool, Eigen::Dynamic, 4> mask; // true = frozen at zero
  StepParity first_parity = StepParity::odd;

  int length() const { return static_cast<int>(values.rows()); }
  StepParity parity_of(int step) const;        // 0-based
  int channel(int step, int ctrl) const;       // 1..8
  int live_pulses() const;                     // nonzero unmasked entries
  void enforce_mask();
};

ControlGrid make_grid(int length, StepParity first_parity = StepParity::odd);

// i.i.d. uniform entries in [-range, range] on unmasked entries
ControlGrid random_initial_grid(int length, double range, std::uint64_t seed,
                                const std::optional<Eigen::Matrix<bool, Eigen::Dynamic, 4>>& mask = {});

PulseSequence grid_to_sequence(const ControlGrid& grid);
// requires strictly alternating per-step parity (empty steps take the
// alternation-consistent parity)
ControlGrid sequence_to_grid(const PulseSequence& seq);

struct TracePoint {
  int iteration = 0;
  double j_t_re = 0;
  int pulses = 0;
};

using TraceSink = std::function<void(const TracePoint&)>;

// ---------------------------------------------------------------------------
// GRAPE: gradient ascent on Phi = Re Tr[U_target^+ U(T)] / d over the
// 24-dimensional computational restriction, exact per-step gradient.
// ---------------------------------------------------------------------------
struct GrapeConfig {
  double learning_rate = 0.02;
  int iterations = 100;
  double p_max = kDefaultPMax;
};

struct GrapeResult {
  ControlGrid grid;
  std::vector<double> trace;  // J_T,re = 1 - Phi per iteration, trace[0] = initial
  double final_infidelity = 0;
};

GrapeResult grape_optimize(const EoModel& model, const TargetGate& target,
                           const ControlGrid& initial, const GrapeConfig& config,
                           const TraceSink& sink = {});
// convenience: seeded random start in [-0.5, 0.5]
GrapeResult grape_optimize(const EoModel& model, const TargetGate& target, int length,
                           double learning_rate, int iterations, std::uint64_t seed,
                           const TraceSink& sink = {});

// exact gradient of Phi at the given controls (for verification)
Eigen::MatrixXd grape_gradient(const EoModel& model, const TargetGate& target,
                               const ControlGrid& grid);

// ---------------------------------------------------------------------------
// Krotov's method over the same grid. Forward-propagates the 24
// computational states, backward-propagates co-states from
// chi_k(T) = |target_k> / (2N), and updates
//   dp = (S / lambda) * Im sum_k <chi_k| pi H_l |phi_k>
// step by step, re-propagating with the already-updated controls.
// The mask is the shape function: S = 1 on free entries, 0 on masked ones.
// ---------------------------------------------------------------------------
struct KrotovConfig {
  double epsilon = 1e-8;          // convergence threshold on J_T,re
  double lambda = 2.0;            // inverse step width
  int max_iterations = 5000;
  int stall_window = 50;          // iterations
  double stall_improvement = 1e-12;  // relative improvement threshold
  bool sequential_updates = false;   // default: simultaneous over the 4 controls
  double p_max = kDefaultPMax;
};

struct KrotovResult {
  ControlGrid grid;
  std::vector<double> trace;  // J_T,re; trace[0] = initial value
  bool converged = false;
  bool stalled = false;
  int iterations = 0;
  double final_j_t_re = 0;
};

KrotovResult krotov_optimize(const EoModel& model, const TargetGate& target,
                             const ControlGrid& initial, const KrotovConfig& config,
                             const TraceSink& sink = {});

// J_T,re of a grid without optimizing
double grid_j_t_re(const EoModel& model, const TargetGate& target, const ControlGrid& grid);

// first Krotov update of the first unmasked entry, for gradient checks
double krotov_first_update(const EoModel& model, const TargetGate& target,
                           const ControlGrid& grid, const KrotovConfig& config);

// ---------------------------------------------------------------------------
// Jenga-Krotov pruning. M is 4 x L over {-1 unexplored, 0 removed,
// 1 removal-failed}; entries masked from the start (including exact zeros
// of the input grid) are marked removed without an attempt. Each attempt
// zeroes one unexplored entry, re-runs Krotov with it masked, keeps the
// re-optimized grid on success and restores the full pre-attempt grid on
// failure. All-zero steps are deleted afterwards.
// ---------------------------------------------------------------------------
struct JkRemoval {
  int control = 0;   // 0..3 (row of M)
  int step = 0;      // 0..L-1 (column of M)
  bool accepted = false;
  double j_after = 0;
  int iterations = 0;
};

struct JkState {
  Eigen::Matrix<int, 4, Eigen::Dynamic> removal_matrix;  // 4 x L
  int n_ex = 0;                                          // live pulse count
  std::vector<JkRemoval> history;
};

struct JkConfig {
  KrotovConfig krotov;       // inner re-optimization settings
  int inner_max_iterations = 2000;
};

struct JkResult {
  PulseSequence sequence;    // compacted (all-zero steps removed)
  ControlGrid grid;          // final grid before compaction
  JkState state;
};

JkResult jenga_prune(const EoModel& model, const TargetGate& target,
                     const ControlGrid& converged, const JkConfig& config,
                     std::uint64_t seed, const TraceSink& sink = {});

// deterministic seed mixing for fan-out (Monte Carlo, multi-seed runs)
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);
// portable uniform double in [0, 1)
double uniform01(std::mt19937_64& rng);

}  // namespace eoqc
