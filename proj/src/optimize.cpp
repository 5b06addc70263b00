#include "eoqc/optimize.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eoqc {

namespace {

constexpr double kPi = std::numbers::pi;

StepParity flip(StepParity p) {
  return p == StepParity::odd ? StepParity::even : StepParity::odd;
}

// The 24 computational columns split by total-spin sector: blocks 1,2 live
// in the 42-dim sector, block 3 in the 48-dim one. Propagating the sectors
// separately roughly quarters the work.
struct StateBlock {
  Eigen::MatrixXcd a;  // 42 x 16
  Eigen::MatrixXcd b;  // 48 x 8
};

struct SectorGen {
  Eigen::MatrixXcd a, b;
  Eigen::VectorXd da, db;
  bool diagonal = false;
};

// per-model cache of sector-split generators
const std::array<SectorGen, 8>& sector_generators(const EoModel& model) {
  static thread_local const EoModel* cached_model = nullptr;
  static thread_local std::array<SectorGen, 8> cache;
  if (cached_model != &model) {
    for (int l = 1; l <= 8; ++l) {
      const auto& g = model.generator(l);
      SectorGen sg;
      sg.a = g.topLeftCorner(kDimS12, kDimS12).cast<Complex>();
      sg.b = g.bottomRightCorner(kDimS32, kDimS32).cast<Complex>();
      sg.diagonal = model.generator_diagonal(l);
      if (sg.diagonal) {
        sg.da = g.topLeftCorner(kDimS12, kDimS12).diagonal();
        sg.db = g.bottomRightCorner(kDimS32, kDimS32).diagonal();
      }
      cache[l - 1] = std::move(sg);
    }
    cached_model = &model;
  }
  return cache;
}

StateBlock initial_states() {
  StateBlock s;
  s.a = Eigen::MatrixXcd::Zero(kDimS12, 16);
  s.b = Eigen::MatrixXcd::Zero(kDimS32, 8);
  const auto& idx = computational_indices();
  for (int k = 0; k < 16; ++k) s.a(idx[k], k) = 1.0;
  for (int k = 0; k < 8; ++k) s.b(idx[16 + k] - kDimS12, k) = 1.0;
  return s;
}

StateBlock target_states(const TargetGate& t) {
  StateBlock s;
  s.a = t.columns.topRows(kDimS12).leftCols(16);
  s.b = t.columns.bottomRows(kDimS32).rightCols(8);
  return s;
}

// X -= c * H X  for one channel
void apply_gen(const SectorGen& g, Complex c, StateBlock& x) {
  if (g.diagonal) {
    x.a -= c * (g.da.asDiagonal() * x.a).eval();
    x.b -= c * (g.db.asDiagonal() * x.b).eval();
  } else {
    x.a -= c * (g.a * x.a).eval();
    x.b -= c * (g.b * x.b).eval();
  }
}

// U(step) X or U(step)^+ X
void apply_step(const std::array<SectorGen, 8>& gens, const ControlGrid& grid,
                int step, StateBlock& x, bool dagger = false) {
  for (int ctrl = 0; ctrl < 4; ++ctrl) {
    const double p = grid.values(step, ctrl);
    if (p == 0.0) continue;
    Complex c = std::polar(1.0, kPi * p) - 1.0;
    if (dagger) c = std::conj(c);
    apply_gen(gens[grid.channel(step, ctrl) - 1], c, x);
  }
}

// Im sum_k <x_k| H |y_k>
double im_overlap(const SectorGen& g, const StateBlock& x, const StateBlock& y) {
  Complex s = 0;
  if (g.diagonal) {
    s += (x.a.conjugate().cwiseProduct(g.da.asDiagonal() * y.a)).sum();
    s += (x.b.conjugate().cwiseProduct(g.db.asDiagonal() * y.b)).sum();
  } else {
    s += (x.a.conjugate().cwiseProduct(g.a * y.a)).sum();
    s += (x.b.conjugate().cwiseProduct(g.b * y.b)).sum();
  }
  return s.imag();
}

// Re sum_k <target_k | phi_k>
double re_overlap(const StateBlock& tgt, const StateBlock& phi) {
  const Complex s = (tgt.a.conjugate().cwiseProduct(phi.a)).sum() +
                    (tgt.b.conjugate().cwiseProduct(phi.b)).sum();
  return s.real();
}

double j_t_re_of(const StateBlock& tgt, const StateBlock& phi) {
  return 1.0 - re_overlap(tgt, phi) / kCompDim;
}

StateBlock propagate_grid(const std::array<SectorGen, 8>& gens, const ControlGrid& grid) {
  StateBlock phi = initial_states();
  for (int n = 0; n < grid.length(); ++n) apply_step(gens, grid, n, phi);
  return phi;
}

}  // namespace

StepParity ControlGrid::parity_of(int step) const {
  return step % 2 == 0 ? first_parity : flip(first_parity);
}

int ControlGrid::channel(int step, int ctrl) const {
  return parity_channels(parity_of(step))[ctrl];
}

int ControlGrid::live_pulses() const {
  int n = 0;
  for (int i = 0; i < values.rows(); ++i)
    for (int j = 0; j < 4; ++j) n += (!mask(i, j) && values(i, j) != 0.0);
  return n;
}

void ControlGrid::enforce_mask() {
  for (int i = 0; i < values.rows(); ++i)
    for (int j = 0; j < 4; ++j)
      if (mask(i, j)) values(i, j) = 0.0;
}

ControlGrid make_grid(int length, StepParity first_parity) {
  if (first_parity == StepParity::none)
    throw std::invalid_argument("grid parity must be odd or even");
  ControlGrid g;
  g.values = Eigen::MatrixXd::Zero(length, 4);
  g.mask = Eigen::Matrix<bool, Eigen::Dynamic, 4>::Constant(length, 4, false);
  g.first_parity = first_parity;
  return g;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master ^ mix(a)) ^ mix(~b));
}

ControlGrid random_initial_grid(int length, double range, std::uint64_t seed,
                                const std::optional<Eigen::Matrix<bool, Eigen::Dynamic, 4>>& mask) {
  ControlGrid g = make_grid(length);
  if (mask) {
    if (mask->rows() != length)
      throw std::invalid_argument("mask length mismatch");
    g.mask = *mask;
  }
  std::mt19937_64 rng(seed);
  for (int i = 0; i < length; ++i)
    for (int j = 0; j < 4; ++j) {
      const double v = range * (2.0 * uniform01(rng) - 1.0);
      if (!g.mask(i, j)) g.values(i, j) = v;
    }
  return g;
}

PulseSequence grid_to_sequence(const ControlGrid& grid) {
  PulseSequence seq;
  seq.steps.reserve(grid.length());
  for (int n = 0; n < grid.length(); ++n) {
    PulseStep st;
    for (int ctrl = 0; ctrl < 4; ++ctrl) st.p[grid.channel(n, ctrl) - 1] = grid.values(n, ctrl);
    seq.steps.push_back(st);
  }
  return seq;
}

ControlGrid sequence_to_grid(const PulseSequence& seq) {
  const int n = static_cast<int>(seq.steps.size());
  if (n == 0) throw std::invalid_argument("cannot grid an empty sequence");
  // first non-empty step fixes the alternation phase
  StepParity first = StepParity::none;
  for (int i = 0; i < n; ++i) {
    const StepParity p = seq.steps[i].parity();
    if (p == StepParity::none) continue;
    first = i % 2 == 0 ? p : flip(p);
    break;
  }
  if (first == StepParity::none) first = StepParity::odd;

  ControlGrid g = make_grid(n, first);
  for (int i = 0; i < n; ++i) {
    const StepParity expected = g.parity_of(i);
    const StepParity actual = seq.steps[i].parity();
    if (actual != StepParity::none && actual != expected)
      throw std::invalid_argument("sequence does not alternate parity at step " +
                                  std::to_string(i + 1));
    const auto& chans = parity_channels(expected);
    for (int ctrl = 0; ctrl < 4; ++ctrl) g.values(i, ctrl) = seq.steps[i].p[chans[ctrl] - 1];
  }
  return g;
}

double grid_j_t_re(const EoModel& model, const TargetGate& target, const ControlGrid& grid) {
  const auto& gens = sector_generators(model);
  return j_t_re_of(target_states(target), propagate_grid(gens, grid));
}

// ---------------------------------------------------------------------------
// GRAPE
// ---------------------------------------------------------------------------

Eigen::MatrixXd grape_gradient(const EoModel& model, const TargetGate& target,
                               const ControlGrid& grid) {
  const auto& gens = sector_generators(model);
  const int L = grid.length();
  const double d = kCompDim;

  std::vector<StateBlock> fwd(L + 1);
  fwd[0] = initial_states();
  for (int n = 0; n < L; ++n) {
    fwd[n + 1] = fwd[n];
    apply_step(gens, grid, n, fwd[n + 1]);
  }
  std::vector<StateBlock> bwd(L + 1);
  bwd[L] = target_states(target);
  for (int n = L - 1; n >= 0; --n) {
    bwd[n] = bwd[n + 1];
    apply_step(gens, grid, n, bwd[n], /*dagger=*/true);
  }

  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(L, 4);
  for (int n = 0; n < L; ++n)
    for (int ctrl = 0; ctrl < 4; ++ctrl) {
      if (grid.mask(n, ctrl)) continue;
      const auto& g = gens[grid.channel(n, ctrl) - 1];
      grad(n, ctrl) = (kPi / d) * im_overlap(g, bwd[n + 1], fwd[n + 1]);
    }
  return grad;
}

GrapeResult grape_optimize(const EoModel& model, const TargetGate& target,
                           const ControlGrid& initial, const GrapeConfig& config,
                           const TraceSink& sink) {
  const auto& gens = sector_generators(model);
  const StateBlock tgt = target_states(target);

  GrapeResult res;
  res.grid = initial;
  res.grid.enforce_mask();

  double j = j_t_re_of(tgt, propagate_grid(gens, res.grid));
  res.trace.push_back(j);
  if (sink) sink({0, j, res.grid.live_pulses()});

  for (int it = 1; it <= config.iterations; ++it) {
    const Eigen::MatrixXd grad = grape_gradient(model, target, res.grid);
    res.grid.values += config.learning_rate * grad;
    res.grid.values = res.grid.values.cwiseMax(-config.p_max).cwiseMin(config.p_max);
    res.grid.enforce_mask();
    j = j_t_re_of(tgt, propagate_grid(gens, res.grid));
    res.trace.push_back(j);
    if (sink) sink({it, j, res.grid.live_pulses()});
  }
  res.final_infidelity = j;
  return res;
}

GrapeResult grape_optimize(const EoModel& model, const TargetGate& target, int length,
                           double learning_rate, int iterations, std::uint64_t seed,
                           const TraceSink& sink) {
  GrapeConfig cfg;
  cfg.learning_rate = learning_rate;
  cfg.iterations = iterations;
  return grape_optimize(model, target, random_initial_grid(length, 0.5, seed), cfg, sink);
}

// ---------------------------------------------------------------------------
// Krotov
// ---------------------------------------------------------------------------

namespace {

// one full Krotov iteration; returns J_T,re after the sweep
double krotov_sweep(const std::array<SectorGen, 8>& gens, const StateBlock& tgt,
                    ControlGrid& grid, const KrotovConfig& cfg) {
  const int L = grid.length();
  const double chi_scale = 1.0 / (2.0 * kCompDim);

  // backward pass under current controls; store chi at every step start
  std::vector<StateBlock> chi(L + 1);
  chi[L] = tgt;
  chi[L].a *= chi_scale;
  chi[L].b *= chi_scale;
  for (int n = L - 1; n >= 0; --n) {
    chi[n] = chi[n + 1];
    apply_step(gens, grid, n, chi[n], /*dagger=*/true);
  }

  // forward update sweep
  StateBlock phi = initial_states();
  for (int n = 0; n < L; ++n) {
    if (cfg.sequential_updates) {
      // refresh the effective co-state through the partially updated step
      for (int ctrl = 0; ctrl < 4; ++ctrl) {
        if (grid.mask(n, ctrl)) continue;
        StateBlock chi_eff = chi[n + 1];
        apply_step(gens, grid, n, chi_eff, /*dagger=*/true);
        const auto& g = gens[grid.channel(n, ctrl) - 1];
        const double dp = (kPi / cfg.lambda) * im_overlap(g, chi_eff, phi);
        grid.values(n, ctrl) =
            std::clamp(grid.values(n, ctrl) + dp, -cfg.p_max, cfg.p_max);
      }
    } else {
      std::array<double, 4> dp{};
      for (int ctrl = 0; ctrl < 4; ++ctrl) {
        if (grid.mask(n, ctrl)) continue;
        const auto& g = gens[grid.channel(n, ctrl) - 1];
        dp[ctrl] = (kPi / cfg.lambda) * im_overlap(g, chi[n], phi);
      }
      for (int ctrl = 0; ctrl < 4; ++ctrl)
        if (!grid.mask(n, ctrl))
          grid.values(n, ctrl) =
              std::clamp(grid.values(n, ctrl) + dp[ctrl], -cfg.p_max, cfg.p_max);
    }
    apply_step(gens, grid, n, phi);
  }
  return j_t_re_of(tgt, phi);
}

}  // namespace

KrotovResult krotov_optimize(const EoModel& model, const TargetGate& target,
                             const ControlGrid& initial, const KrotovConfig& config,
                             const TraceSink& sink) {
  for (int i = 0; i < initial.length(); ++i)
    for (int j = 0; j < 4; ++j)
      if (initial.mask(i, j) && initial.values(i, j) != 0.0)
        throw std::invalid_argument("initial grid has a nonzero masked entry");

  const auto& gens = sector_generators(model);
  const StateBlock tgt = target_states(target);

  KrotovResult res;
  res.grid = initial;

  double j = j_t_re_of(tgt, propagate_grid(gens, res.grid));
  res.trace.push_back(j);
  if (sink) sink({0, j, res.grid.live_pulses()});
  if (j < config.epsilon) {
    res.converged = true;
    res.final_j_t_re = j;
    return res;
  }

  for (int it = 1; it <= config.max_iterations; ++it) {
    j = krotov_sweep(gens, tgt, res.grid, config);
    res.trace.push_back(j);
    res.iterations = it;
    if (sink) sink({it, j, res.grid.live_pulses()});
    if (j < config.epsilon) {
      res.converged = true;
      break;
    }
    if (it >= config.stall_window) {
      const double past = res.trace[res.trace.size() - 1 - config.stall_window];
      if (past - j < config.stall_improvement * std::abs(past)) {
        res.stalled = true;
        break;
      }
    }
  }
  res.final_j_t_re = j;
  return res;
}

double krotov_first_update(const EoModel& model, const TargetGate& target,
                           const ControlGrid& grid, const KrotovConfig& config) {
  const auto& gens = sector_generators(model);
  const StateBlock tgt = target_states(target);
  ControlGrid g = grid;
  const Eigen::MatrixXd before = g.values;
  (void)krotov_sweep(gens, tgt, g, config);
  for (int n = 0; n < g.length(); ++n)
    for (int ctrl = 0; ctrl < 4; ++ctrl)
      if (!g.mask(n, ctrl)) return g.values(n, ctrl) - before(n, ctrl);
  throw std::invalid_argument("grid is fully masked");
}

// ---------------------------------------------------------------------------
// Jenga-Krotov
// ---------------------------------------------------------------------------

JkResult jenga_prune(const EoModel& model, const TargetGate& target,
                     const ControlGrid& converged, const JkConfig& config,
                     std::uint64_t seed, const TraceSink& sink) {
  const double j0 = grid_j_t_re(model, target, converged);
  if (j0 >= config.krotov.epsilon)
    throw std::invalid_argument("jenga_prune: input grid is not converged (J_T,re = " +
                                std::to_string(j0) + ")");

  const int L = converged.length();
  JkResult res;
  res.grid = converged;
  res.state.removal_matrix.resize(4, L);

  // -1 = unexplored; masked or already-zero entries are removed a priori
  std::vector<std::pair<int, int>> unexplored;
  for (int n = 0; n < L; ++n)
    for (int ctrl = 0; ctrl < 4; ++ctrl) {
      if (converged.mask(n, ctrl) || converged.values(n, ctrl) == 0.0) {
        res.state.removal_matrix(ctrl, n) = 0;
        res.grid.mask(n, ctrl) = true;
        res.grid.values(n, ctrl) = 0.0;
      } else {
        res.state.removal_matrix(ctrl, n) = -1;
        unexplored.emplace_back(ctrl, n);
      }
    }
  res.state.n_ex = static_cast<int>(unexplored.size());

  KrotovConfig inner = config.krotov;
  inner.max_iterations = config.inner_max_iterations;

  std::mt19937_64 rng(seed);
  int done = 0;
  while (!unexplored.empty()) {
    const std::size_t pick =
        static_cast<std::size_t>(uniform01(rng) * static_cast<double>(unexplored.size()));
    const auto [ctrl, step] = unexplored[std::min(pick, unexplored.size() - 1)];
    unexplored.erase(unexplored.begin() + static_cast<std::ptrdiff_t>(
                                              std::min(pick, unexplored.size() - 1)));

    const ControlGrid before = res.grid;
    res.grid.values(step, ctrl) = 0.0;
    res.grid.mask(step, ctrl) = true;

    const KrotovResult kr = krotov_optimize(model, target, res.grid, inner);

    JkRemoval rec{ctrl, step, false, kr.final_j_t_re, kr.iterations};
    if (kr.converged) {
      res.grid = kr.grid;
      res.state.removal_matrix(ctrl, step) = 0;
      res.state.n_ex -= 1;
      rec.accepted = true;
    } else {
      res.grid = before;
      res.state.removal_matrix(ctrl, step) = 1;
    }
    res.state.history.push_back(rec);
    ++done;
    if (sink) sink({done, kr.final_j_t_re, res.state.n_ex});
  }

  // drop all-zero steps
  PulseSequence full = grid_to_sequence(res.grid);
  PulseSequence compact;
  compact.name = "jk-pruned";
  for (const auto& st : full.steps)
    if (st.active_count() > 0) compact.steps.push_back(st);
  res.sequence = std::move(compact);
  return res;
}

}  // namespace eoqc
