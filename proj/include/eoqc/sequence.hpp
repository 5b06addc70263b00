#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eoqc/model.hpp"

namespace eoqc {

inline constexpr double kDefaultPMax = 2.5;

enum class StepParity { none, odd, even };

// One piecewise-constant time step. Channel l-1 holds p for the pair
// (l, l+1); p = J*tau/pi, dimensionless. All nonzero entries of a valid
// step lie on one parity set: odd = {(2,3),(4,5),(6,7),(8,9)},
// even = {(1,2),(3,4),(5,6),(7,8)}.
struct PulseStep {
  std::array<double, 8> p{};

  // parity inferred from the nonzero pattern; throws on a mixed-parity step
  StepParity parity() const;
  int active_count() const;
  void validate(double p_max = kDefaultPMax) const;
};

// channels (1..8) of each parity set
const std::array<int, 4>& parity_channels(StepParity par);

struct SectionSpan {
  std::string label;
  int first_step = 0, last_step = 0;  // 1-based, inclusive
};

struct PulseSequence {
  std::vector<PulseStep> steps;
  std::string name;
  std::string source;
  std::vector<SectionSpan> sections;

  void validate(double p_max = kDefaultPMax) const;
};

// (nonzero pulse entries, number of time steps)
std::pair<int, int> count_pulses(const PulseSequence& seq);

// Sequence CSV: header "step,p12,p23,p34,p45,p56,p67,p78,p89", one row per
// time step, shortest round-trip decimal formatting. Load validates
// sequential 1-based step indices and per-row parity.
PulseSequence load_sequence(const std::filesystem::path& path);
void save_sequence(const PulseSequence& seq, const std::filesystem::path& path);

// U = prod over active pairs of [I - (e^{i pi p} - 1) H_pair]; the factors
// commute within a step, so this equals exp(-i pi sum p H).
Eigen::MatrixXcd step_propagator(const PulseStep& step, const EoModel& model);

// Right-to-left ordered product: steps[0] acts first.
Eigen::MatrixXcd propagate(const PulseSequence& seq, const EoModel& model);

struct FidelityReport {
  double fidelity_d24 = 0;    // (d + |Tr|^2)/(d(d+1)), d = 24, phase-insensitive
  double j_t_re = 0;          // 1 - Re(Tr)/24, phase-sensitive
  std::array<double, 3> block_max_dev{};  // entrywise vs target, per block
  double leakage_norm = 0;    // max over computational columns
  bool unitary = true;
  double unitarity_dev = 0;
};

FidelityReport fidelity_report(const Eigen::MatrixXcd& u, const TargetGate& target);

}  // namespace eoqc
