#pragma once

#include "eoqc/sequence.hpp"

namespace eoqc {

enum class Qubit { A = 0, B = 1, C = 2 };
enum class QubitPair { AB, BC };
enum class SingleGate { T, Tdg, H };

// Four-pulse single-qubit gate, closed-form pulse values. The slot acting
// on the qubit's inner pair ((2,3)/(5,6)/(8,9), the channel diagonal in the
// coupled basis) carries p2 and p4; the outer slot ((1,2)/(4,5)/(7,8))
// carries p1 and p3. Steps are emitted in application order (p4 first).
PulseSequence build_table1_gate(SingleGate kind, Qubit q);

// Exact encoded swap of two adjacent qubits: nine p = 1 pulses (physical
// SWAPs) scheduled into five parity-alternating steps.
PulseSequence encoded_swap(QubitPair pair);

// Counts reported by the direct-decomposition assembler.
struct DirReport {
  PulseSequence sequence;
  int pulses = 0;
  int steps = 0;
  // reference cost of the published decomposition this is compared against
  static constexpr int kReferencePulses = 216;
  static constexpr int kReferenceSteps = 162;
  bool matches_reference() const {
    return pulses == kReferencePulses && steps == kReferenceSteps;
  }
};

// Toffoli via direct decomposition: 2 H, 7 T/Tdg, 6 CNOT (non-adjacent ones
// wrapped in encoded swaps). The caller supplies the encoded-CNOT pulse
// layout (e.g. a Fong-Wandzura file) as a sequence on channels p12..p56
// implementing cnot:AB; it is validated against that target
// (infidelity <= 1e-8) before assembly. Per-gate sections are annotated.
DirReport build_dir_toffoli(const PulseSequence& fw_cnot, const EoModel& model);
DirReport build_dir_toffoli(const std::filesystem::path& fw_path, const EoModel& model);

// Five-section structure of a Toffoli pulse sequence, derived from the
// nonzero-channel pattern alone: U1 = maximal prefix of steps confined to
// qubits A,B; U5 = maximal such suffix; U3 = longest interior run of steps
// with no A-interior channel (p12, p23); U2, U4 = the remainders.
// Returns an empty vector when the pattern does not produce five sections.
std::vector<SectionSpan> derive_toffoli_sections(const PulseSequence& seq);

}  // namespace eoqc
