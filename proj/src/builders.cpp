#include "eoqc/builders.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace eoqc {

namespace {

constexpr double kPi = std::numbers::pi;

PulseStep one_pulse(int channel, double p) {
  PulseStep st;
  st.p[channel - 1] = p;
  return st;
}

void append(PulseSequence& seq, const PulseSequence& gate, const std::string& label) {
  const int first = static_cast<int>(seq.steps.size()) + 1;
  seq.steps.insert(seq.steps.end(), gate.steps.begin(), gate.steps.end());
  seq.sections.push_back({label, first, static_cast<int>(seq.steps.size())});
}

PulseSequence reversed_negated(const PulseSequence& seq) {
  PulseSequence out;
  out.steps.assign(seq.steps.rbegin(), seq.steps.rend());
  for (auto& st : out.steps)
    for (auto& v : st.p) v = -v;
  return out;
}

}  // namespace

PulseSequence build_table1_gate(SingleGate kind, Qubit q) {
  const double theta =
      1 + std::acos((2 - std::sqrt(2.0) + std::sqrt(70 + 36 * std::sqrt(2.0))) / 12) / kPi;
  const double phi1 =
      std::acos(-1 + std::sqrt(2.0) + (-2 + std::sqrt(2.0)) / std::sqrt(3.0)) / kPi;
  const double phi2 = std::acos((-1 + std::sqrt(2.0) + std::sqrt(6.0)) / 3) / kPi;

  std::array<double, 4> ps{};  // p1..p4
  switch (kind) {
    case SingleGate::T:
    case SingleGate::Tdg:
      ps = {theta, 5.0 / 4 - theta, theta, 1 - theta};
      break;
    case SingleGate::H:
      ps = {phi1 - 1, 1 - phi2, 1 + phi2, 2 - phi1};
      break;
  }

  const int inner = 3 * static_cast<int>(q) + 2;  // (2,3), (5,6), (8,9)
  const int outer = 3 * static_cast<int>(q) + 1;  // (1,2), (4,5), (7,8)
  PulseSequence seq;
  seq.steps = {one_pulse(inner, ps[3]), one_pulse(outer, ps[2]),
               one_pulse(inner, ps[1]), one_pulse(outer, ps[0])};
  const char* names[] = {"T", "Tdg", "H"};
  seq.name = std::string(names[static_cast<int>(kind)]) + ":" + "ABC"[static_cast<int>(q)];
  if (kind == SingleGate::Tdg) {
    auto rev = reversed_negated(seq);
    rev.name = seq.name;
    return rev;
  }
  return seq;
}

PulseSequence encoded_swap(QubitPair pair) {
  const int base = pair == QubitPair::AB ? 0 : 3;
  // 1-2-3-2-1 diamond of adjacent transpositions
  PulseSequence seq;
  seq.name = pair == QubitPair::AB ? "swap:AB" : "swap:BC";
  auto step = [&](std::initializer_list<int> channels) {
    PulseStep st;
    for (int c : channels) st.p[base + c - 1] = 1.0;
    seq.steps.push_back(st);
  };
  step({3});
  step({2, 4});
  step({1, 3, 5});
  step({2, 4});
  step({3});
  return seq;
}

DirReport build_dir_toffoli(const std::filesystem::path& fw_path, const EoModel& model) {
  return build_dir_toffoli(load_sequence(fw_path), model);
}

DirReport build_dir_toffoli(const PulseSequence& fw_cnot, const EoModel& model) {
  for (const auto& st : fw_cnot.steps)
    for (int l = 6; l <= 8; ++l)
      if (st.p[l - 1] != 0.0)
        throw std::invalid_argument(
            "encoded-CNOT layout uses channels beyond p56; expected a two-qubit "
            "sequence on the first six spins");

  // self-check: the supplied layout must implement cnot:AB
  const auto check = fidelity_report(propagate(fw_cnot, model), make_target("cnot:AB", model));
  if (1 - check.fidelity_d24 > 1e-8)
    throw std::invalid_argument("encoded-CNOT layout fails its self-check: infidelity = " +
                                std::to_string(1 - check.fidelity_d24));

  PulseSequence cnot_ab = fw_cnot;
  PulseSequence cnot_bc;
  cnot_bc.steps = fw_cnot.steps;
  for (auto& st : cnot_bc.steps) {
    PulseStep shifted;
    for (int l = 1; l <= 5; ++l) shifted.p[l + 3 - 1] = st.p[l - 1];
    st = shifted;
  }

  const PulseSequence swap_bc = encoded_swap(QubitPair::BC);
  const PulseSequence h_c = build_table1_gate(SingleGate::H, Qubit::C);
  const PulseSequence t_a = build_table1_gate(SingleGate::T, Qubit::A);
  const PulseSequence t_b = build_table1_gate(SingleGate::T, Qubit::B);
  const PulseSequence t_c = build_table1_gate(SingleGate::T, Qubit::C);
  const PulseSequence tdg_b = build_table1_gate(SingleGate::Tdg, Qubit::B);
  const PulseSequence tdg_c = build_table1_gate(SingleGate::Tdg, Qubit::C);

  // standard Toffoli circuit; CNOT(A->C) = SWAP(BC) CNOT(A->B) SWAP(BC)
  DirReport rep;
  PulseSequence& seq = rep.sequence;
  seq.name = "dir-toffoli";
  append(seq, h_c, "H:C");
  append(seq, cnot_bc, "CNOT:BC");
  append(seq, tdg_c, "Tdg:C");
  append(seq, swap_bc, "SWAP:BC");
  append(seq, cnot_ab, "CNOT:AB");
  append(seq, swap_bc, "SWAP:BC");
  append(seq, t_c, "T:C");
  append(seq, cnot_bc, "CNOT:BC");
  append(seq, tdg_c, "Tdg:C");
  append(seq, swap_bc, "SWAP:BC");
  append(seq, cnot_ab, "CNOT:AB");
  append(seq, swap_bc, "SWAP:BC");
  append(seq, t_b, "T:B");
  append(seq, t_c, "T:C");
  append(seq, h_c, "H:C");
  append(seq, cnot_ab, "CNOT:AB");
  append(seq, t_a, "T:A");
  append(seq, tdg_b, "Tdg:B");
  append(seq, cnot_ab, "CNOT:AB");

  std::tie(rep.pulses, rep.steps) = count_pulses(seq);
  return rep;
}

std::vector<SectionSpan> derive_toffoli_sections(const PulseSequence& seq) {
  const int n = static_cast<int>(seq.steps.size());
  auto touches = [&](int i, std::initializer_list<int> channels) {
    for (int l : channels)
      if (seq.steps[i].p[l - 1] != 0.0) return true;
    return false;
  };
  auto ab_only = [&](int i) {
    return seq.steps[i].active_count() > 0 && !touches(i, {6, 7, 8});
  };

  int u1_end = 0;
  while (u1_end < n && ab_only(u1_end)) ++u1_end;
  int u5_start = n;
  while (u5_start > u1_end && ab_only(u5_start - 1)) --u5_start;

  // longest interior run with no A-interior channel
  int best_len = 0, best_first = 0;
  int i = u1_end;
  while (i < u5_start) {
    if (!touches(i, {1, 2})) {
      int j = i;
      while (j < u5_start && !touches(j, {1, 2})) ++j;
      if (j - i > best_len) {
        best_len = j - i;
        best_first = i;
      }
      i = j;
    } else {
      ++i;
    }
  }

  if (u1_end == 0 || u5_start == n || best_len == 0) return {};
  const int u3_first = best_first, u3_last = best_first + best_len;  // [first, last)
  if (u3_first <= u1_end || u3_last >= u5_start) return {};
  return {{"U1", 1, u1_end},
          {"U2", u1_end + 1, u3_first},
          {"U3", u3_first + 1, u3_last},
          {"U4", u3_last + 1, u5_start},
          {"U5", u5_start + 1, n}};
}

}  // namespace eoqc
