#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "eoqc/coupling.hpp"

namespace eoqc {

// Nine quantum numbers of one three-qubit basis state.
struct CoupledLabel {
  HalfInt s_tot;
  HalfInt s_z_tot;
  int s_ab = 0;
  HalfInt s_a, s_b, s_c;
  int s_a12 = 0, s_b12 = 0, s_c12 = 0;
};

struct BasisState {
  CoupledLabel label;
  Eigen::VectorXd amps;  // dim 512, bit i <-> spin i+1, 0 = up
};

// Internal quantum numbers of one three-spin qubit multiplet.
struct QubitSpecies {
  HalfInt s;
  int s12;
};

// The three multiplets of one encoded qubit occupying spins
// [first_spin, first_spin+3): (s=1/2, s12=0), (1/2, 1), (3/2, 1).
// The inner pair (spins first+1, first+2) couples first; the outer spin
// first_spin is the second coupling partner.
std::vector<std::pair<QubitSpecies, Multiplet>> build_qubit_multiplets(int first_spin);

// The eight single-qubit eigenstates |1>..|8>, supplement numbering.
std::array<CoupledState, 8> build_single_qubit_states(int first_spin = 1);

// All two-qubit multiplets of qubits A (spins 1-3) and B (4-6), A coupled first.
struct TwoQubitSpecies {
  int s_ab;
  HalfInt s_a, s_b;
  int s_a12, s_b12;
};
std::vector<std::pair<TwoQubitSpecies, Multiplet>> build_two_qubit_multiplets();

// The ordered 90-state basis. Sector order follows (s_tot, s_c, s_ab)
// lexicographically; within a sector states are ordered by
// (s_a, s_b, s_a12, s_b12, s_c12). States 1..42 have s_tot = 1/2,
// 43..90 have s_tot = 3/2, always at maximal s_z.
std::vector<BasisState> build_three_qubit_basis();

// Table of the ten (s_tot, s_ab, s_c) sectors with their state counts,
// in basis order.
struct SectorInfo {
  HalfInt s_tot;
  int s_ab;
  HalfInt s_c;
  int count;
  bool computational;
};
std::vector<SectorInfo> basis_sectors(const std::vector<BasisState>& basis);

// CSV dump: label, nine quantum numbers, then the nonzero product-basis
// amplitudes as index:value pairs.
void dump_basis_csv(const std::vector<BasisState>& basis, std::ostream& os);

}  // namespace eoqc
