#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "eoqc/half_integer.hpp"

namespace eoqc {

// Contiguous run of spins [first, first+count), 1-based labels.
// Product amplitudes index the window with bit b <-> spin first+b, 0 = up.
struct SpinWindow {
  int first = 1;
  int count = 0;
  int dim() const { return 1 << count; }
};

// One angular-momentum eigenstate over a spin window, with real amplitudes
// (Clebsch-Gordan coefficients are real in the Condon-Shortley convention).
struct CoupledState {
  SpinWindow window;
  HalfInt j;
  HalfInt m;
  Eigen::VectorXd amps;
};

// All 2j+1 projections of one spin-j multiplet, keyed by twice(m).
struct Multiplet {
  HalfInt j;
  std::map<int, CoupledState> components;

  const CoupledState& at_m(HalfInt m) const;
  bool has_m(HalfInt m) const { return components.count(m.twice) != 0; }
};

// Tensor product of states on disjoint windows whose union is contiguous.
// The lower-numbered window supplies the lower index bits.
CoupledState tensor(const CoupledState& x, const CoupledState& y);

// Sum over CG(j1 m1; j2 m2 | J M) |first_m1> (x) |second_m2>. The argument
// order fixes the Condon-Shortley sign; windows fix the bit layout.
// Throws on triangle violation or when a needed m-component is missing.
CoupledState couple(const Multiplet& first, const Multiplet& second,
                    HalfInt J, HalfInt M);

// couple() for every M = -J..J
Multiplet couple_multiplet(const Multiplet& first, const Multiplet& second, HalfInt J);

// single spin-1/2 multiplet on one spin
Multiplet spin_half_multiplet(int spin);

}  // namespace eoqc
