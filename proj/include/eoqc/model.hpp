#pragma once

#include <complex>
#include <memory>
#include <string>

#include "eoqc/basis.hpp"

namespace eoqc {

using Complex = std::complex<double>;
using Matrix8cd = Eigen::Matrix<Complex, 8, 8>;

// Dimensions of the two total-spin sectors: states 0..41 have s_tot = 1/2,
// 42..89 have s_tot = 3/2. Exchange dynamics never mixes them.
inline constexpr int kDim = 90;
inline constexpr int kDimS12 = 42;
inline constexpr int kDimS32 = 48;
inline constexpr int kCompDim = 24;

// 0-based positions of the 24 computational states (supplement labels
// 1-8, 11-18, 43-50), logical order |abc> with c fastest inside each block.
const std::array<int, 24>& computational_indices();

// Gate to synthesize or verify: 24 orthonormal target columns over the
// 90-state basis. For gates acting identically in the three computational
// blocks, `logical` holds the 8x8 and `block_identical` is true; the
// encoded SWAPs are not of that form and carry their exact columns only.
struct TargetGate {
  std::string name;
  Matrix8cd logical = Matrix8cd::Identity();
  Eigen::MatrixXcd columns;  // 90 x 24
  bool block_identical = true;
};

// The reduced model: ordered 90-state basis and the eight exchange
// generators H_{l,l+1} = (sigma_l . sigma_{l+1})/4 - 1/4 as 90x90 matrices.
// -H is the projector onto the pair-singlet subspace, so
// exp(-i pi p H) = I - (e^{i pi p} - 1) H exactly.
// Immutable after construction; safe for concurrent reads.
class EoModel {
 public:
  EoModel();

  const std::vector<BasisState>& basis() const { return basis_; }
  // l in 1..8 labels the pair (l, l+1)
  const Eigen::MatrixXd& generator(int l) const;
  const Eigen::MatrixXcd& generator_c(int l) const;
  // true for the intra-qubit pairs (2,3), (5,6), (8,9), diagonal in this basis
  bool generator_diagonal(int l) const;

  // basis vectors as a 512 x 90 matrix (column k = state k)
  const Eigen::MatrixXd& product_basis() const { return product_basis_; }

 private:
  std::vector<BasisState> basis_;
  Eigen::MatrixXd product_basis_;
  std::array<Eigen::MatrixXd, 8> gen_;
  std::array<Eigen::MatrixXcd, 8> gen_c_;
  std::array<bool, 8> diag_{};
};

// g applied with identical matrix elements in each of the three blocks;
// throws if g is not unitary within 1e-10.
TargetGate embed_logical_gate(const Matrix8cd& g);

// Logical Toffoli with controls A,B and target C (|110> <-> |111>).
TargetGate toffoli_target();

// Named registry: identity, toffoli, toffoli:{A|B|C} (explicit target qubit),
// cnot:AB, cnot:BC, swap:AB, swap:BC, t-gate:{A|B|C}, tdg:{A|B|C},
// h-gate:{A|B|C}. The swap targets are the exact encoded block swaps
// (computed from the spin permutation operator) and are not block-identical.
TargetGate make_target(const std::string& name, const EoModel& model);
std::vector<std::string> target_names();

}  // namespace eoqc
