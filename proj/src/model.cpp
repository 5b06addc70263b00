#include "eoqc/model.hpp"

#include <cmath>
#include <stdexcept>

namespace eoqc {

const std::array<int, 24>& computational_indices() {
  static const std::array<int, 24> idx = [] {
    std::array<int, 24> a{};
    int n = 0;
    for (int base : {0, 10, 42})
      for (int k = 0; k < 8; ++k) a[n++] = base + k;
    return a;
  }();
  return idx;
}

namespace {

// (sigma.sigma)/4 - 1/4 = (SWAP - 1)/2 applied to spins (l, l+1) of a
// 512-dim product vector
Eigen::VectorXd apply_pair_exchange(int l, const Eigen::VectorXd& v) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  const int b1 = l - 1, b2 = l;
  for (int idx = 0; idx < v.size(); ++idx) {
    if (v[idx] == 0.0) continue;
    const int s1 = (idx >> b1) & 1, s2 = (idx >> b2) & 1;
    if (s1 == s2) continue;
    out[idx] -= 0.5 * v[idx];
    out[idx ^ (1 << b1) ^ (1 << b2)] += 0.5 * v[idx];
  }
  return out;
}

}  // namespace

EoModel::EoModel() : basis_(build_three_qubit_basis()) {
  product_basis_.resize(512, kDim);
  for (int n = 0; n < kDim; ++n) product_basis_.col(n) = basis_[n].amps;

  for (int l = 1; l <= 8; ++l) {
    Eigen::MatrixXd hb(512, kDim);
    for (int n = 0; n < kDim; ++n) hb.col(n) = apply_pair_exchange(l, basis_[n].amps);
    Eigen::MatrixXd g = product_basis_.transpose() * hb;
    // closure check: the 90-dim space must be exactly invariant
    const double closure = (hb - product_basis_ * g).cwiseAbs().maxCoeff();
    if (closure > 1e-12)
      throw std::logic_error("exchange generator leaves the 90-state space");
    g = 0.5 * (g + g.transpose().eval());
    gen_[l - 1] = g;
    gen_c_[l - 1] = g.cast<Complex>();
    diag_[l - 1] = (g - Eigen::MatrixXd(g.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-13;
  }
}

const Eigen::MatrixXd& EoModel::generator(int l) const {
  if (l < 1 || l > 8) throw std::out_of_range("generator index must be in 1..8");
  return gen_[l - 1];
}

const Eigen::MatrixXcd& EoModel::generator_c(int l) const {
  if (l < 1 || l > 8) throw std::out_of_range("generator index must be in 1..8");
  return gen_c_[l - 1];
}

bool EoModel::generator_diagonal(int l) const {
  if (l < 1 || l > 8) throw std::out_of_range("generator index must be in 1..8");
  return diag_[l - 1];
}

TargetGate embed_logical_gate(const Matrix8cd& g) {
  if ((g.adjoint() * g - Matrix8cd::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("embed_logical_gate: matrix is not unitary");
  TargetGate t;
  t.logical = g;
  t.columns = Eigen::MatrixXcd::Zero(kDim, kCompDim);
  const auto& idx = computational_indices();
  for (int b = 0; b < 3; ++b)
    for (int j = 0; j < 8; ++j)
      for (int i = 0; i < 8; ++i) t.columns(idx[8 * b + i], 8 * b + j) = g(i, j);
  return t;
}

TargetGate toffoli_target() {
  Matrix8cd g = Matrix8cd::Identity();
  g(6, 6) = g(7, 7) = 0;
  g(6, 7) = g(7, 6) = 1;
  TargetGate t = embed_logical_gate(g);
  t.name = "toffoli";
  return t;
}

namespace {

Matrix8cd kron3(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b,
                const Eigen::Matrix2cd& c) {
  Matrix8cd g;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      g(i, j) = a((i >> 2) & 1, (j >> 2) & 1) * b((i >> 1) & 1, (j >> 1) & 1) *
                c(i & 1, j & 1);
  return g;
}

Matrix8cd single_qubit_embed(const Eigen::Matrix2cd& u, int qubit) {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  switch (qubit) {
    case 0: return kron3(u, id, id);
    case 1: return kron3(id, u, id);
    case 2: return kron3(id, id, u);
  }
  throw std::invalid_argument("qubit index");
}

Matrix8cd toffoli_logical(int target) {
  const int w[3] = {4, 2, 1};
  int ctrl = 0;
  for (int q = 0; q < 3; ++q)
    if (q != target) ctrl += w[q];
  Matrix8cd g = Matrix8cd::Identity();
  const int i1 = ctrl, i2 = ctrl + w[target];
  g(i1, i1) = g(i2, i2) = 0;
  g(i1, i2) = g(i2, i1) = 1;
  return g;
}

Matrix8cd cnot_logical(int control, int target) {
  const int w[3] = {4, 2, 1};
  Matrix8cd g = Matrix8cd::Zero();
  for (int j = 0; j < 8; ++j) {
    int i = j;
    if (j & w[control]) i ^= w[target];
    g(i, j) = 1;
  }
  return g;
}

// Exact encoded swap of two adjacent qubit blocks: the spin permutation
// operator restricted to the 90-state basis. Block-diagonal only for AB
// (with sign -1 on the S_AB = 0 block); the BC swap mixes the blocks.
TargetGate permutation_target(const EoModel& model, const std::array<int, 9>& perm) {
  const auto& B = model.product_basis();
  Eigen::MatrixXd PB(512, kDim);
  for (int n = 0; n < kDim; ++n) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(512);
    for (int idx = 0; idx < 512; ++idx) {
      if (B(idx, n) == 0.0) continue;
      int out = 0;
      for (int i = 0; i < 9; ++i) out |= ((idx >> i) & 1) << perm[i];
      v[out] += B(idx, n);
    }
    PB.col(n) = v;
  }
  const Eigen::MatrixXd P90 = B.transpose() * PB;

  TargetGate t;
  t.block_identical = false;
  t.columns = Eigen::MatrixXcd::Zero(kDim, kCompDim);
  const auto& idx = computational_indices();
  for (int k = 0; k < kCompDim; ++k) t.columns.col(k) = P90.col(idx[k]).cast<Complex>();
  return t;
}

int qubit_of(const std::string& s) {
  if (s == "A") return 0;
  if (s == "B") return 1;
  if (s == "C") return 2;
  throw std::invalid_argument("unknown qubit '" + s + "' (expected A, B or C)");
}

}  // namespace

TargetGate make_target(const std::string& name, const EoModel& model) {
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);

  if (head == "identity") {
    TargetGate t = embed_logical_gate(Matrix8cd::Identity());
    t.name = name;
    return t;
  }
  if (head == "toffoli") {
    const int target = arg.empty() ? 2 : qubit_of(arg);
    TargetGate t = embed_logical_gate(toffoli_logical(target));
    t.name = name;
    return t;
  }
  if (head == "cnot") {
    if (arg == "AB" || arg == "BC") {
      const int c = arg == "AB" ? 0 : 1;
      TargetGate t = embed_logical_gate(cnot_logical(c, c + 1));
      t.name = name;
      return t;
    }
    throw std::invalid_argument("cnot target must be cnot:AB or cnot:BC");
  }
  if (head == "swap") {
    std::array<int, 9> perm{};
    if (arg == "AB")
      perm = {3, 4, 5, 0, 1, 2, 6, 7, 8};
    else if (arg == "BC")
      perm = {0, 1, 2, 6, 7, 8, 3, 4, 5};
    else
      throw std::invalid_argument("swap target must be swap:AB or swap:BC");
    TargetGate t = permutation_target(model, perm);
    t.name = name;
    return t;
  }
  if (head == "t-gate" || head == "tdg" || head == "h-gate") {
    const int q = qubit_of(arg);
    Eigen::Matrix2cd u;
    if (head == "h-gate")
      u << 1, 1, 1, -1;
    else
      u << 1, 0, 0, std::polar(1.0, (head == "tdg" ? -1.0 : 1.0) * M_PI / 4);
    if (head == "h-gate") u /= std::sqrt(2.0);
    TargetGate t = embed_logical_gate(single_qubit_embed(u, q));
    t.name = name;
    return t;
  }
  throw std::invalid_argument("unknown target '" + name + "'");
}

std::vector<std::string> target_names() {
  return {"identity",  "toffoli",   "toffoli:A", "toffoli:B", "toffoli:C",
          "cnot:AB",   "cnot:BC",   "swap:AB",   "swap:BC",   "t-gate:A",
          "t-gate:B",  "t-gate:C",  "tdg:A",     "tdg:B",     "tdg:C",
          "h-gate:A",  "h-gate:B",  "h-gate:C"};
}

}  // namespace eoqc
