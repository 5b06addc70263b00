#include "eoqc/sequence.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace eoqc {

namespace {
constexpr std::array<int, 4> kOdd = {2, 4, 6, 8};
constexpr std::array<int, 4> kEven = {1, 3, 5, 7};
}  // namespace

const std::array<int, 4>& parity_channels(StepParity par) {
  switch (par) {
    case StepParity::odd: return kOdd;
    case StepParity::even: return kEven;
    default: throw std::invalid_argument("parity_channels: step has no parity");
  }
}

StepParity PulseStep::parity() const {
  bool odd = false, even = false;
  for (int l = 1; l <= 8; ++l) {
    if (p[l - 1] == 0.0) continue;
    (l % 2 == 0 ? odd : even) = true;
  }
  if (odd && even) throw std::invalid_argument("mixed-parity step");
  if (odd) return StepParity::odd;
  if (even) return StepParity::even;
  return StepParity::none;
}

int PulseStep::active_count() const {
  int n = 0;
  for (double v : p) n += (v != 0.0);
  return n;
}

void PulseStep::validate(double p_max) const {
  (void)parity();
  for (double v : p)
    if (std::abs(v) > p_max)
      throw std::invalid_argument("pulse value " + std::to_string(v) +
                                  " exceeds p_max = " + std::to_string(p_max));
}

void PulseSequence::validate(double p_max) const {
  for (const auto& s : steps) s.validate(p_max);
}

std::pair<int, int> count_pulses(const PulseSequence& seq) {
  int pulses = 0;
  for (const auto& s : seq.steps) pulses += s.active_count();
  return {pulses, static_cast<int>(seq.steps.size())};
}

namespace {

double parse_value(std::string_view tok, int line_no) {
  double v = 0;
  const auto* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || p != end)
    throw std::runtime_error("malformed number '" + std::string(tok) + "' on line " +
                             std::to_string(line_no));
  return v;
}

std::string format_value(double v) {
  std::array<char, 32> buf;
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}

}  // namespace

PulseSequence load_sequence(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());

  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty file " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "step,p12,p23,p34,p45,p56,p67,p78,p89")
    throw std::runtime_error("unexpected header in " + path.string());

  PulseSequence seq;
  seq.name = path.stem().string();
  seq.source = path.string();
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> toks;
    std::string_view sv(line);
    while (true) {
      const auto c = sv.find(',');
      toks.push_back(sv.substr(0, c));
      if (c == std::string_view::npos) break;
      sv.remove_prefix(c + 1);
    }
    if (toks.size() != 9)
      throw std::runtime_error("expected 9 columns on line " + std::to_string(line_no));
    const int step_no = static_cast<int>(parse_value(toks[0], line_no));
    if (step_no != static_cast<int>(seq.steps.size()) + 1)
      throw std::runtime_error("duplicate or out-of-order step index on line " +
                               std::to_string(line_no));
    PulseStep st;
    for (int l = 1; l <= 8; ++l) st.p[l - 1] = parse_value(toks[l], line_no);
    (void)st.parity();  // reject mixed-parity rows
    seq.steps.push_back(st);
  }
  seq.validate();
  return seq;
}

void save_sequence(const PulseSequence& seq, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "step,p12,p23,p34,p45,p56,p67,p78,p89\n";
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    os << i + 1;
    for (double v : seq.steps[i].p) os << ',' << format_value(v);
    os << '\n';
  }
}

Eigen::MatrixXcd step_propagator(const PulseStep& step, const EoModel& model) {
  step.validate();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(kDim, kDim);
  for (int l = 1; l <= 8; ++l) {
    const double p = step.p[l - 1];
    if (p == 0.0) continue;
    const Complex c = std::polar(1.0, std::numbers::pi * p) - 1.0;
    u -= c * (model.generator_c(l) * u).eval();
  }
  return u;
}

Eigen::MatrixXcd propagate(const PulseSequence& seq, const EoModel& model) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(kDim, kDim);
  for (const auto& st : seq.steps) u = step_propagator(st, model) * u;
  return u;
}

FidelityReport fidelity_report(const Eigen::MatrixXcd& u, const TargetGate& target) {
  FidelityReport r;
  r.unitarity_dev = (u.adjoint() * u - Eigen::MatrixXcd::Identity(kDim, kDim))
                        .cwiseAbs()
                        .maxCoeff();
  r.unitary = r.unitarity_dev < 1e-9;

  const auto& idx = computational_indices();
  Complex tr = 0;
  for (int k = 0; k < kCompDim; ++k)
    tr += target.columns.col(k).dot(u.col(idx[k]));  // dot conjugates the left side
  const double d = kCompDim;
  r.fidelity_d24 = (d + std::norm(tr)) / (d * (d + 1));
  r.j_t_re = 1.0 - tr.real() / d;

  for (int b = 0; b < 3; ++b) {
    double dev = 0;
    for (int j = 0; j < 8; ++j)
      for (int i = 0; i < 8; ++i)
        dev = std::max(dev, std::abs(u(idx[8 * b + i], idx[8 * b + j]) -
                                     target.columns(idx[8 * b + i], 8 * b + j)));
    r.block_max_dev[b] = dev;
  }

  double leak = 0;
  for (int k = 0; k < kCompDim; ++k) {
    double inside = 0;
    for (int i = 0; i < kCompDim; ++i) inside += std::norm(u(idx[i], idx[k]));
    const double total = u.col(idx[k]).squaredNorm();
    leak = std::max(leak, std::sqrt(std::max(0.0, total - inside)));
  }
  r.leakage_norm = leak;
  return r;
}

}  // namespace eoqc
