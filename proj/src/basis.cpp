#include "eoqc/basis.hpp"

#include <ostream>

namespace eoqc {

std::vector<std::pair<QubitSpecies, Multiplet>> build_qubit_multiplets(int first_spin) {
  const Multiplet outer = spin_half_multiplet(first_spin);
  const Multiplet s1 = spin_half_multiplet(first_spin + 1);
  const Multiplet s2 = spin_half_multiplet(first_spin + 2);

  std::vector<std::pair<QubitSpecies, Multiplet>> out;
  for (int s12 = 0; s12 <= 1; ++s12) {
    const Multiplet pair = couple_multiplet(s1, s2, HalfInt::whole(s12));
    for (int ts = std::abs(2 * s12 - 1); ts <= 2 * s12 + 1; ts += 2) {
      const HalfInt s{ts};
      out.push_back({{s, s12}, couple_multiplet(pair, outer, s)});
    }
  }
  return out;
}

namespace {

const Multiplet& find_qubit(const std::vector<std::pair<QubitSpecies, Multiplet>>& ms,
                            HalfInt s, int s12) {
  for (const auto& [sp, m] : ms)
    if (sp.s == s && sp.s12 == s12) return m;
  throw std::logic_error("qubit multiplet not found");
}

}  // namespace

std::array<CoupledState, 8> build_single_qubit_states(int first_spin) {
  const auto ms = build_qubit_multiplets(first_spin);
  const HalfInt h{1}, th{3};
  // |1>..|8> = |s, m, s12> per the single-qubit eigenstate list
  const std::array<std::tuple<HalfInt, HalfInt, int>, 8> table = {{
      {h, h, 0}, {h, -h, 0}, {h, h, 1}, {h, -h, 1},
      {th, th, 1}, {th, h, 1}, {th, -h, 1}, {th, -th, 1},
  }};
  std::array<CoupledState, 8> out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& [s, m, s12] = table[i];
    out[i] = find_qubit(ms, s, s12).at_m(m);
  }
  return out;
}

std::vector<std::pair<TwoQubitSpecies, Multiplet>> build_two_qubit_multiplets() {
  const auto qa = build_qubit_multiplets(1);
  const auto qb = build_qubit_multiplets(4);
  std::vector<std::pair<TwoQubitSpecies, Multiplet>> out;
  for (const auto& [spa, ma] : qa)
    for (const auto& [spb, mb] : qb)
      for (int ts = (spa.s - spb.s).twice < 0 ? (spb.s - spa.s).twice : (spa.s - spb.s).twice;
           ts <= (spa.s + spb.s).twice; ts += 2) {
        const HalfInt s_ab{ts};
        out.push_back({{s_ab.as_int(), spa.s, spb.s, spa.s12, spb.s12},
                       couple_multiplet(ma, mb, s_ab)});
      }
  return out;
}

std::vector<BasisState> build_three_qubit_basis() {
  const auto ab = build_two_qubit_multiplets();
  const auto qc = build_qubit_multiplets(7);
  const HalfInt h{1}, th{3};

  std::vector<BasisState> basis;
  basis.reserve(90);
  for (const HalfInt s_tot : {h, th}) {
    for (const HalfInt s_c : {h, th}) {
      for (int s_ab = 0; s_ab <= 3; ++s_ab) {
        if (!triangle_ok(HalfInt::whole(s_ab), s_c, s_tot)) continue;
        for (const HalfInt s_a : {h, th}) {
          for (const HalfInt s_b : {h, th}) {
            if (!triangle_ok(s_a, s_b, HalfInt::whole(s_ab))) continue;
            for (int a12 = (s_a == th ? 1 : 0); a12 <= 1; ++a12) {
              for (int b12 = (s_b == th ? 1 : 0); b12 <= 1; ++b12) {
                for (int c12 = (s_c == th ? 1 : 0); c12 <= 1; ++c12) {
                  const Multiplet* mab = nullptr;
                  for (const auto& [sp, m] : ab)
                    if (sp.s_ab == s_ab && sp.s_a == s_a && sp.s_b == s_b &&
                        sp.s_a12 == a12 && sp.s_b12 == b12) {
                      mab = &m;
                      break;
                    }
                  if (!mab) throw std::logic_error("two-qubit multiplet not found");
                  BasisState st;
                  st.amps = couple(*mab, find_qubit(qc, s_c, c12), s_tot, s_tot).amps;
                  st.label = {s_tot, s_tot, s_ab, s_a, s_b, s_c, a12, b12, c12};
                  basis.push_back(std::move(st));
                }
              }
            }
          }
        }
      }
    }
  }
  if (basis.size() != 90) throw std::logic_error("basis size != 90");
  return basis;
}

std::vector<SectorInfo> basis_sectors(const std::vector<BasisState>& basis) {
  std::vector<SectorInfo> out;
  for (const auto& st : basis) {
    const auto& l = st.label;
    if (!out.empty() && out.back().s_tot == l.s_tot && out.back().s_ab == l.s_ab &&
        out.back().s_c == l.s_c) {
      ++out.back().count;
    } else {
      const bool comp = l.s_c == HalfInt{1} &&
                        (l.s_ab == 0 || l.s_ab == 1);  // may still hold non-computational rows
      out.push_back({l.s_tot, l.s_ab, l.s_c, 1, comp});
    }
  }
  return out;
}

void dump_basis_csv(const std::vector<BasisState>& basis, std::ostream& os) {
  os << "state,s_tot,s_z_tot,s_ab,s_a,s_b,s_c,s_a12,s_b12,s_c12,amplitudes\n";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& l = basis[i].label;
    os << i + 1 << ',' << l.s_tot.str() << ',' << l.s_z_tot.str() << ',' << l.s_ab
       << ',' << l.s_a.str() << ',' << l.s_b.str() << ',' << l.s_c.str() << ','
       << l.s_a12 << ',' << l.s_b12 << ',' << l.s_c12 << ',';
    bool first = true;
    for (int k = 0; k < basis[i].amps.size(); ++k) {
      if (basis[i].amps[k] == 0.0) continue;
      if (!first) os << ' ';
      os << k << ':' << basis[i].amps[k];
      first = false;
    }
    os << '\n';
  }
}

}  // namespace eoqc
