#include "eoqc/coupling.hpp"

#include <stdexcept>

#include "eoqc/clebsch_gordan.hpp"

namespace eoqc {

const CoupledState& Multiplet::at_m(HalfInt m) const {
  auto it = components.find(m.twice);
  if (it == components.end())
    throw std::invalid_argument("multiplet: missing m-component " + m.str() +
                                " of j = " + j.str());
  return it->second;
}

CoupledState tensor(const CoupledState& x, const CoupledState& y) {
  const CoupledState& lo = x.window.first < y.window.first ? x : y;
  const CoupledState& hi = x.window.first < y.window.first ? y : x;
  if (lo.window.first + lo.window.count != hi.window.first)
    throw std::invalid_argument("tensor: windows not adjacent");

  CoupledState out;
  out.window = {lo.window.first, lo.window.count + hi.window.count};
  out.j = x.j + y.j;  // placeholder; couple() overwrites
  out.m = x.m + y.m;
  out.amps.resize(out.window.dim());
  const int nlo = lo.window.dim();
  for (int ih = 0; ih < hi.window.dim(); ++ih)
    for (int il = 0; il < nlo; ++il)
      out.amps[il + (ih << lo.window.count)] = lo.amps[il] * hi.amps[ih];
  return out;
}

CoupledState couple(const Multiplet& first, const Multiplet& second,
                    HalfInt J, HalfInt M) {
  if (!triangle_ok(first.j, second.j, J))
    throw std::invalid_argument("couple: triangle rule fails for " + first.j.str() +
                                " x " + second.j.str() + " -> " + J.str());
  if (!projection_ok(J, M))
    throw std::invalid_argument("couple: invalid M = " + M.str());

  CoupledState out;
  bool any = false;
  for (int tm1 = -first.j.twice; tm1 <= first.j.twice; tm1 += 2) {
    const HalfInt m1{tm1};
    const HalfInt m2 = M - m1;
    if (!projection_ok(second.j, m2)) continue;
    const double c = cg_coefficient(first.j, m1, second.j, m2, J, M);
    if (c == 0.0) continue;
    CoupledState term = tensor(first.at_m(m1), second.at_m(m2));
    if (!any) {
      out = term;
      out.amps *= c;
      any = true;
    } else {
      out.amps += c * term.amps;
    }
  }
  if (!any) throw std::invalid_argument("couple: no contributing components");
  out.j = J;
  out.m = M;
  return out;
}

Multiplet couple_multiplet(const Multiplet& first, const Multiplet& second, HalfInt J) {
  Multiplet out;
  out.j = J;
  for (int tm = -J.twice; tm <= J.twice; tm += 2)
    out.components.emplace(tm, couple(first, second, J, HalfInt{tm}));
  return out;
}

Multiplet spin_half_multiplet(int spin) {
  Multiplet m;
  m.j = HalfInt{1};
  CoupledState up{{spin, 1}, HalfInt{1}, HalfInt{1}, Eigen::Vector2d{1.0, 0.0}};
  CoupledState dn{{spin, 1}, HalfInt{1}, HalfInt{-1}, Eigen::Vector2d{0.0, 1.0}};
  m.components.emplace(1, up);
  m.components.emplace(-1, dn);
  return m;
}

}  // namespace eoqc
