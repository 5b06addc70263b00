#include "eoqc/clebsch_gordan.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace eoqc {

namespace {

// factorials of small integers; arguments here never exceed j1+j2+J+1 <= ~20
double fact(int n) {
  static const auto table = [] {
    std::array<double, 40> t{};
    t[0] = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  return table.at(static_cast<std::size_t>(n));
}

}  // namespace

double cg_coefficient(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                      HalfInt J, HalfInt M) {
  if (j1.twice < 0 || j2.twice < 0 || J.twice < 0)
    throw std::invalid_argument("cg_coefficient: negative angular momentum");
  if (!projection_ok(j1, m1) || !projection_ok(j2, m2) || !projection_ok(J, M))
    throw std::invalid_argument("cg_coefficient: invalid projection");

  if ((m1 + m2) != M) return 0.0;
  if (!triangle_ok(j1, j2, J)) return 0.0;

  // Racah's closed form. All factorial arguments are integers by the
  // parity checks above; twice-values are divided by 2 exactly.
  auto f2 = [](HalfInt x) { return fact(x.twice / 2); };

  const double pre =
      (J.twice + 1.0) * f2(j1 + j2 - J) * f2(j1 - j2 + J) * f2(-j1 + j2 + J) /
      f2(j1 + j2 + J + HalfInt::whole(1));
  const double norm = pre * f2(J + M) * f2(J - M) * f2(j1 - m1) * f2(j1 + m1) *
                      f2(j2 - m2) * f2(j2 + m2);

  const int k_lo = std::max({0, (j2 - J - m1).twice / 2, (j1 - J + m2).twice / 2});
  const int k_hi = std::min({(j1 + j2 - J).twice / 2, (j1 - m1).twice / 2,
                             (j2 + m2).twice / 2});
  double sum = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const HalfInt kk = HalfInt::whole(k);
    const double term = 1.0 / (fact(k) * f2(j1 + j2 - J - kk) * f2(j1 - m1 - kk) *
                               f2(j2 + m2 - kk) * f2(J - j2 + m1 + kk) *
                               f2(J - j1 - m2 + kk));
    sum += (k % 2 == 0) ? term : -term;
  }
  return std::sqrt(norm) * sum;
}

}  // namespace eoqc
