#pragma once

#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace eoqc {

// Angular momentum quantum number stored as twice its value, so that
// half-integers are exact. HalfInt{3} is 3/2, HalfInt::whole(2) is 2.
struct HalfInt {
  int twice = 0;

  constexpr HalfInt() = default;
  constexpr explicit HalfInt(int twice_value) : twice(twice_value) {}
  static constexpr HalfInt whole(int n) { return HalfInt{2 * n}; }

  constexpr double value() const { return 0.5 * twice; }
  constexpr bool is_integer() const { return twice % 2 == 0; }
  constexpr int as_int() const { return twice / 2; }

  constexpr HalfInt operator+(HalfInt o) const { return HalfInt{twice + o.twice}; }
  constexpr HalfInt operator-(HalfInt o) const { return HalfInt{twice - o.twice}; }
  constexpr HalfInt operator-() const { return HalfInt{-twice}; }
  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string str() const {
    if (is_integer()) return std::to_string(as_int());
    return std::to_string(twice) + "/2";
  }
};

constexpr HalfInt abs(HalfInt x) { return HalfInt{x.twice < 0 ? -x.twice : x.twice}; }

// |j1-j2| <= J <= j1+j2 with matching integer/half-integer character
constexpr bool triangle_ok(HalfInt j1, HalfInt j2, HalfInt J) {
  if ((j1 + j2 - J).twice % 2 != 0) return false;
  return J >= abs(j1 - j2) && J <= j1 + j2;
}

// m must run over j, j-1, ..., -j
constexpr bool projection_ok(HalfInt j, HalfInt m) {
  return abs(m) <= j && (j - m).twice % 2 == 0;
}

}  // namespace eoqc
