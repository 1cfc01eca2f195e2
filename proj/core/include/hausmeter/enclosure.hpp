#ifndef HAUSMETER_ENCLOSURE_HPP
#define HAUSMETER_ENCLOSURE_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace hausmeter {

// Conservative outward stepping in units of the last place. Every enclosure
// operation widens its result by kUlpPad steps on each side; that absorbs the
// rounding error of the underlying double operation without directed-rounding
// support. This is desk-scale rigor, not a formally verified model.
inline constexpr int kUlpPad = 4;

double ulp_up(double x, int steps);
double ulp_down(double x, int steps);

// A closed interval [lo, hi] of binary64 values bracketing a real quantity.
struct Enclosure {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Enclosure() = default;
  explicit constexpr Enclosure(double v) : lo(v), hi(v) {}
  constexpr Enclosure(double l, double h) : lo(l), hi(h) {}

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Enclosure& o) const { return lo <= o.lo && o.hi <= hi; }
  bool valid() const { return lo <= hi; }
};

Enclosure pad(const Enclosure& e);

Enclosure add(const Enclosure& a, const Enclosure& b);
Enclosure sub(const Enclosure& a, const Enclosure& b);
Enclosure mul(const Enclosure& a, const Enclosure& b);
// b must not straddle zero.
Enclosure div(const Enclosure& a, const Enclosure& b);

inline Enclosure operator+(const Enclosure& a, const Enclosure& b) { return add(a, b); }
inline Enclosure operator-(const Enclosure& a, const Enclosure& b) { return sub(a, b); }
inline Enclosure operator*(const Enclosure& a, const Enclosure& b) { return mul(a, b); }
inline Enclosure operator/(const Enclosure& a, const Enclosure& b) { return div(a, b); }

// base must satisfy base.lo >= 0.
Enclosure pow(const Enclosure& base, const Enclosure& expo);
Enclosure pow(const Enclosure& base, double expo);
// argument must be strictly positive.
Enclosure log(const Enclosure& a);
Enclosure exp(const Enclosure& a);

Enclosure hull(const Enclosure& a, const Enclosure& b);
// empty intersection collapses to the gap midpoint (callers treat the inputs
// as two valid brackets of the same quantity, so a true miss is a bug).
Enclosure intersect(const Enclosure& a, const Enclosure& b);
Enclosure clamp(const Enclosure& a, double lo, double hi);

inline Enclosure minus(const Enclosure& a) { return Enclosure(-a.hi, -a.lo); }

} // namespace hausmeter

#endif
