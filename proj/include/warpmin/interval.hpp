#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace warpmin {

// Closed interval with outward rounding by one ulp on every arithmetic
// result. Enough for certification at the tolerances used here; it is not a
// directed-rounding-mode implementation.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double v) : lo(v), hi(v) {}  // NOLINT: implicit point
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  double width() const { return hi - lo; }
  double mid() const { return lo + 0.5 * (hi - lo); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  bool strictly_positive() const { return lo > 0.0; }
  bool strictly_negative() const { return hi < 0.0; }
};

namespace interval_detail {
inline double down(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}
inline double up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}
}  // namespace interval_detail

inline Interval widen(Interval a) {
  return {interval_detail::down(a.lo), interval_detail::up(a.hi)};
}

inline Interval hull(Interval a, Interval b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval operator+(Interval a, Interval b) {
  return widen({a.lo + b.lo, a.hi + b.hi});
}

inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline Interval operator-(Interval a, Interval b) {
  return widen({a.lo - b.hi, a.hi - b.lo});
}

inline Interval operator*(Interval a, Interval b) {
  const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo,
               p4 = a.hi * b.hi;
  return widen({std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})});
}

inline Interval& operator+=(Interval& a, Interval b) { return a = a + b; }

inline Interval scale(Interval a, double s) {
  if (s >= 0.0) return widen({a.lo * s, a.hi * s});
  return widen({a.hi * s, a.lo * s});
}

inline Interval sqr(Interval a) {
  if (a.lo >= 0.0) return widen({a.lo * a.lo, a.hi * a.hi});
  if (a.hi <= 0.0) return widen({a.hi * a.hi, a.lo * a.lo});
  const double m = std::max(-a.lo, a.hi);
  return {0.0, interval_detail::up(m * m)};
}

// cos over an interval of arguments (radians).
inline Interval cos(Interval x) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  constexpr double pi = 3.141592653589793238462643383279;
  if (x.width() >= two_pi) return {-1.0, 1.0};
  const double c1 = std::cos(x.lo), c2 = std::cos(x.hi);
  double lo = std::min(c1, c2), hi = std::max(c1, c2);
  // Maxima at 2*pi*k, minima at pi + 2*pi*k. Pad the bracket test so a
  // rounding error in the argument cannot hide an extremum.
  const double pad = 4.0 * std::numeric_limits<double>::epsilon() *
                     std::max(1.0, std::max(std::fabs(x.lo), std::fabs(x.hi)));
  const double kmax = std::ceil((x.lo - pad) / two_pi);
  if (kmax * two_pi <= x.hi + pad) hi = 1.0;
  const double kmin = std::ceil((x.lo - pad - pi) / two_pi);
  if (kmin * two_pi + pi <= x.hi + pad) lo = -1.0;
  constexpr double slack = 2.0 * std::numeric_limits<double>::epsilon();
  return {std::max(-1.0, lo - slack), std::min(1.0, hi + slack)};
}

inline Interval sin(Interval x) {
  constexpr double half_pi = 1.5707963267948966192313216916398;
  return cos(x - Interval(half_pi));
}

}  // namespace warpmin
