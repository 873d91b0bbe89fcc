#pragma once

#include <cmath>
#include <string_view>

namespace warpmin {

// The base circle is R/Z; parameters are represented in [0, 1).

inline double wrap01(double t) {
  double r = t - std::floor(t);
  return r >= 1.0 ? 0.0 : r;  // guards t = -tiny rounding to 1.0
}

/// Signed offset d = t - s reduced to [-1/2, 1/2).
inline double circular_offset(double t, double s) {
  double d = t - s;
  return d - std::floor(d + 0.5);
}

inline double circular_distance(double a, double b) {
  return std::fabs(circular_offset(a, b));
}

/// Closed arc [lo, hi]. In "circle" form lo lies in [0, 1) and hi may exceed 1
/// when the arc crosses the seam; in "[0,1] bookkeeping" form 0 <= lo <= hi <= 1.
struct Arc {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double mid() const { return lo + 0.5 * (hi - lo); }
  bool is_point() const { return hi == lo; }
  /// Membership modulo 1.
  bool contains(double t, double eps = 0.0) const {
    const double x = lo + wrap01(t - lo);
    if (x >= lo - eps && x <= hi + eps) return true;
    // t just below lo (mod 1)
    return wrap01(lo - t) <= eps;
  }
  /// Open-interior membership modulo 1.
  bool interior_contains(double t, double eps = 0.0) const {
    const double x = lo + wrap01(t - lo);
    return x > lo + eps && x < hi - eps;
  }
};

enum class Side { Left, Right };

inline Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

inline std::string_view to_string(Side s) {
  return s == Side::Left ? "left" : "right";
}

/// Sign of f' on an open span; Zero marks a plateau (f' identically 0).
enum class Sign { Negative = -1, Zero = 0, Positive = 1 };

inline Sign sign_of(double v) {
  return v > 0.0 ? Sign::Positive : (v < 0.0 ? Sign::Negative : Sign::Zero);
}

inline std::string_view to_string(Sign s) {
  switch (s) {
    case Sign::Negative: return "-";
    case Sign::Zero: return "0";
    case Sign::Positive: return "+";
  }
  return "?";
}

}  // namespace warpmin
