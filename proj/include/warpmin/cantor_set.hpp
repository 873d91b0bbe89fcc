#pragma once

#include <cstdint>
#include <vector>

namespace warpmin {

/// num / den with den a power of three (times two for midpoints).
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

inline constexpr int kMaxCantorDepth = 20;

std::uint64_t pow3(int n);

/// Left endpoints A/3^depth of the components of C_depth, ascending (A only).
std::vector<std::uint64_t> cantor_left_numerators(int depth);

/// Components [A/3^N, (A+1)/3^N] of C_N, ascending.
std::vector<std::pair<Rational, Rational>> cantor_components(int depth);

/// Centers of the removed level-n middle thirds, ascending. n >= 1.
std::vector<Rational> cantor_midpoints(int level);

}  // namespace warpmin
