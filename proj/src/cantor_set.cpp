#include "warpmin/cantor_set.hpp"

#include "warpmin/errors.hpp"

namespace warpmin {

std::uint64_t pow3(int n) {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

std::vector<std::uint64_t> cantor_left_numerators(int depth) {
  if (depth < 0 || depth > kMaxCantorDepth)
    throw DomainError("cantor depth must lie in [0, " +
                      std::to_string(kMaxCantorDepth) + "]");
  std::vector<std::uint64_t> a{0};
  for (int j = 0; j < depth; ++j) {
    std::vector<std::uint64_t> next;
    next.reserve(a.size() * 2);
    for (auto v : a) {
      next.push_back(3 * v);
      next.push_back(3 * v + 2);
    }
    a.swap(next);
  }
  return a;
}

std::vector<std::pair<Rational, Rational>> cantor_components(int depth) {
  const auto den = pow3(depth);
  std::vector<std::pair<Rational, Rational>> out;
  for (auto a : cantor_left_numerators(depth))
    out.push_back({Rational{a, den}, Rational{a + 1, den}});
  return out;
}

std::vector<Rational> cantor_midpoints(int level) {
  if (level < 1) throw DomainError("midpoint level must be >= 1");
  const auto den = 2 * pow3(level - 1);
  std::vector<Rational> out;
  for (auto a : cantor_left_numerators(level - 1))
    out.push_back(Rational{2 * a + 1, den});
  return out;
}

}  // namespace warpmin
