#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "warpmin/cyclespace.hpp"

using namespace warpmin;

namespace {

WarpedProduct flat() {
  return WarpedProduct(Profile(constant(1.0), true), 2, 1.0, FiberSpectrum::sphere(2));
}

}  // namespace

TEST_CASE("rp dimension is the largest even integer below the ratio") {
  CHECK(rp_dimension(5.0, 1.0) == 4);
  CHECK(rp_dimension(4.0, 1.0) == 4);
  CHECK(rp_dimension(1.9, 1.0) == 0);
  CHECK(rp_dimension(0.3 * 7, 0.3) == 6);
  CHECK_THROWS_AS(rp_dimension(0.0, 1.0), DomainError);
}

TEST_CASE("flat product decomposes into one projective factor") {
  const auto m = decompose(flat(), 5.0);
  REQUIRE(m.full.size() == 1);
  CHECK(m.full[0].m == 4);
  CHECK(m.c_prime == 1.0);
  CHECK(m.partial.empty());
  const std::vector<long long> want{1, 1, 1, 1, 0, 0};
  for (int k = 1; k <= 6; ++k) CHECK(cohomology_dims(m, k) == want[k - 1]);
}

TEST_CASE("decompose needs weakly frankel") {
  WarpedProduct w(Profile(sum({constant(2.0), cosine(1.0, 1)}), true), 2, 1.0,
                  FiberSpectrum::sphere(2));
  CHECK_THROWS_AS(decompose(w, 5.0), PreconditionError);
}

TEST_CASE("partial classes contribute contractible factors") {
  std::vector<FoliationClass> cls{{ClassKind::Partial, {0.1, 0.3}, 0.8, Stability::DegenerateStable},
                                  {ClassKind::Isolated, {0.6, 0.6}, 0.9, Stability::StrictlyStable}};
  const auto m = decompose_classes(cls, 3.0, 0.8);
  CHECK(m.full.empty());
  CHECK(m.partial.size() == 1);
  CHECK(m.isolated == 1);
  CHECK(cohomology_dims(m, 1) == 0);
}

TEST_CASE("truncated symmetric products look like projective spaces") {
  for (auto [m, r] : {std::pair{1, 6}, {2, 6}, {2, 12}, {3, 6}, {3, 8}}) {
    const auto h = tp_homology(m, r);
    CHECK(h.betti == std::vector<long long>(m + 1, 1));
    CHECK(h.matches_rp);
    long long euler = 0;
    for (std::size_t d = 0; d < h.cells.size(); ++d) euler += (d % 2 ? -1 : 1) * h.cells[d];
    long long chi = 0;
    for (std::size_t d = 0; d < h.betti.size(); ++d) chi += (d % 2 ? -1 : 1) * h.betti[d];
    CHECK(euler == chi);
  }
  CHECK_THROWS_AS(tp_homology(4, 8), DomainError);
  CHECK_THROWS_AS(tp_homology(2, 4), ResolutionError);
}

TEST_CASE("symmetric products are homotopy circles") {
  for (int m = 1; m <= 3; ++m) {
    auto want = std::vector<long long>(m + 1, 0);
    want[0] = want[1] = 1;
    CHECK(sp_homology(m, 6).betti == want);
  }
}

TEST_CASE("synthetic widths pass the growth rules") {
  const auto t = synthesize_widths(1.0, 1.0, 2, 1000);
  CHECK(t.entries.size() == 1000);
  CHECK(t.provenance == WidthTable::Provenance::Synthetic);
  CHECK(width_growth_check(t, 1.0, 1.0).pass);

  WidthTable bad = t;
  for (auto& e : bad.entries) e.omega = 1.05 * double(e.p);
  const auto v = width_growth_check(bad, 1.0, 1.0);
  CHECK_FALSE(v.pass);
  REQUIRE(v.first_p);
  long long first = 0;
  for (long long p = 1; p <= 1000 && !first; ++p)
    if (1.05 * p > p + std::cbrt(double(p)) * (1 + 1e-12)) first = p;
  CHECK(*v.first_p == first);
}

TEST_CASE("width csv round trip and errors") {
  const auto t = synthesize_widths(2.0, 0.5, 3, 50);
  std::stringstream ss;
  write_width_csv(ss, t);
  const auto back = read_width_csv(ss, 3);
  REQUIRE(back.entries.size() == t.entries.size());
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    CHECK(back.entries[i].p == t.entries[i].p);
    CHECK(back.entries[i].omega == t.entries[i].omega);
  }
  std::stringstream empty;
  CHECK_THROWS_AS(read_width_csv(empty, 2), InputError);
  std::stringstream header("p,omega\n");
  CHECK_THROWS_AS(read_width_csv(header, 2), InputError);
  std::stringstream garbage("p,omega\n1,abc\n");
  CHECK_THROWS_WITH_AS(read_width_csv(garbage, 2), doctest::Contains("line 2"), InputError);
  std::stringstream decreasing("p,omega\n1,5\n2,4\n");
  CHECK_THROWS_AS(read_width_csv(decreasing, 2), InputError);
}

TEST_CASE("weyl fit recovers the leading coefficient") {
  WidthTable t;
  t.n = 2;
  for (long long p = 1; p <= 10000; ++p) t.entries.push_back({p, 7.0 * std::cbrt(double(p)) + 50.0});
  const auto est = weyl_check(t, 1.0, 0.05);
  CHECK(est.a_hat == doctest::Approx(7.0).epsilon(0.05 / 7));
  CHECK(est.converged);
  WidthTable lin;
  lin.n = 2;
  for (long long p = 1; p <= 10000; ++p) lin.entries.push_back({p, double(p)});
  CHECK_FALSE(weyl_check(lin, 1.0, 0.05).converged);
}

TEST_CASE("counting thresholds") {
  CHECK(counting_contradiction({1.0}, 10.0, 2, 1, 5.0).p == 9);
  CHECK(counting_contradiction({1.0, 2.0}, 10.0, 2, 1, 5.0).p == 65);
  CHECK(counting_contradiction({1.0}, 10.0, 2, 1).p == 9);
  CHECK_THROWS_AS(counting_contradiction({1.0}, 10.0, 1, 1), Error);
}

TEST_CASE("jump check on exact linear widths") {
  const auto t = synthesize_widths(1.0, 0.0, 2, 200);
  CHECK(ls_jump_check(t, {1.0}, 1.0, 0.5).pass);
}
