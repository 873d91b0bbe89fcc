#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "warpmin/geometry.hpp"

using namespace warpmin;

namespace {

WarpedProduct cos_product(int n = 2) {
  Profile p(sum({constant(2.0), cosine(1.0, 1)}), true);
  return WarpedProduct(p, n, 1.0, FiberSpectrum::sphere(n));
}

long long sphere2_count(double x) {
  long long c = 0;
  for (long long k = 0; double(k * (k + 1)) < x; ++k) c += 2 * k + 1;
  return c;
}

long long torus_count(int n, double x) {
  const int R = int(std::sqrt(x) / (2.0 * std::numbers::pi)) + 1;
  long long c = 0;
  std::vector<int> l(n, -R);
  while (true) {
    double s = 0.0;
    for (int v : l) s += double(v) * v;
    if (4.0 * std::numbers::pi * std::numbers::pi * s < x) ++c;
    int i = 0;
    while (i < n && ++l[i] > R) l[i++] = -R;
    if (i == n) break;
  }
  return c;
}

}  // namespace

TEST_CASE("slice area and first variation") {
  auto w = cos_product(3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double t = U(rng), f = 2.0 + std::cos(2.0 * std::numbers::pi * t);
    CHECK(slice_area(w, t) == doctest::Approx(f * f * f));
    const double h = 1e-6;
    const double fd = (slice_area(w, t + h) - slice_area(w, t - h)) / (2 * h);
    CHECK(fd == doctest::Approx(mean_curvature_scalar(w, t) * slice_area(w, t)).epsilon(1e-6));
  }
}

TEST_CASE("jacobi potential against finite-difference profile derivatives") {
  auto w = cos_product(2);
  const auto& p = w.profile();
  for (double t : {0.0, 0.13, 0.5, 0.77}) {
    const double h = 1e-4;
    const double f = p.eval(t);
    const double f1 = (p.eval(t + h) - p.eval(t - h)) / (2 * h);
    const double f2 = (p.eval(t + h) - 2 * f + p.eval(t - h)) / (h * h);
    const double q = 2 * (f1 / f) * (f1 / f) - 2 * f2 / f;
    CHECK(jacobi_potential(w, t) == doctest::Approx(q).epsilon(1e-6));
  }
}

TEST_CASE("index matches brute-force sphere enumeration") {
  auto w = cos_product(2);
  for (double t : {0.0, 0.5}) {
    const auto s = slice_spectrum(w, t);
    const double f = w.profile().eval(t);
    CHECK(s.index == sphere2_count(f * f * jacobi_potential(w, t)));
  }
  CHECK(slice_spectrum(w, 0.0).index == 225);
  CHECK(slice_spectrum(w, 0.5).index == 0);
}

TEST_CASE("torus counts match lattice enumeration") {
  for (int n : {1, 2, 3}) {
    auto s = FiberSpectrum::torus(n);
    for (double x : {0.5, 40.0, 100.0, 400.0, 1000.0}) CHECK(s.count_below(x) == torus_count(n, x));
  }
}

TEST_CASE("listed spectra enforce their cutoff") {
  auto s = FiberSpectrum::listed({{0.0, 1}, {2.0, 3}, {6.0, 5}}, 2);
  CHECK(s.count_below(0.0) == 0);
  CHECK(s.count_below(3.0) == 4);
  CHECK_THROWS_AS(s.count_below(7.0), CutoffError);
}

TEST_CASE("side classes of 2 + cos") {
  auto w = cos_product();
  const auto reps = slice_reports(w);
  REQUIRE(reps.size() == 2);
  CHECK(reps[0].stability == Stability::Unstable);
  CHECK(reps[0].left.kind == SideKind::Expanding);
  CHECK(reps[0].right.kind == SideKind::Expanding);
  CHECK(reps[1].stability == Stability::StrictlyStable);
  CHECK(reps[1].left.kind == SideKind::Contracting);
  CHECK(reps[1].right.kind == SideKind::Contracting);
  CHECK(reps[0].area == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(reps[1].area == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant profile is foliated and degenerate") {
  WarpedProduct w(Profile(constant(1.0), true), 2, 1.0, FiberSpectrum::sphere(2));
  const auto reps = slice_reports(w);
  REQUIRE_FALSE(reps.empty());
  for (const auto& r : reps) {
    CHECK(r.kind == SliceKind::FullCircle);
    CHECK(r.left.kind == SideKind::Foliated);
    CHECK(r.stability == Stability::DegenerateStable);
  }
  CHECK(analytic_no_accumulating(w).pass);
}

TEST_CASE("staircase limit point accumulates from the left") {
  Profile p(sum({constant(1.0), staircase({})}), false);
  WarpedProduct w(p, 2, 1.0, FiberSpectrum::sphere(2));
  const auto pts = declared_limit_points(w);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].t == 0.5);
  CHECK(pts[0].left_accumulating);
  CHECK_FALSE(pts[0].right_accumulating);
  const auto left = classify_side(w, 0.5, Side::Left);
  CHECK(left.kind == SideKind::Accumulating);
  CHECK(left.provenance == Provenance::DeclaredLimit);
  REQUIRE(left.finite_depth);
}

TEST_CASE("stability thresholds") {
  CHECK(stability_of(1e-300) == Stability::StrictlyStable);
  CHECK(stability_of(0.0) == Stability::DegenerateStable);
  CHECK(stability_of(-1e-300) == Stability::Unstable);
}
