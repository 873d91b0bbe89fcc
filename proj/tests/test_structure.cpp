#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "warpmin/cantor.hpp"
#include "warpmin/structure.hpp"

using namespace warpmin;

namespace {

WarpedProduct make(Expr e, bool analytic) {
  return WarpedProduct(Profile(std::move(e), analytic), 2, 1.0, FiberSpectrum::sphere(2));
}

WarpedProduct cosine_w() { return make(sum({constant(2.0), cosine(1.0, 1)}), true); }
WarpedProduct dip_w() { return make(sum({constant(1.0), bump_node(0.5, 0.25, -0.3)}), false); }
WarpedProduct stair_w() { return make(sum({constant(1.0), staircase({})}), false); }

}  // namespace

TEST_CASE("weakly frankel") {
  CHECK(is_weakly_frankel(make(constant(1.0), true)).weakly_frankel);
  const auto r = is_weakly_frankel(cosine_w());
  CHECK_FALSE(r.weakly_frankel);
  CHECK(r.contracting.size() == 2);
}

TEST_CASE("foliation classes respect omega") {
  auto w = make(constant(1.0), true);
  const auto fc = foliation_classes(w, 5.0);
  REQUIRE(fc.classes.size() == 1);
  CHECK(fc.classes[0].kind == ClassKind::Full);
  CHECK(foliation_classes(w, 0.5).classes.empty());

  auto c = cosine_w();
  const auto cc = foliation_classes(c, 2.0);
  REQUIRE(cc.classes.size() == 1);
  CHECK(cc.classes[0].kind == ClassKind::Isolated);
  CHECK(stable_area_spectrum(c, 100.0) == std::vector<double>{1.0});
}

TEST_CASE("weak core of 2 + cos") {
  auto w = cosine_w();
  const auto core = find_weak_core(w);
  REQUIRE(core);
  CHECK(core->arc.lo == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(core->arc.hi == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(core->contracting_boundary);
  CHECK(is_weak_core(w, *core));
  const auto bound = weak_core_boundary_bound(w, *core);
  CHECK(bound.pass);
  CHECK_THROWS_AS(find_weak_core(make(constant(1.0), true)), PreconditionError);
}

TEST_CASE("interval dichotomy cases") {
  auto d = dip_w();
  const auto v1 = verify_interval_dichotomy(d, make_region(d, 0.25, 0.75));
  CHECK(v1.verdict == IntervalCase::InteriorContracting);
  auto c = make(constant(1.0), true);
  const auto v2 = verify_interval_dichotomy(c, make_region(c, 0.0, 0.5));
  CHECK(v2.verdict == IntervalCase::Foliated);
}

TEST_CASE("cut regions partition the circle") {
  auto w = cosine_w();
  const auto regions = cut_song_regions(w, {0.5});
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].arc.length() == doctest::Approx(1.0));
}

TEST_CASE("spindles") {
  const auto cs = detect_spindles(cosine_w());
  REQUIRE(cs.size() == 1);
  CHECK_FALSE(cs[0].accumulating);

  const auto ds = detect_spindles(dip_w());
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].arc.lo == doctest::Approx(0.75));
  CHECK_FALSE(ds[0].accumulating);

  auto s = stair_w();
  const auto ss = detect_spindles(s);
  REQUIRE_FALSE(ss.empty());
  bool acc = false;
  for (const auto& sp : ss) {
    CHECK(s.profile().eval(sp.left_probe, 1) > 0.0);
    CHECK(s.profile().eval(sp.right_probe, 1) < 0.0);
    if (sp.accumulating) {
      acc = true;
      REQUIRE(sp.limit_point);
      CHECK(*sp.limit_point == 0.5);
    }
  }
  CHECK(acc);
}

TEST_CASE("dichotomy routing") {
  CHECK(dichotomy(make(constant(1.0), true)).branch == Branch::WeaklyFrankel);
  const auto c = dichotomy(cosine_w());
  CHECK(c.branch == Branch::WeakCore);
  CHECK(c.non_accumulating_spindles.size() == 1);
  CHECK(dichotomy(dip_w()).branch == Branch::WeakCore);
  const auto s = dichotomy(stair_w());
  CHECK(s.branch == Branch::Spindle);
  REQUIRE(s.spindle);
  CHECK(s.spindle->accumulating);
  auto k = WarpedProduct(build_cantor_profile({3, Schedule::pow6()}), 2, 1.0,
                         FiberSpectrum::sphere(2));
  const auto o = dichotomy(k);
  CHECK(o.branch == Branch::PathologicalCantor);
  REQUIRE(o.cantor_likeness);
  CHECK(o.cantor_likeness->pass);
}

TEST_CASE("non-monotonic sets") {
  CHECK(detect_non_monotonic(cosine_w()).empty());
  auto k = WarpedProduct(build_cantor_profile({2, Schedule::pow6()}), 2, 1.0,
                         FiberSpectrum::sphere(2));
  const auto nm = detect_non_monotonic(k);
  CHECK(nm.form == NonMonotonicSet::Form::DeclaredLimit);
  REQUIRE(nm.limit);
  CHECK(nm.depth == 2);
  CHECK_FALSE(nm.witnesses.empty());
}

TEST_CASE("noncontracting accumulating slice inside a region") {
  auto k = WarpedProduct(build_cantor_profile({2, Schedule::pow6()}), 2, 1.0,
                         FiberSpectrum::sphere(2));
  const auto t = find_noncontracting_accumulating(k, make_region(k, 1.0 / 6, 5.0 / 6));
  REQUIRE(t);
  CHECK(*t == doctest::Approx(2.0 / 9));
  auto s = stair_w();
  const auto u = find_noncontracting_accumulating(s, make_region(s, 0.498046875, 0.8));
  REQUIRE(u);
  CHECK(*u == 0.5);
}
