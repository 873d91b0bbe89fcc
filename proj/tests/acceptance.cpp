#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "warpmin/cantor.hpp"
#include "warpmin/cyclespace.hpp"
#include "warpmin/structure.hpp"

using namespace warpmin;

namespace {

constexpr double kEnclosureTol = 1e-9;
constexpr double kAreaTol = 1e-12;
constexpr double kFirstVariationTol = 1e-5;
constexpr double kSecondVariationTol = 1e-4;
constexpr double kWeylTol = 0.05;
constexpr double kCantorSeconds = 5.0;
constexpr double kDichotomySeconds = 10.0;
constexpr double kCoreSeconds = 1.0;
constexpr double kTopologySeconds = 30.0;
constexpr double kVariationSeconds = 10.0;
constexpr double kWidthSeconds = 1.0;

struct Outcome {
  bool pass = true;
  std::ostringstream why;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) why << "; ";
      why << what;
      pass = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

WarpedProduct round(Profile p, int n = 2) {
  return WarpedProduct(std::move(p), n, 1.0, FiberSpectrum::sphere(n));
}

long long sphere2_count(double x) {
  long long c = 0;
  for (long long k = 0; double(k * (k + 1)) < x; ++k) c += 2 * k + 1;
  return c;
}

std::vector<Profile> random_trig_profiles(int count) {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> D(1, 4);
  std::vector<Profile> out;
  for (int i = 0; i < count; ++i) {
    const int deg = D(rng);
    std::vector<double> a(deg + 1, 0.0), b(deg + 1, 0.0);
    double mass = 0.0;
    for (int k = 1; k <= deg; ++k) {
      a[k] = U(rng) / k;
      b[k] = U(rng) / k;
      mass += std::fabs(a[k]) + std::fabs(b[k]);
    }
    a[0] = 1.0 + mass;
    out.emplace_back(trig(a, b), true);
  }
  return out;
}

void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const int N = 6;
  const auto prof = build_cantor_profile({N, Schedule::pow6()});
  auto w = round(prof);
  const auto& cs = w.critical();
  std::vector<double> mids;
  for (int n = 1; n <= N; ++n)
    for (const auto& m : cantor_midpoints(n)) mids.push_back(m.value());
  std::sort(mids.begin(), mids.end());
  o.require(mids.size() == 63, "expected 63 midpoints");
  o.require(cs.isolated.size() == 63,
            "isolated critical points " + std::to_string(cs.isolated.size()) + " != 63");
  for (std::size_t i = 0; i < std::min(mids.size(), cs.isolated.size()); ++i) {
    const auto& e = cs.isolated[i].enclosure;
    if (!(e.lo - kEnclosureTol <= mids[i] && mids[i] <= e.hi + kEnclosureTol && e.length() <= kEnclosureTol))
      o.require(false, "midpoint " + std::to_string(mids[i]) + " not enclosed");
  }
  const auto arcs = cs.plateau_arcs();
  const auto comps = cantor_components(N);
  o.require(arcs.size() == 64, "plateau components " + std::to_string(arcs.size()) + " != 64");
  for (std::size_t i = 0; i < std::min(arcs.size(), comps.size()); ++i)
    if (std::fabs(arcs[i].lo - comps[i].first.value()) > kEnclosureTol ||
        std::fabs(arcs[i].hi - comps[i].second.value()) > kEnclosureTol)
      o.require(false, "plateau " + std::to_string(i) + " differs from its component");
  int bad_mid = 0, bad_plateau = 0;
  for (const auto& r : slice_reports(w)) {
    if (r.kind == SliceKind::Isolated &&
        !(r.stability == Stability::StrictlyStable && r.left.kind == SideKind::Contracting &&
          r.right.kind == SideKind::Contracting))
      ++bad_mid;
    if (r.kind == SliceKind::PlateauInterior) {
      auto fol = [](const SideClass& s) {
        return s.kind == SideKind::Foliated ||
               (s.kind == SideKind::Accumulating && s.finite_depth == SideKind::Foliated);
      };
      if (!fol(r.left) || !fol(r.right)) ++bad_plateau;
    }
  }
  o.require(bad_mid == 0, std::to_string(bad_mid) + " midpoints not strictly stable/contracting");
  o.require(bad_plateau == 0, std::to_string(bad_plateau) + " plateau interiors not foliated");
  o.require(verify_critical_structure(prof, N).pass, "critical-structure certificate failed");
  o.require(verify_non_monotone_witnesses(prof, N).pass, "witness certificate failed");
  const double dt = seconds_since(t0);
  o.require(dt < kCantorSeconds, "runtime " + std::to_string(dt) + " s");
  if (o.pass) o.why << "63 midpoints, 64 plateaus, certificates pass, " << dt << " s";
}

void criterion2(Outcome& o) {
  double slowest = 0.0;
  for (int N = 2; N <= 10; ++N) {
    const auto t0 = std::chrono::steady_clock::now();
    auto w = round(build_cantor_profile({N, Schedule::pow6()}));
    const auto out = dichotomy(w);
    const double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    const std::string tag = "N=" + std::to_string(N) + ": ";
    o.require(out.branch == Branch::PathologicalCantor,
              tag + "branch " + std::string(to_string(out.branch)));
    o.require(out.cantor_likeness && out.cantor_likeness->pass, tag + "cantor likeness failed");
    if (!out.non_monotonic || !out.non_monotonic->limit) {
      o.require(false, tag + "no declared limit");
      continue;
    }
    const auto& lv = out.non_monotonic->limit->levels;
    for (int j = 0; j < N; ++j) {
      o.require(lv[j].size() == (std::size_t(1) << j), tag + "level " + std::to_string(j) + " count");
      const double diam = std::pow(3.0, -j) + 1e-15;
      for (const auto& a : lv[j]) {
        o.require(a.length() <= diam, tag + "diameter at level " + std::to_string(j));
        int kids = 0;
        for (const auto& b : lv[j + 1])
          if (b.lo >= a.lo && b.hi <= a.hi) ++kids;
        o.require(kids == 2, tag + "split at level " + std::to_string(j));
      }
    }
    if (N == 10) o.require(dt < kDichotomySeconds, "runtime at N=10 " + std::to_string(dt) + " s");
  }
  if (o.pass) o.why << "N=2..10 PathologicalCantor, slowest " << slowest << " s";
}

void criterion3(Outcome& o) {
  std::size_t prev = 0;
  double lowest = 1.0;
  for (int N = 1; N <= 8; ++N) {
    const auto spec = stable_area_spectrum(round(build_cantor_profile({N, Schedule::pow6()})), 10.0);
    std::vector<double> want{1.0};
    for (int n = 1; n <= N; ++n) want.push_back(std::pow(1.0 - std::pow(6.0, -n) * std::exp(-1.0), 2));
    std::sort(want.begin(), want.end());
    const std::string tag = "N=" + std::to_string(N) + ": ";
    o.require(spec.size() == std::size_t(N + 1), tag + std::to_string(spec.size()) + " values");
    if (N > 1) o.require(spec.size() == prev + 1, tag + "count did not grow by one");
    prev = spec.size();
    for (std::size_t i = 0; i < std::min(spec.size(), want.size()); ++i)
      o.require(std::fabs(spec[i] - want[i]) <= kAreaTol, tag + "value " + std::to_string(i));
    for (double a : spec) lowest = std::min(lowest, a);
  }
  if (!(lowest > 0.9 && lowest <= 1.0)) {
    std::ostringstream ss;
    ss.precision(12);
    ss << "least area " << lowest << " is outside (0.9, 1]; the slice area is f^2 and "
       << "f at a level-1 midpoint is 1 - exp(-1)/6";
    o.require(false, ss.str());
  }
  if (o.pass) o.why << "N+1 values for N=1..8, all in (0.9, 1]";
}

void criterion4(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  auto w = round(Profile(sum({constant(2.0), cosine(1.0, 1)}), true));
  const auto out = dichotomy(w);
  o.require(out.branch == Branch::WeakCore, "branch " + std::string(to_string(out.branch)));
  if (out.core) {
    o.require(std::fabs(out.core->arc.lo - 0.5) <= kEnclosureTol &&
                  std::fabs(out.core->arc.hi - 1.5) <= kEnclosureTol,
              "core is not [1/2, 3/2]");
    o.require(weak_core_boundary_bound(w, *out.core).pass, "boundary bound failed");
  }
  const auto reps = slice_reports(w);
  o.require(reps.size() == 2, "expected two slices");
  for (const auto& r : reps) {
    const double f = w.profile().eval(r.t);
    o.require(r.index == sphere2_count(f * f * r.jacobi_potential), "index differs from enumeration");
    const bool top = std::fabs(r.t) < 1e-6 || std::fabs(r.t - 1) < 1e-6;
    o.require(std::fabs(r.area - (top ? 9.0 : 1.0)) <= kAreaTol, "area mismatch");
    o.require(r.index == (top ? 225 : 0), "index " + std::to_string(r.index));
  }
  const double dt = seconds_since(t0);
  o.require(dt < kCoreSeconds, "runtime " + std::to_string(dt) + " s");
  if (o.pass) o.why << "WeakCore [1/2, 3/2], indices 0 and 225, areas 1 and 9, " << dt << " s";
}

void criterion5(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const double omega = 5.0;
  const auto model = decompose(round(Profile(constant(1.0), true)), omega);
  o.require(model.full.size() == 1 && model.full[0].m == 4, "expected one RP^4 factor");
  o.require(model.c_prime == 1.0, "C' != 1");
  const std::vector<long long> want{1, 1, 1, 1, 0, 0};
  for (int k = 1; k <= 6; ++k)
    o.require(cohomology_dims(model, k) == want[k - 1], "degree " + std::to_string(k));
  for (int k = int(std::ceil(model.c_prime * omega)); k <= 40; ++k)
    o.require(cohomology_dims(model, k) == 0, "nonvanishing in degree " + std::to_string(k));
  for (int m = 1; m <= 3; ++m) {
    const auto h = tp_homology(m, 8);
    o.require(h.betti == std::vector<long long>(m + 1, 1), "TP^" + std::to_string(m) + " Betti");
  }
  const double dt = seconds_since(t0);
  o.require(dt < kTopologySeconds, "runtime " + std::to_string(dt) + " s");
  if (o.pass) o.why << "RP^4, dims (1,1,1,1,0,0), TP^1..3 Betti all ones, " << dt << " s";
}

void criterion6(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto corpus = random_trig_profiles(20);
  double worst1 = 0.0, worst2 = 0.0;
  long long exceptions = 0, crit = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const int n = 2 + int(i % 3);
    auto w = round(corpus[i], n);
    const auto& p = w.profile();
    std::vector<double> fd(1000), exact(1000);
    double sup = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double t = (k + 0.5) / 1000, h = 1e-5;
      fd[k] = (slice_area(w, t + h) - slice_area(w, t - h)) / (2 * h);
      exact[k] = n * p.eval(t, 1) * std::pow(p.eval(t), n - 1);
      sup = std::max(sup, std::fabs(exact[k]));
    }
    for (int k = 0; k < 1000; ++k)
      worst1 = std::max(worst1, std::fabs(fd[k] - exact[k]) / std::max(std::fabs(exact[k]), 1e-3 * sup));
    for (const auto& r : slice_reports(w)) {
      ++crit;
      const double h = 1e-4;
      const double second =
          (slice_area(w, r.t + h) - 2 * slice_area(w, r.t) + slice_area(w, r.t - h)) / (h * h);
      const double want = -r.jacobi_potential * r.area;
      worst2 = std::max(worst2, std::fabs(second - want) / std::max(std::fabs(want), 1e-8));
      if (r.stability == Stability::Unstable &&
          !(r.left.kind == SideKind::Expanding && r.right.kind == SideKind::Expanding))
        ++exceptions;
      if (r.stability == Stability::StrictlyStable &&
          !(r.left.kind == SideKind::Contracting && r.right.kind == SideKind::Contracting))
        ++exceptions;
    }
  }
  o.require(worst1 <= kFirstVariationTol, "first variation error " + std::to_string(worst1));
  o.require(worst2 <= kSecondVariationTol, "second variation error " + std::to_string(worst2));
  o.require(exceptions == 0, std::to_string(exceptions) + " stability/side exceptions");
  const double dt = seconds_since(t0);
  o.require(dt < kVariationSeconds, "runtime " + std::to_string(dt) + " s");
  if (o.pass)
    o.why << "20 profiles, " << crit << " critical slices, first " << worst1 << ", second " << worst2
          << ", " << dt << " s";
}

void criterion7(Outcome& o) {
  auto corpus = random_trig_profiles(20);
  corpus.emplace_back(constant(1.0), true);
  corpus.emplace_back(sum({constant(2.0), cosine(1.0, 1)}), true);
  corpus.emplace_back(trig({3.0, 0.0, 1.0}, {0.0, 0.2}), true);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto v = analytic_no_accumulating(round(corpus[i]));
    o.require(v.pass, "profile " + std::to_string(i) + ": " + v.detail);
  }
  auto flat = round(Profile(constant(1.0), true));
  o.require(flat.critical().full_plateau(), "constant profile is not one full plateau");
  if (o.pass) o.why << corpus.size() << " analytic profiles, constant profile exercises the plateau case";
}

void criterion8(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto good = synthesize_widths(1.0, 1.0, 2, 1000);
  o.require(width_growth_check(good, 1.0, 1.0).pass, "synthetic widths failed");
  WidthTable bad = good;
  for (auto& e : bad.entries) e.omega = 1.05 * double(e.p);
  long long first = 0;
  for (long long p = 1; p <= 1000 && !first; ++p)
    if (p * p > 8000) first = p;
  const auto v = width_growth_check(bad, 1.0, 1.0);
  o.require(!v.pass && v.first_p && *v.first_p == first,
            "first violation " + (v.first_p ? std::to_string(*v.first_p) : "none") + " != " +
                std::to_string(first));
  WidthTable weyl;
  weyl.n = 2;
  for (long long p = 1; p <= 10000; ++p) weyl.entries.push_back({p, 7.0 * std::cbrt(double(p)) + 50.0});
  const auto est = weyl_check(weyl, 1.0, kWeylTol);
  o.require(std::fabs(est.a_hat - 7.0) <= kWeylTol, "a_hat " + std::to_string(est.a_hat));
  const auto c1 = counting_contradiction({1.0}, 10.0, 2, 1, 5.0);
  const auto c2 = counting_contradiction({1.0, 2.0}, 10.0, 2, 1, 5.0);
  o.require(c1.p == 9, "counting {1} gave " + std::to_string(c1.p));
  o.require(c2.p == 65, "counting {1,2} gave " + std::to_string(c2.p));
  const double dt = seconds_since(t0);
  o.require(dt < kWidthSeconds, "runtime " + std::to_string(dt) + " s");
  if (o.pass)
    o.why << "first violation p=" << first << ", a_hat=" << est.a_hat << ", p=9 and p=65, " << dt << " s";
}

void criterion9(Outcome& o) {
  auto stair = round(Profile(sum({constant(1.0), staircase({})}), false));
  const auto sp = detect_spindles(stair);
  bool acc = false;
  for (const auto& s : sp) acc |= s.accumulating;
  o.require(acc, "staircase has no accumulating spindle");
  const auto out = dichotomy(stair);
  o.require(out.branch == Branch::Spindle, "staircase branch " + std::string(to_string(out.branch)));
  o.require(out.spindle && out.spindle->accumulating, "spindle payload not accumulating");
  o.require(!out.non_monotonic && !out.cantor_likeness, "Cantor branch was consulted");

  auto cw = round(Profile(sum({constant(2.0), cosine(1.0, 1)}), true));
  const auto cs = detect_spindles(cw);
  o.require(cs.size() == 1 && !cs[0].accumulating, "2 + cos spindle missing or accumulating");
  const auto co = dichotomy(cw);
  o.require(co.branch == Branch::WeakCore, "2 + cos branch " + std::string(to_string(co.branch)));
  o.require(co.non_accumulating_spindles.size() == 1, "non-accumulating spindle not reported");
  if (o.pass) o.why << "staircase routes to Spindle, 2 + cos keeps WeakCore";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"cantor construction at depth 6", criterion1},
      {"pathological branch for depths 2..10", criterion2},
      {"stable area spectrum of the Cantor profiles", criterion3},
      {"weak core of 2 + cos", criterion4},
      {"flat product cycle space and truncated products", criterion5},
      {"variational oracles on random trigonometric profiles", criterion6},
      {"analytic profiles have no accumulation", criterion7},
      {"width arithmetic", criterion8},
      {"spindle detection and routing", criterion9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.why.str().c_str());
    failures += !o.pass;
  }
  return failures ? 1 : 0;
}
