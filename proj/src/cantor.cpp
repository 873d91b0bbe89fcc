#include "warpmin/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "warpmin/geometry.hpp"

namespace warpmin {

namespace {

constexpr double kArcEps = 1e-12;
constexpr double kEnclosureTol = 1e-9;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

const CantorLimit* find_limit(const Profile& p) {
  for (auto& l : p.limits())
    if (auto* c = std::get_if<CantorLimit>(&l)) return c;
  return nullptr;
}

void require_depth(const Profile& p, int depth) {
  if (depth < 0 || depth > kMaxCantorDepth)
    throw DomainError("cantor depth must lie in [0, " + std::to_string(kMaxCantorDepth) + "]");
  const CantorLimit* lim = find_limit(p);
  const int declared = lim ? lim->depth : 0;
  if (declared != depth)
    throw PreconditionError("profile declares cantor depth " + std::to_string(declared) +
                            ", expected " + std::to_string(depth));
}

}  // namespace

std::vector<Rational> midpoints(int n) { return cantor_midpoints(n); }

double cantor_sup_bound(const CantorSpec& spec) {
  double s = 0.0;
  for (int n = 1; n <= spec.depth; ++n)
    s += std::ldexp(1.0, n - 1) * spec.schedule.coefficient(n) * std::exp(-1.0);
  return s;
}

Profile build_cantor_profile(const CantorSpec& spec) {
  if (spec.depth < 0 || spec.depth > kMaxCantorDepth)
    throw DomainError("cantor depth " + std::to_string(spec.depth) + " outside [0, " +
                      std::to_string(kMaxCantorDepth) + "]");
  const double bound = cantor_sup_bound(spec);
  if (!(bound < 1.0))
    throw DomainError("schedule " + spec.schedule.name() + " gives sup h bound " + fmt(bound) +
                      " >= 1");
  return Profile(one_minus(cantor_sum(spec.depth, spec.schedule)), false);
}

Certificate verify_critical_structure(const Profile& profile, int depth) {
  require_depth(profile, depth);
  Certificate cert;
  cert.name = "critical-structure depth " + std::to_string(depth);
  WarpedProduct w(profile, 2, 1.0, FiberSpectrum::sphere(2));
  const auto& cs = w.critical();

  if (depth == 0) {
    cert.add("full-plateau", cs.full_plateau() && cs.isolated.empty(),
             "f' vanishes identically");
    bool one = true;
    for (int i = 0; i < 64; ++i) one = one && profile.eval(i / 64.0) == 1.0;
    cert.add("f-equals-one", one);
    return cert;
  }

  const auto comps = cantor_components(depth);
  const auto arcs = cs.plateau_arcs();
  bool match = arcs.size() == comps.size();
  for (std::size_t i = 0; match && i < arcs.size(); ++i)
    match = std::fabs(arcs[i].lo - comps[i].first.value()) <= kArcEps &&
            std::fabs(arcs[i].hi - comps[i].second.value()) <= kArcEps;
  cert.add("plateaus-are-components", match,
           std::to_string(arcs.size()) + " arcs, expected " + std::to_string(comps.size()));

  std::vector<double> mids;
  for (int n = 1; n <= depth; ++n)
    for (auto& m : cantor_midpoints(n)) mids.push_back(m.value());
  std::sort(mids.begin(), mids.end());
  bool iso = cs.isolated.size() == mids.size();
  for (std::size_t i = 0; iso && i < mids.size(); ++i)
    iso = cs.isolated[i].enclosure.length() <= kEnclosureTol &&
          cs.isolated[i].enclosure.contains(mids[i], kEnclosureTol);
  cert.add("isolated-are-midpoints", iso,
           std::to_string(cs.isolated.size()) + " isolated, expected " +
               std::to_string(mids.size()));

  std::size_t bad_min = 0;
  for (auto& c : cs.isolated) {
    const auto r = slice_report(w, c.point());
    if (r.stability != Stability::StrictlyStable || r.left.kind != SideKind::Contracting ||
        r.right.kind != SideKind::Contracting || c.degenerate)
      ++bad_min;
  }
  cert.add("midpoints-strict-minima", bad_min == 0,
           std::to_string(bad_min) + " midpoint(s) failing");

  std::size_t bad_int = 0, bad_end = 0, bad_val = 0;
  auto foliated = [](const SideClass& s) {
    return s.kind == SideKind::Foliated ||
           (s.kind == SideKind::Accumulating && s.finite_depth == SideKind::Foliated);
  };
  for (auto& pl : cs.plateaus) {
    const double m = wrap01(pl.arc.mid());
    if (!foliated(classify_side(w, m, Side::Left)) || !foliated(classify_side(w, m, Side::Right)))
      ++bad_int;
    if (classify_side(w, pl.arc.lo, Side::Left).kind != SideKind::Expanding) ++bad_end;
    if (classify_side(w, pl.arc.hi, Side::Right).kind != SideKind::Expanding) ++bad_end;
    for (double t : {pl.arc.lo, m, pl.arc.hi})
      if (profile.eval(wrap01(t)) != 1.0) ++bad_val;
  }
  cert.add("plateau-interiors-foliated", bad_int == 0, std::to_string(bad_int) + " failing");
  cert.add("plateau-ends-expanding", bad_end == 0, std::to_string(bad_end) + " failing");
  cert.add("f-equals-one-on-components", bad_val == 0, std::to_string(bad_val) + " failing");

  // Grid oracle: f' never changes sign from + to - between adjacent nonzero
  // samples, and every resolved dip shows exactly one - to + change.
  constexpr int kGrid = 100000;
  int down = 0;
  std::vector<double> ups;
  double prev = profile.eval(0.5 / kGrid, 1);
  for (int i = 1; i < kGrid; ++i) {
    const double t = (i + 0.5) / kGrid;
    const double v = profile.eval(t, 1);
    if (prev > 0.0 && v < 0.0) ++down;
    if (prev < 0.0 && v > 0.0) ups.push_back(t);
    prev = v;
  }
  std::size_t resolved = 0, found = 0;
  for (int n = 1; n <= depth; ++n) {
    if (double(kGrid) / double(pow3(n)) < 10.0) break;
    for (auto& m : cantor_midpoints(n)) {
      ++resolved;
      const double hw = 0.5 / double(pow3(n));
      if (std::any_of(ups.begin(), ups.end(),
                      [&](double u) { return std::fabs(u - m.value()) < hw; }))
        ++found;
    }
  }
  cert.add("grid-sign-oracle", down == 0 && found == resolved && ups.size() <= mids.size(),
           std::to_string(ups.size()) + " minima seen, " + std::to_string(found) + "/" +
               std::to_string(resolved) + " resolved midpoints, " + std::to_string(down) +
               " interior maxima");
  return cert;
}

Certificate verify_non_monotone_witnesses(const Profile& profile, int depth) {
  require_depth(profile, depth);
  Certificate cert;
  cert.name = "non-monotone-witnesses depth " + std::to_string(depth);
  if (depth == 0) return cert;

  // Dip test per midpoint, shared by all points that use it.
  std::vector<std::vector<char>> dip(depth);
  for (int i = 0; i < depth; ++i) {
    const auto ms = cantor_midpoints(i + 1);
    const double hw = 0.25 / double(pow3(i + 1));
    dip[i].resize(ms.size());
    for (std::size_t k = 0; k < ms.size(); ++k) {
      const double m = ms[k].value();
      dip[i][k] = profile.eval(m - hw, 1) < 0.0 && profile.eval(m + hw, 1) > 0.0 &&
                  profile.eval(m) < 1.0;
    }
  }
  const std::uint64_t full = pow3(depth);
  const auto lefts = cantor_left_numerators(depth);
  for (int i = 0; i < depth; ++i) {
    const std::uint64_t q = pow3(depth - i);
    const auto parents = cantor_left_numerators(i);
    std::size_t checked = 0, failed = 0;
    for (std::uint64_t a : lefts) {
      for (int end = 0; end < 2; ++end) {
        const std::uint64_t p = a + end;
        if (p == full) continue;
        ++checked;
        const std::uint64_t ai = end == 0 ? p / q : (p + q - 1) / q - 1;
        // |p/3^N - (2 ai + 1)/(2 3^i)| < 3^-i  <=>  |2p - (2ai+1) q| < 2q
        const auto num = static_cast<long long>(2 * p) - static_cast<long long>((2 * ai + 1) * q);
        const bool near = num != 0 && std::llabs(num) < static_cast<long long>(2 * q);
        const std::size_t k =
            std::lower_bound(parents.begin(), parents.end(), ai) - parents.begin();
        if (!near || k >= dip[i].size() || !dip[i][k]) ++failed;
      }
    }
    cert.add("scale 3^-" + std::to_string(i), failed == 0,
             std::to_string(checked - failed) + "/" + std::to_string(checked) +
                 " points with a dip within scale");
  }
  return cert;
}

Certificate cantor_likeness(const std::vector<std::vector<Arc>>& levels, int depth) {
  Certificate cert;
  cert.name = "cantor-likeness depth " + std::to_string(depth);
  if (static_cast<int>(levels.size()) < depth + 1) {
    cert.add("levels-present", false,
             std::to_string(levels.size()) + " levels for depth " + std::to_string(depth));
    return cert;
  }
  for (int j = 0; j < depth; ++j) {
    const auto& par = levels[j];
    const auto& kid = levels[j + 1];
    bool perfect = !par.empty(), nested = true;
    double diam = 0.0;
    for (auto& a : par) diam = std::max(diam, a.length());
    for (auto& c : kid)
      nested = nested && std::any_of(par.begin(), par.end(), [&](const Arc& a) {
                 return c.lo >= a.lo - kArcEps && c.hi <= a.hi + kArcEps;
               });
    for (auto& a : par) {
      std::vector<Arc> in;
      for (auto& c : kid)
        if (c.lo >= a.lo - kArcEps && c.hi <= a.hi + kArcEps) in.push_back(c);
      std::sort(in.begin(), in.end(), [](const Arc& x, const Arc& y) { return x.lo < y.lo; });
      std::size_t disjoint = in.empty() ? 0 : 1;
      for (std::size_t k = 1; k < in.size(); ++k)
        if (in[k].lo > in[k - 1].hi + kArcEps) ++disjoint;
      perfect = perfect && disjoint >= 2;
    }
    const std::string lv = "level " + std::to_string(j);
    cert.add("perfect " + lv, perfect,
             std::to_string(par.size()) + " components, " + std::to_string(kid.size()) +
                 " children");
    cert.add("disconnected " + lv, diam <= std::pow(3.0, -j) + 1e-15,
             "max diameter " + fmt(diam));
    cert.add("nested " + lv, nested);
  }
  return cert;
}

Certificate cantor_likeness(const NonMonotonicSet& set, int depth) {
  if (set.form == NonMonotonicSet::Form::DeclaredLimit && set.limit)
    return cantor_likeness(set.limit->levels, depth);
  if (set.points.empty()) {
    Certificate cert;
    cert.name = "cantor-likeness depth " + std::to_string(depth);
    cert.add("nonempty", false, "set is empty");
    return cert;
  }
  std::vector<Arc> pts;
  for (double t : set.points) pts.push_back({t, t});
  const int d = std::max(depth, 1);
  return cantor_likeness(std::vector<std::vector<Arc>>(d + 1, pts), d);
}

}  // namespace warpmin
