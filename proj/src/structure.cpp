#include "warpmin/structure.hpp"

#include <algorithm>
#include <cmath>

#include "warpmin/cantor.hpp"
#include "warpmin/cantor_set.hpp"

namespace warpmin {

namespace {

constexpr double kEps = 1e-12;

bool contracting(const SideClass& c) { return c.kind == SideKind::Contracting; }

bool any_contracting(const SliceReport& r) { return contracting(r.left) || contracting(r.right); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool declared_in_interior(const WarpedProduct& w, const Arc& arc) {
  for (auto& d : w.declared())
    if (arc.interior_contains(d.t, kEps)) return true;
  return false;
}

const CantorLimit* cantor_limit(const WarpedProduct& w) {
  for (auto& l : w.critical().limits)
    if (auto* c = std::get_if<CantorLimit>(&l)) return c;
  return nullptr;
}

}  // namespace

std::string_view to_string(ClassKind k) {
  switch (k) {
    case ClassKind::Isolated: return "Isolated";
    case ClassKind::Partial: return "Partial";
    case ClassKind::Full: return "Full";
  }
  return "?";
}

std::string_view to_string(IntervalCase c) {
  switch (c) {
    case IntervalCase::Inapplicable: return "inapplicable";
    case IntervalCase::InteriorContracting: return "interior-contracting";
    case IntervalCase::Foliated: return "foliated";
  }
  return "?";
}

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::WeaklyFrankel: return "WeaklyFrankel";
    case Branch::WeakCore: return "WeakCore";
    case Branch::Spindle: return "Spindle";
    case Branch::PathologicalCantor: return "PathologicalCantor";
    case Branch::Unresolved: return "Unresolved";
  }
  return "?";
}

FrankelResult is_weakly_frankel(const WarpedProduct& w) {
  FrankelResult out;
  for (auto& r : slice_reports(w)) {
    if (contracting(r.left)) out.contracting.push_back({r.t, Side::Left});
    if (contracting(r.right)) out.contracting.push_back({r.t, Side::Right});
  }
  out.weakly_frankel = out.contracting.empty();
  return out;
}

FoliationClasses foliation_classes(const WarpedProduct& w, double omega) {
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  const auto& cs = w.critical();
  FoliationClasses out;
  out.truncated = !cs.limits.empty();
  out.depth = cs.resolution.declared_depth;
  for (auto& c : cs.isolated) {
    const double t = c.point();
    const double area = slice_area(w, t);
    if (area > omega) continue;
    const auto st = stability_of(slice_spectrum(w, t).lambda_min);
    if (st == Stability::Unstable) continue;
    out.classes.push_back({ClassKind::Isolated, {t, t}, area, st});
  }
  for (auto& pl : cs.plateaus) {
    const double t = pl.full ? 0.0 : wrap01(pl.arc.mid());
    const double area = slice_area(w, t);
    if (area > omega) continue;
    const auto st = stability_of(slice_spectrum(w, t).lambda_min);
    if (st == Stability::Unstable) continue;
    if (pl.full)
      out.classes.push_back({ClassKind::Full, {0.0, 1.0}, area, st});
    else
      out.classes.push_back({ClassKind::Partial, pl.arc, area, st});
  }
  std::sort(out.classes.begin(), out.classes.end(),
            [](const FoliationClass& a, const FoliationClass& b) { return a.arc.lo < b.arc.lo; });
  return out;
}

std::vector<double> stable_area_spectrum(const WarpedProduct& w, double omega) {
  std::vector<double> areas;
  for (auto& c : foliation_classes(w, omega).classes) areas.push_back(c.area);
  std::sort(areas.begin(), areas.end());
  std::vector<double> out;
  for (double a : areas)
    if (out.empty() || a - out.back() > kEps) out.push_back(a);
  return out;
}

SongRegion make_region(const WarpedProduct& w, double a, double b) {
  a = wrap01(a);
  double bb = a + wrap01(b - a);
  if (bb - a <= kEps) bb = a + 1.0;
  SongRegion r;
  r.arc = {a, bb};
  r.a = {a, slice_area(w, a), classify_side(w, a, Side::Right)};
  r.b = {wrap01(bb), slice_area(w, bb), classify_side(w, bb, Side::Left)};
  r.contracting_boundary = contracting(r.a.inward) && contracting(r.b.inward);
  return r;
}

std::vector<SongRegion> cut_song_regions(const WarpedProduct& w, std::vector<double> cuts) {
  if (cuts.empty()) throw PreconditionError("at least one cut is required");
  for (double& c : cuts) {
    c = wrap01(c);
    if (!w.locate(c)) throw PreconditionError("cut at t = " + fmt(c) + " is not critical");
    if (!contracting(classify_side(w, c, Side::Left)) &&
        !contracting(classify_side(w, c, Side::Right)))
      throw PreconditionError("cut at t = " + fmt(c) + " is not contracting on either side");
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 1; i < cuts.size(); ++i)
    if (cuts[i] - cuts[i - 1] <= kEps) throw PreconditionError("cuts must be distinct");
  std::vector<SongRegion> out;
  for (std::size_t i = 0; i < cuts.size(); ++i)
    out.push_back(make_region(w, cuts[i], cuts[(i + 1) % cuts.size()]));
  return out;
}

bool is_weak_core(const WarpedProduct& w, const SongRegion& r, std::string* why) {
  auto fail = [&](std::string m) {
    if (why) *why = std::move(m);
    return false;
  };
  if (!contracting(r.a.inward) || !contracting(r.b.inward))
    return fail("boundary slice not contracting into the region");
  if (declared_in_interior(w, r.arc)) return fail("declared limit point in the interior");
  for (auto& rep : slice_reports(w))
    if (r.interior_contains(rep.t) && any_contracting(rep))
      return fail("interior slice at t = " + fmt(rep.t) + " is contracting");
  return true;
}

std::optional<SongRegion> find_weak_core(const WarpedProduct& w) {
  const auto reports = slice_reports(w);
  std::vector<const SliceReport*> con;
  for (auto& r : reports)
    if (any_contracting(r)) con.push_back(&r);
  if (con.empty())
    throw PreconditionError("profile is weakly Frankel; no weak core to look for");
  for (std::size_t i = 0; i < con.size(); ++i) {
    const auto& a = *con[i];
    if (!contracting(a.right)) continue;
    const auto& b = *con[(i + 1) % con.size()];
    if (!contracting(b.left)) continue;
    double hi = a.t + wrap01(b.t - a.t);
    if (hi - a.t <= kEps) hi = a.t + 1.0;
    if (declared_in_interior(w, {a.t, hi})) continue;
    SongRegion r;
    r.arc = {a.t, hi};
    r.a = {a.t, a.area, a.right};
    r.b = {b.t, b.area, b.left};
    r.contracting_boundary = true;
    return r;
  }
  return std::nullopt;
}

IntervalVerdict verify_interval_dichotomy(const WarpedProduct& w, const SongRegion& r) {
  IntervalVerdict out;
  bool applicable = false;
  for (auto [g, o] : {std::pair{&r.a, &r.b}, std::pair{&r.b, &r.a}}) {
    if (g->inward.kind == SideKind::Contracting || g->inward.kind == SideKind::Accumulating)
      continue;
    if (g->area <= o->area * (1.0 + 1e-12)) applicable = true;
  }
  if (!applicable) {
    out.detail = "no non-contracting boundary slice of least area";
    return out;
  }
  const auto reports = slice_reports(w);
  for (auto& rep : reports)
    if (r.interior_contains(rep.t) && any_contracting(rep)) out.witnesses.push_back(rep.t);

  bool foliated = false;
  const auto& cs = w.critical();
  if (cs.full_plateau()) {
    foliated = true;
  } else {
    const double probe = r.arc.mid();
    if (auto f = w.locate(probe); f && f->type == WarpedProduct::Feature::Type::Plateau) {
      const Arc& pa = cs.plateaus[f->index].arc;
      const double x = pa.lo + wrap01(r.arc.lo - pa.lo + kEps) - kEps;
      foliated = x >= pa.lo - kEps && x + r.arc.length() <= pa.hi + kEps;
    }
  }
  const bool interior = !out.witnesses.empty();
  if (interior == foliated)
    throw ModelInconsistencyError(
        std::string("interval dichotomy violated on [") + fmt(r.arc.lo) + ", " +
        fmt(r.arc.hi) + "]: " +
        (interior ? "both alternatives hold" : "neither alternative holds"));
  if (interior) {
    out.verdict = IntervalCase::InteriorContracting;
    out.detail = std::to_string(out.witnesses.size()) + " interior contracting slice(s)";
  } else {
    out.verdict = IntervalCase::Foliated;
    out.detail = "f' vanishes identically on the region";
    out.witnesses = {r.arc.lo, r.arc.hi};
  }
  return out;
}

std::vector<Spindle> detect_spindles(const WarpedProduct& w) {
  const auto& cs = w.critical();
  const CantorLimit* cl = cantor_limit(w);
  const auto& prof = w.profile();
  std::vector<Spindle> out;
  auto consider = [&](Arc arc, Sign left, Sign right, WarpedProduct::Feature feat) {
    if (left != Sign::Positive || right != Sign::Negative) return;
    if (cl) {
      auto inside = [&](Arc piece) {
        return std::any_of(cl->levels[cl->depth].begin(), cl->levels[cl->depth].end(),
                           [&](const Arc& c) {
                             return piece.lo >= c.lo - kEps && piece.hi <= c.hi + kEps;
                           });
      };
      const bool dissolves = arc.hi > 1.0 ? inside({arc.lo, 1.0}) && inside({0.0, arc.hi - 1.0})
                                          : inside(arc);
      if (dissolves) return;
    }
    Spindle s;
    s.arc = arc;
    s.left_probe = wrap01(arc.lo - std::min(1.0 / 16, 0.5 * w.gap(arc.lo, Side::Left, feat)));
    s.right_probe = wrap01(arc.hi + std::min(1.0 / 16, 0.5 * w.gap(arc.hi, Side::Right, feat)));
    if (!(prof.eval(s.left_probe, 1) > 0.0) || !(prof.eval(s.right_probe, 1) < 0.0))
      throw ResolutionError("spindle flank probe disagrees with certified signs near t = " +
                            fmt(arc.lo));
    for (auto& d : w.declared()) {
      if (!arc.contains(d.t, kEps)) continue;
      if (d.left_accumulating) s.accumulating_sides.push_back(Side::Left);
      if (d.right_accumulating) s.accumulating_sides.push_back(Side::Right);
      if (d.left_accumulating || d.right_accumulating) {
        s.accumulating = true;
        s.limit_point = d.t;
        const double x = arc.lo + wrap01(d.t - arc.lo + kEps) - kEps;
        if (d.left_accumulating && !d.right_accumulating && arc.hi - x > kEps)
          s.limit_arc = Arc{x, arc.hi};
        else if (d.right_accumulating && !d.left_accumulating && x - arc.lo > kEps)
          s.limit_arc = Arc{arc.lo, x};
        break;
      }
    }
    out.push_back(std::move(s));
  };
  using T = WarpedProduct::Feature::Type;
  for (std::size_t i = 0; i < cs.isolated.size(); ++i) {
    const auto& c = cs.isolated[i];
    consider(c.enclosure, c.left, c.right, {T::Isolated, i});
  }
  for (std::size_t i = 0; i < cs.plateaus.size(); ++i) {
    const auto& p = cs.plateaus[i];
    if (!p.full) consider(p.arc, p.left, p.right, {T::Plateau, i});
  }
  std::sort(out.begin(), out.end(),
            [](const Spindle& a, const Spindle& b) { return a.arc.lo < b.arc.lo; });
  return out;
}

NonMonotonicSet detect_non_monotonic(const WarpedProduct& w) {
  NonMonotonicSet out;
  const CantorLimit* cl = cantor_limit(w);
  if (!cl || cl->depth == 0) return out;
  out.form = NonMonotonicSet::Form::DeclaredLimit;
  out.limit = *cl;
  out.depth = cl->depth;
  const int n = cl->depth;
  for (auto& d : w.declared()) out.points.push_back(d.t);
  constexpr std::size_t kWitnessPoints = 4096;
  std::size_t used = 0;
  for (std::uint64_t a : cantor_left_numerators(n)) {
    for (int end = 0; end < 2 && used < kWitnessPoints; ++end) {
      const std::uint64_t p = a + end;
      if (p == pow3(n)) continue;
      ++used;
      for (int i = 0; i < n; ++i) {
        const std::uint64_t q = pow3(n - i);
        const std::uint64_t ai = end == 0 ? p / q : (p + q - 1) / q - 1;
        const double m = double(2 * ai + 1) / double(2 * pow3(i));
        out.witnesses.push_back({double(p) / double(pow3(n)), i, m});
      }
    }
  }
  return out;
}

DichotomyOutcome dichotomy(const WarpedProduct& w) {
  DichotomyOutcome out;
  auto invalid = [](const std::string& what) {
    throw ModelInconsistencyError("dichotomy payload failed revalidation: " + what);
  };
  try {
    if (is_weakly_frankel(w).weakly_frankel) {
      out.branch = Branch::WeaklyFrankel;
      return out;
    }
    const auto spindles = detect_spindles(w);
    for (auto& s : spindles)
      if (!s.accumulating) out.non_accumulating_spindles.push_back(s);
    if (auto core = find_weak_core(w)) {
      std::string why;
      if (!is_weak_core(w, *core, &why)) invalid(why);
      out.branch = Branch::WeakCore;
      out.core = std::move(core);
      return out;
    }
    for (auto& s : spindles) {
      if (s.accumulating && !out.spindle) out.spindle = s;
    }
    if (out.spindle) {
      const auto& s = *out.spindle;
      const auto& prof = w.profile();
      if (!(prof.eval(s.left_probe, 1) > 0.0) || !(prof.eval(s.right_probe, 1) < 0.0) ||
          !s.limit_point || !w.find_declared(*s.limit_point))
        invalid("spindle flanks or limit point");
      out.branch = Branch::Spindle;
      return out;
    }
    auto nm = detect_non_monotonic(w);
    if (!nm.empty()) {
      auto cert = cantor_likeness(nm, nm.depth);
      if (!cert.pass) invalid("non-monotonic set is not Cantor-like at the declared depth");
      out.branch = Branch::PathologicalCantor;
      out.non_monotonic = std::move(nm);
      out.cantor_likeness = std::move(cert);
      return out;
    }
  } catch (const ResolutionError& e) {
    out.branch = Branch::Unresolved;
    out.uncertainty = e.what();
    return out;
  }
  throw ModelInconsistencyError("no dichotomy branch applies to this profile");
}

Verdict weak_core_boundary_bound(const WarpedProduct& w, const SongRegion& core) {
  std::string why;
  if (!is_weak_core(w, core, &why)) throw PreconditionError("region is not a weak core: " + why);
  Verdict v;
  const double bound = std::max(core.a.area, core.b.area);
  double least = std::numeric_limits<double>::infinity();
  double at = 0.0;
  for (auto& rep : slice_reports(w)) {
    if (!core.interior_contains(rep.t)) continue;
    v.witnesses.push_back(rep.t);
    if (rep.area < least) {
      least = rep.area;
      at = rep.t;
    }
  }
  if (v.witnesses.empty()) {
    v.detail = "no interior minimal slice";
    return v;
  }
  v.pass = least > bound;
  v.detail = "least interior area " + fmt(least) + " at t = " + fmt(at) + (v.pass ? " > " : " <= ") +
             "boundary area " + fmt(bound);
  return v;
}

std::optional<double> find_noncontracting_accumulating(const WarpedProduct& w,
                                                       const SongRegion& region) {
  if (find_weak_core(w))
    throw PreconditionError("a weak core exists; the search applies only without one");
  std::optional<double> best;
  double best_area = -1.0;
  for (auto& d : w.declared()) {
    if (!region.interior_contains(d.t)) continue;
    const auto l = classify_side(w, d.t, Side::Left);
    const auto r = classify_side(w, d.t, Side::Right);
    const bool ok = (l.kind == SideKind::Accumulating && !contracting(r)) ||
                    (r.kind == SideKind::Accumulating && !contracting(l));
    if (!ok) continue;
    const double area = slice_area(w, d.t);
    if (area > best_area + kEps) {
      best_area = area;
      best = d.t;
    }
  }
  if (!best)
    throw ModelInconsistencyError("no non-contracting accumulating slice in [" +
                                  fmt(region.arc.lo) + ", " + fmt(region.arc.hi) + "]");
  return best;
}

}  // namespace warpmin
