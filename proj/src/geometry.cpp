#include "warpmin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace warpmin {

namespace {

constexpr double kLocateEps = 1e-12;

long long binom(int a, int b) {
  if (b < 0 || a < b) return 0;
  long double r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return static_cast<long long>(std::llround(r));
}

// Lattice points l in Z^dim with |l|^2 = s, for all s <= smax.
void lattice_shells(int dim, long long smax, std::map<long long, long long>& out,
                    long long acc = 0) {
  if (dim == 0) {
    out[acc] += 1;
    return;
  }
  const long long r = static_cast<long long>(std::floor(std::sqrt(double(smax - acc)))) + 1;
  for (long long l = -r; l <= r; ++l) {
    const long long s = acc + l * l;
    if (s > smax) continue;
    lattice_shells(dim - 1, smax, out, s);
  }
}

SideKind kind_from_sign(Sign s, Side side) {
  if (s == Sign::Zero) return SideKind::Foliated;
  const bool toward = side == Side::Right ? s == Sign::Positive : s == Sign::Negative;
  return toward ? SideKind::Contracting : SideKind::Expanding;
}

}  // namespace

FiberSpectrum FiberSpectrum::sphere(int n) {
  if (n < 1) throw DomainError("sphere dimension must be >= 1");
  FiberSpectrum s;
  s.kind_ = Kind::Sphere;
  s.dim_ = n;
  s.cutoff_ = std::numeric_limits<double>::infinity();
  return s;
}

FiberSpectrum FiberSpectrum::torus(int n) {
  if (n < 1 || n > 8) throw DomainError("torus dimension must lie in [1, 8]");
  FiberSpectrum s;
  s.kind_ = Kind::Torus;
  s.dim_ = n;
  s.cutoff_ = std::numeric_limits<double>::infinity();
  return s;
}

FiberSpectrum FiberSpectrum::listed(std::vector<SpectrumLevel> levels, int dim) {
  if (levels.empty()) throw InputError("fiber spectrum is empty");
  std::sort(levels.begin(), levels.end(),
            [](const SpectrumLevel& a, const SpectrumLevel& b) { return a.eigenvalue < b.eigenvalue; });
  std::vector<SpectrumLevel> merged;
  for (auto& l : levels) {
    if (!std::isfinite(l.eigenvalue) || l.eigenvalue < 0.0)
      throw InputError("fiber eigenvalues must be finite and nonnegative");
    if (l.multiplicity < 1) throw InputError("fiber multiplicities must be >= 1");
    if (!merged.empty() && merged.back().eigenvalue == l.eigenvalue)
      merged.back().multiplicity += l.multiplicity;
    else
      merged.push_back(l);
  }
  if (merged[0].eigenvalue != 0.0 || merged[0].multiplicity != 1)
    throw InputError("fiber spectrum must start with eigenvalue 0 of multiplicity 1");
  FiberSpectrum s;
  s.kind_ = Kind::Listed;
  s.dim_ = dim;
  s.cutoff_ = merged.back().eigenvalue;
  s.listed_ = std::move(merged);
  return s;
}

std::vector<SpectrumLevel> FiberSpectrum::levels_upto(double x) const {
  std::vector<SpectrumLevel> out;
  switch (kind_) {
    case Kind::Sphere:
      for (int k = 0;; ++k) {
        const double mu = double(k) * double(k + dim_ - 1);
        if (mu > x) break;
        out.push_back({mu, binom(dim_ + k, dim_) - binom(dim_ + k - 2, dim_)});
      }
      break;
    case Kind::Torus: {
      if (x < 0.0) break;
      const double c = 4.0 * std::numbers::pi * std::numbers::pi;
      const auto smax = static_cast<long long>(std::floor(x / c));
      std::map<long long, long long> shells;
      lattice_shells(dim_, smax, shells);
      for (auto& [s, m] : shells)
        if (c * double(s) <= x) out.push_back({c * double(s), m});
      break;
    }
    case Kind::Listed:
      for (auto& l : listed_)
        if (l.eigenvalue <= x) out.push_back(l);
      break;
  }
  return out;
}

long long FiberSpectrum::count_below(double x) const {
  if (x <= 0.0) return 0;
  if (!(x < cutoff_))
    throw CutoffError("fiber spectrum listed only up to " + std::to_string(cutoff_) +
                          "; eigenvalues up to " + std::to_string(x) + " are needed",
                      x);
  long long total = 0;
  for (auto& l : levels_upto(x))
    if (l.eigenvalue < x) total += l.multiplicity;
  return total;
}

std::string FiberSpectrum::describe() const {
  switch (kind_) {
    case Kind::Sphere: return "sphere:" + std::to_string(dim_);
    case Kind::Torus: return "torus:" + std::to_string(dim_);
    case Kind::Listed: return "listed";
  }
  return "?";
}

WarpedProduct::WarpedProduct(Profile profile, int fiber_dim, double fiber_area,
                             FiberSpectrum spectrum, double tol)
    : profile_(std::move(profile)),
      n_(fiber_dim),
      a0_(fiber_area),
      spectrum_(std::move(spectrum)),
      tol_(tol) {
  if (n_ < 2) throw DomainError("fiber dimension must be >= 2");
  if (!(a0_ > 0.0) || !std::isfinite(a0_)) throw DomainError("fiber area must be positive");
  if (spectrum_.dim() != n_)
    throw DomainError("fiber spectrum dimension " + std::to_string(spectrum_.dim()) +
                      " does not match fiber dimension " + std::to_string(n_));
  critical_ = std::make_shared<const CriticalSet>(isolate_critical_points(profile_, tol));
  auto idx = std::make_shared<std::vector<Entry>>();
  const auto& cs = *critical_;
  for (std::size_t i = 0; i < cs.isolated.size(); ++i)
    idx->push_back({cs.isolated[i].enclosure.lo, cs.isolated[i].enclosure.hi,
                    {Feature::Type::Isolated, i}});
  for (std::size_t i = 0; i < cs.plateaus.size(); ++i) {
    const auto& a = cs.plateaus[i].arc;
    const Feature f{Feature::Type::Plateau, i};
    if (cs.plateaus[i].full) {
      idx->push_back({0.0, 1.0, f});
    } else if (a.hi > 1.0) {
      idx->push_back({a.lo, 1.0, f});
      idx->push_back({0.0, a.hi - 1.0, f});
    } else {
      idx->push_back({a.lo, a.hi, f});
    }
  }
  std::sort(idx->begin(), idx->end(), [](const Entry& a, const Entry& b) { return a.lo < b.lo; });
  index_ = std::move(idx);

  std::vector<DeclaredPoint> pts;
  for (auto& l : cs.limits) {
    if (auto* c = std::get_if<CantorLimit>(&l)) {
      for (auto& arc : c->levels[c->depth]) {
        if (arc.lo == 0.0)
          pts.push_back({0.0, true, true});
        else
          pts.push_back({arc.lo, false, true});
        if (arc.hi < 1.0) pts.push_back({arc.hi, true, false});
      }
    } else if (auto* s = std::get_if<StairLimit>(&l)) {
      pts.push_back({s->point, s->side == Side::Left, s->side == Side::Right});
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const DeclaredPoint& a, const DeclaredPoint& b) { return a.t < b.t; });
  auto merged = std::make_shared<std::vector<DeclaredPoint>>();
  for (auto& p : pts) {
    if (!merged->empty() && std::fabs(merged->back().t - p.t) <= kLocateEps) {
      merged->back().left_accumulating |= p.left_accumulating;
      merged->back().right_accumulating |= p.right_accumulating;
    } else {
      merged->push_back(p);
    }
  }
  declared_ = std::move(merged);
}

const DeclaredPoint* WarpedProduct::find_declared(double t) const {
  const auto& d = *declared_;
  if (d.empty()) return nullptr;
  const double x = wrap01(t);
  auto it = std::lower_bound(d.begin(), d.end(), x,
                             [](const DeclaredPoint& p, double v) { return p.t < v; });
  for (auto cand : {it, it == d.begin() ? d.end() - 1 : std::prev(it), d.begin()}) {
    if (cand == d.end()) continue;
    if (circular_distance(cand->t, x) <= kLocateEps) return &*cand;
  }
  return nullptr;
}

std::optional<WarpedProduct::Feature> WarpedProduct::locate(double t) const {
  const auto& ix = *index_;
  if (ix.empty()) return std::nullopt;
  const double x = wrap01(t);
  for (double probe : {x, x + 1.0, x - 1.0}) {
    auto it = std::upper_bound(ix.begin(), ix.end(), probe + kLocateEps,
                               [](double v, const Entry& e) { return v < e.lo; });
    for (int back = 0; back < 2 && it != ix.begin(); ++back) {
      --it;
      if (probe >= it->lo - kLocateEps && probe <= it->hi + kLocateEps) return it->f;
    }
  }
  return std::nullopt;
}

double WarpedProduct::gap(double t, Side side, const Feature& self) const {
  const auto& ix = *index_;
  const std::size_t n = ix.size();
  auto same = [&](const Entry& e) {
    return e.f.type == self.type && e.f.index == self.index;
  };
  const double x = wrap01(t);
  if (side == Side::Right) {
    std::size_t start = std::upper_bound(ix.begin(), ix.end(), x,
                                         [](double v, const Entry& e) { return v < e.lo; }) -
                        ix.begin();
    for (std::size_t k = 0; k < n; ++k) {
      const Entry& e = ix[(start + k) % n];
      if (same(e)) continue;
      const double d = wrap01(e.lo - x);
      return d == 0.0 ? 1.0 : d;
    }
  } else {
    std::size_t start = std::upper_bound(ix.begin(), ix.end(), x,
                                         [](double v, const Entry& e) { return v < e.lo; }) -
                        ix.begin();
    for (std::size_t k = 1; k <= n; ++k) {
      const Entry& e = ix[(start + n - k) % n];
      if (same(e)) continue;
      const double d = wrap01(x - e.hi);
      return d == 0.0 ? 1.0 : d;
    }
  }
  return 1.0;
}

std::string_view to_string(SideKind k) {
  switch (k) {
    case SideKind::Contracting: return "Contracting";
    case SideKind::Expanding: return "Expanding";
    case SideKind::Foliated: return "Foliated";
    case SideKind::Accumulating: return "Accumulating";
  }
  return "?";
}

std::string_view to_string(Provenance p) {
  return p == Provenance::Exact ? "exact" : "declared-limit";
}

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::StrictlyStable: return "StrictlyStable";
    case Stability::DegenerateStable: return "DegenerateStable";
    case Stability::Unstable: return "Unstable";
  }
  return "?";
}

std::string_view to_string(SliceKind k) {
  switch (k) {
    case SliceKind::Isolated: return "isolated";
    case SliceKind::PlateauEnd: return "plateau-end";
    case SliceKind::PlateauInterior: return "plateau-interior";
    case SliceKind::FullCircle: return "full-circle";
  }
  return "?";
}

double slice_area(const WarpedProduct& w, double t) {
  return w.fiber_area() * std::pow(w.profile().eval(t, 0), w.fiber_dim());
}

double mean_curvature_scalar(const WarpedProduct& w, double t) {
  return w.fiber_dim() * w.profile().eval(t, 1) / w.profile().eval(t, 0);
}

double jacobi_potential(const WarpedProduct& w, double t) {
  const double f = w.profile().eval(t, 0), f1 = w.profile().eval(t, 1),
               f2 = w.profile().eval(t, 2);
  const double n = w.fiber_dim();
  return n * (f1 / f) * (f1 / f) - n * f2 / f;
}

Stability stability_of(double lambda_min) {
  if (lambda_min > 0.0) return Stability::StrictlyStable;
  if (lambda_min == 0.0) return Stability::DegenerateStable;
  return Stability::Unstable;
}

SliceSpectrum slice_spectrum(const WarpedProduct& w, double t0) {
  if (!w.locate(t0))
    throw DomainError("t = " + std::to_string(t0) + " is not a critical point");
  const double q = jacobi_potential(w, t0);
  const double f = w.profile().eval(t0, 0);
  return {0.0 - q, w.spectrum().count_below(f * f * q)};
}

std::vector<DeclaredPoint> declared_limit_points(const WarpedProduct& w) {
  return w.declared();
}

namespace {

// Finite-depth evidence for accumulation at t0: at every scale r_j, j < depth,
// a critical point other than t0's own component and a non-critical point
// both lie within r_j of t0.
void cross_check_limit(const WarpedProduct& w, double t0) {
  const auto& prof = w.profile();
  const auto& cs = w.critical();
  auto fail = [&](const std::string& why) {
    throw ModelInconsistencyError("declared limit point t = " + std::to_string(t0) +
                                  " failed finite-depth check: " + why);
  };
  for (auto& l : cs.limits) {
    if (auto* c = std::get_if<CantorLimit>(&l)) {
      for (int j = 0; j < c->depth; ++j) {
        const double r = std::pow(3.0, -j);
        const auto& lv = c->levels[j];
        auto it = std::upper_bound(lv.begin(), lv.end(), t0 + kLocateEps,
                                   [](double v, const Arc& a) { return v < a.lo; });
        if (it == lv.begin()) continue;
        const Arc* comp = &*std::prev(it);
        if (t0 > comp->hi + kLocateEps) continue;  // t0 belongs to another structure
        const double m = comp->mid();
        const double hw = comp->length() / 6.0;
        if (!(circular_distance(m, t0) < r) || !cs.contains(m, kLocateEps))
          fail("no critical witness at scale 3^-" + std::to_string(j));
        if (prof.eval(m + 0.5 * hw, 1) == 0.0)
          fail("no non-critical witness at scale 3^-" + std::to_string(j));
      }
    } else if (auto* s = std::get_if<StairLimit>(&l)) {
      if (circular_distance(s->point, t0) > kLocateEps) continue;
      const double dir = s->side == Side::Left ? -1.0 : 1.0;
      for (int j = 0; j < s->depth; ++j) {
        const double r = s->reach * std::ldexp(1.0, -j);
        const double crit = s->point + dir * 0.5 * r;
        const double noncrit = s->point + dir * 0.75 * r;
        if (!cs.contains(crit, kLocateEps))
          fail("no critical witness at scale " + std::to_string(r));
        if (prof.eval(noncrit, 1) == 0.0 || cs.contains(noncrit, 0.0))
          fail("no non-critical witness at scale " + std::to_string(r));
      }
    }
  }
}

}  // namespace

SideClass classify_side(const WarpedProduct& w, double t0, Side side) {
  const auto feat = w.locate(t0);
  if (!feat) throw DomainError("t = " + std::to_string(t0) + " is not a critical point");
  const auto& cs = w.critical();
  const auto& prof = w.profile();
  Sign s = Sign::Zero;
  double inside = 0.0;  // room left inside a plateau on this side
  if (feat->type == WarpedProduct::Feature::Type::Isolated) {
    const auto& c = cs.isolated[feat->index];
    s = side == Side::Right ? c.right : c.left;
  } else {
    const auto& pl = cs.plateaus[feat->index];
    if (pl.full) {
      inside = 0.5;
    } else {
      const double x = pl.arc.lo + wrap01(t0 - pl.arc.lo + kLocateEps) - kLocateEps;
      if (side == Side::Right) {
        inside = pl.arc.hi - x;
        if (inside <= kLocateEps) s = pl.right;
      } else {
        inside = x - pl.arc.lo;
        if (inside <= kLocateEps) s = pl.left;
      }
    }
  }
  SideClass out;
  out.kind = kind_from_sign(s, side);
  const double dir = side == Side::Right ? 1.0 : -1.0;
  if (out.kind == SideKind::Foliated) {
    const double delta = std::min(1.0 / 16, 0.5 * inside);
    if (prof.eval(t0 + dir * delta, 1) != 0.0)
      throw ResolutionError("foliated side probe found f' != 0 at t = " +
                            std::to_string(t0 + dir * delta));
  } else {
    const double delta = std::min(1.0 / 16, 0.5 * w.gap(t0, side, *feat));
    const double v = prof.eval(t0 + dir * delta, 1);
    if (sign_of(v) != s)
      throw ResolutionError("side probe at t = " + std::to_string(t0 + dir * delta) +
                            " disagrees with certified sign of f'");
  }
  if (auto* d = w.find_declared(t0)) {
    const bool acc = side == Side::Left ? d->left_accumulating : d->right_accumulating;
    if (acc) {
      cross_check_limit(w, t0);
      out.finite_depth = out.kind;
      out.kind = SideKind::Accumulating;
      out.provenance = Provenance::DeclaredLimit;
    }
  }
  return out;
}

namespace {

SliceReport build_report(const WarpedProduct& w, double t0, SliceKind kind) {
  SliceReport r;
  r.t = t0;
  r.kind = kind;
  r.area = slice_area(w, t0);
  r.jacobi_potential = jacobi_potential(w, t0);
  const auto sp = slice_spectrum(w, t0);
  r.lambda_min = sp.lambda_min;
  r.index = sp.index;
  r.stability = stability_of(r.lambda_min);
  r.left = classify_side(w, t0, Side::Left);
  r.right = classify_side(w, t0, Side::Right);
  r.declared_limit = w.find_declared(t0) != nullptr;
  return r;
}

}  // namespace

SliceReport slice_report(const WarpedProduct& w, double t0) {
  const auto feat = w.locate(t0);
  if (!feat) throw DomainError("t = " + std::to_string(t0) + " is not a critical point");
  SliceKind kind = SliceKind::Isolated;
  bool degenerate = false;
  if (feat->type == WarpedProduct::Feature::Type::Plateau) {
    const auto& pl = w.critical().plateaus[feat->index];
    if (pl.full) {
      kind = SliceKind::FullCircle;
    } else {
      const double x = pl.arc.lo + wrap01(t0 - pl.arc.lo + kLocateEps) - kLocateEps;
      kind = (x - pl.arc.lo <= kLocateEps || pl.arc.hi - x <= kLocateEps)
                 ? SliceKind::PlateauEnd
                 : SliceKind::PlateauInterior;
    }
  } else {
    degenerate = w.critical().isolated[feat->index].degenerate;
  }
  auto r = build_report(w, t0, kind);
  r.degenerate = degenerate;
  return r;
}

std::vector<SliceReport> slice_reports(const WarpedProduct& w) {
  const auto& cs = w.critical();
  const auto& declared = w.declared();
  std::vector<SliceReport> out;
  for (auto& c : cs.isolated) {
    auto r = build_report(w, c.point(), SliceKind::Isolated);
    r.degenerate = c.degenerate;
    out.push_back(r);
  }
  for (auto& pl : cs.plateaus) {
    if (pl.full) {
      out.push_back(build_report(w, 0.0, SliceKind::FullCircle));
      continue;
    }
    out.push_back(build_report(w, wrap01(pl.arc.lo), SliceKind::PlateauEnd));
    out.push_back(build_report(w, wrap01(pl.arc.mid()), SliceKind::PlateauInterior));
    out.push_back(build_report(w, wrap01(pl.arc.hi), SliceKind::PlateauEnd));
  }
  for (auto& d : declared) {
    const bool present = std::any_of(out.begin(), out.end(), [&](const SliceReport& r) {
      return circular_distance(r.t, d.t) <= kLocateEps;
    });
    if (!present) out.push_back(build_report(w, d.t, SliceKind::PlateauInterior));
  }
  std::sort(out.begin(), out.end(),
            [](const SliceReport& a, const SliceReport& b) { return a.t < b.t; });
  return out;
}

Verdict analytic_no_accumulating(const WarpedProduct& w) {
  if (!w.profile().analytic())
    throw PreconditionError("analytic_no_accumulating requires a profile flagged analytic");
  const auto& cs = w.critical();
  Verdict v;
  if (!cs.limits.empty()) {
    v.detail = "analytic profile declares limit structure";
    return v;
  }
  if (!cs.plateaus.empty() && !cs.full_plateau()) {
    for (auto& p : cs.plateaus) v.witnesses.push_back(wrap01(p.arc.lo));
    v.detail = "non-isolated critical points on a non-constant analytic profile";
    return v;
  }
  for (auto& r : slice_reports(w)) {
    if (r.left.kind == SideKind::Accumulating || r.right.kind == SideKind::Accumulating) {
      v.witnesses.push_back(r.t);
    }
  }
  if (!v.witnesses.empty()) {
    v.detail = "accumulating side found";
    return v;
  }
  v.pass = true;
  if (cs.full_plateau()) {
    v.detail = "constant profile: every slice minimal, all sides foliated";
    v.witnesses.push_back(0.0);
  } else {
    v.detail = std::to_string(cs.isolated.size()) + " isolated critical points";
    for (auto& c : cs.isolated) v.witnesses.push_back(c.point());
  }
  return v;
}

}  // namespace warpmin
