#include "warpmin/profile.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace warpmin {

namespace {

void check_order(int order) {
  if (order < 0 || order > kMaxOrder)
    throw UnsupportedOrderError("derivative order " + std::to_string(order) +
                                " outside [0, " + std::to_string(kMaxOrder) + "]");
}

}  // namespace

Profile::Profile(Expr expr, bool analytic) : expr_(std::move(expr)), analytic_(analytic) {
  if (!expr_) throw InputError("profile has no expression");
  if (analytic_ && !expr_->analytic())
    throw InputError("profile flagged analytic contains bump, cantor or staircase nodes");
  fmin_ = certify_positive(expr_);
  auto atoms = std::make_shared<Atoms>();
  expr_->flatten(1.0, *atoms);
  atoms_ = std::move(atoms);
  auto lims = std::make_shared<std::vector<LimitStructure>>();
  expr_->declare_limits(*lims);
  limits_ = std::move(lims);
}

double Profile::eval(double t, int order) const {
  check_order(order);
  return expr_->eval(wrap01(t), order);
}

Interval Profile::enclose(Interval t, int order) const {
  check_order(order);
  return expr_->enclose(t, order);
}

double eval(const Profile& p, double t, int order) { return p.eval(t, order); }

double certify_positive(const Expr& e) {
  constexpr int kInitial = 256;
  constexpr double kMinWidth = 1e-9;
  std::vector<Interval> stack;
  for (int i = kInitial - 1; i >= 0; --i)
    stack.push_back({double(i) / kInitial, double(i + 1) / kInitial});
  double bound = std::numeric_limits<double>::infinity();
  while (!stack.empty()) {
    const Interval cell = stack.back();
    stack.pop_back();
    const Interval v = e->enclose(cell, 0);
    if (v.lo > 0.0) {
      bound = std::min(bound, v.lo);
      continue;
    }
    const double m = cell.mid();
    if (e->eval(wrap01(m), 0) <= 0.0)
      throw PositivityError("profile is not positive: f(" + std::to_string(m) +
                            ") = " + std::to_string(e->eval(wrap01(m), 0)));
    if (cell.width() < kMinWidth)
      throw PositivityError("positivity could not be certified near t = " +
                            std::to_string(m));
    stack.push_back({m, cell.hi});
    stack.push_back({cell.lo, m});
  }
  return bound;
}

double certify_positive(const Profile& p) { return certify_positive(p.expr()); }

std::vector<Arc> CriticalSet::plateau_arcs() const {
  std::vector<Arc> out;
  for (auto& p : plateaus) {
    if (p.full) {
      out.push_back({0.0, 1.0});
    } else if (p.arc.hi > 1.0) {
      out.push_back({p.arc.lo, 1.0});
      out.push_back({0.0, p.arc.hi - 1.0});
    } else {
      out.push_back(p.arc);
    }
  }
  std::sort(out.begin(), out.end(), [](const Arc& a, const Arc& b) { return a.lo < b.lo; });
  return out;
}

bool CriticalSet::contains(double t, double eps) const {
  for (auto& c : isolated)
    if (c.enclosure.contains(t, eps)) return true;
  for (auto& p : plateaus)
    if (p.full || p.arc.contains(t, eps)) return true;
  return false;
}

namespace {

struct Item {
  bool point = false;
  double lo = 0.0, hi = 0.0;
  Sign sign = Sign::Zero;  // spans only
  bool critical = true;    // points only
  bool degenerate = false;
};

struct Sweeper {
  const Profile& p;
  double tol;
  long budget = 4'000'000;
  std::vector<std::pair<double, double>> zeros;  // enclosures
  std::vector<std::pair<double, double>> ambiguous;

  void spend() {
    if (--budget < 0) throw ResolutionError("critical-point isolation budget exhausted");
  }

  double fp(double t) { return p.eval(t, 1); }

  void bisect(double lo, double hi) {
    const Sign slo = sign_of(fp(lo));
    while (hi - lo > tol) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      const double v = fp(mid);
      spend();
      if (v == 0.0) {
        lo = hi = mid;
        break;
      }
      if (sign_of(v) == slo)
        lo = mid;
      else
        hi = mid;
    }
    zeros.push_back({lo, hi});
  }

  void cell(double x0, double x1, bool record_left) {
    spend();
    const Interval f1 = p.enclose({x0, x1}, 1);
    if (!f1.contains_zero()) return;
    const Interval f2 = p.enclose({x0, x1}, 2);
    if (!f2.contains_zero()) {
      const double s0 = fp(x0), s1 = fp(x1);
      if (s0 == 0.0) {
        if (record_left) zeros.push_back({x0, x0});
      } else if (s1 != 0.0 && sign_of(s0) != sign_of(s1)) {
        bisect(x0, x1);
      }
      return;
    }
    const double mid = x0 + 0.5 * (x1 - x0);
    if (x1 - x0 <= 0.25 * tol || mid <= x0 || mid >= x1) {
      ambiguous.push_back({x0, x1});
      return;
    }
    cell(x0, mid, record_left);
    cell(mid, x1, true);
  }
};

// Sweeps (a, b) (or [a, b) with include_left) and returns spans and zero
// points in order.
std::vector<Item> numeric_sweep(const Profile& p, double a, double b, bool include_left,
                                double tol, std::vector<IsolatedCritical>& found) {
  Sweeper s{p, tol, 4'000'000, {}, {}};
  const int n = std::max(16, int(std::ceil((1 << 14) * (b - a))));
  for (int i = 0; i < n; ++i) {
    const double x0 = a + (b - a) * double(i) / n;
    const double x1 = i + 1 == n ? b : a + (b - a) * double(i + 1) / n;
    s.cell(x0, x1, i > 0 || include_left);
  }
  // Merge ambiguous leaves into clusters.
  std::sort(s.ambiguous.begin(), s.ambiguous.end());
  std::vector<std::pair<double, double>> clusters;
  for (auto& c : s.ambiguous) {
    if (!clusters.empty() && c.first <= clusters.back().second)
      clusters.back().second = std::max(clusters.back().second, c.second);
    else
      clusters.push_back(c);
  }
  std::vector<Item> pts;
  for (auto& z : s.zeros) pts.push_back({true, z.first, z.second, Sign::Zero, true, false});
  for (auto& c : clusters) {
    if (c.second - c.first > tol) {
      CriticalSet partial;
      for (auto& z : pts) partial.isolated.push_back({{z.lo, z.hi}, z.degenerate});
      throw IsolationError("cannot separate zeros of f' within tol near t = " +
                               std::to_string(0.5 * (c.first + c.second)),
                           std::move(partial));
    }
    pts.push_back({true, c.first, c.second, Sign::Zero, true, true});
  }
  std::sort(pts.begin(), pts.end(), [](const Item& x, const Item& y) { return x.lo < y.lo; });
  // Overlapping or touching enclosures describe one zero.
  std::vector<Item> merged;
  for (auto& z : pts) {
    if (!merged.empty() && z.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, z.hi);
      merged.back().degenerate = merged.back().degenerate || z.degenerate;
    } else {
      merged.push_back(z);
    }
  }
  for (auto& z : merged) {
    if (!z.degenerate) z.degenerate = p.enclose({z.lo, z.hi}, 2).contains_zero();
    found.push_back({{z.lo, z.hi}, z.degenerate});
  }
  auto span_sign = [&](double lo, double hi) {
    for (double f : {0.5, 0.25, 0.75, 0.125, 0.875}) {
      const double v = p.eval(lo + f * (hi - lo), 1);
      if (v != 0.0) return sign_of(v);
    }
    throw ResolutionError("f' sign not certifiable on (" + std::to_string(lo) + ", " +
                          std::to_string(hi) + ")");
  };
  std::vector<Item> out;
  double cur = a;
  for (auto& z : merged) {
    if (z.lo > cur) out.push_back({false, cur, z.lo, span_sign(cur, z.lo)});
    out.push_back(z);
    cur = z.hi;
  }
  if (b > cur) out.push_back({false, cur, b, span_sign(cur, b)});
  return out;
}

// Merges the ordered item list cyclically into maximal spans, plateaus and
// isolated points.
std::vector<Item> assemble(std::vector<Item> items) {
  // Noncritical points separate equal-sign spans; drop them.
  std::vector<Item> l;
  for (auto& it : items)
    if (!it.point || it.critical) l.push_back(it);

  auto merge_pass = [](std::vector<Item>& v) {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<Item> r;
      for (auto& it : v) {
        if (!r.empty()) {
          Item& b = r.back();
          if (!b.point && !it.point && b.sign == it.sign) {
            b.hi = it.hi;
            changed = true;
            continue;
          }
          if (b.point && it.point) {
            b.hi = std::max(b.hi, it.hi);
            b.degenerate = b.degenerate || it.degenerate;
            changed = true;
            continue;
          }
          if (b.point && !it.point && it.sign == Sign::Zero) {
            Item z = it;
            z.lo = b.lo;
            b = z;
            changed = true;
            continue;
          }
          if (!b.point && b.sign == Sign::Zero && it.point) {
            b.hi = it.hi;
            changed = true;
            continue;
          }
        }
        r.push_back(it);
      }
      v.swap(r);
    }
  };
  merge_pass(l);

  // Close the cycle.
  bool changed = true;
  while (changed && l.size() > 1) {
    changed = false;
    Item& f = l.front();
    Item& b = l.back();
    if (!f.point && !b.point && f.sign == b.sign) {
      b.hi = f.hi + 1.0;
      l.erase(l.begin());
      changed = true;
    } else if (f.point && b.point) {
      b.hi = f.hi + 1.0;
      b.degenerate = b.degenerate || f.degenerate;
      l.erase(l.begin());
      changed = true;
    } else if (f.point && !b.point && b.sign == Sign::Zero) {
      b.hi = f.hi + 1.0;
      l.erase(l.begin());
      changed = true;
    } else if (b.point && !f.point && f.sign == Sign::Zero) {
      f.lo = b.lo;
      f.hi += 1.0;
      Item moved = f;
      l.erase(l.begin());
      l.back() = moved;
      changed = true;
    }
  }
  for (auto& it : l) {
    if (it.lo >= 1.0) {
      it.lo -= 1.0;
      it.hi -= 1.0;
    }
  }
  return l;
}

}  // namespace

CriticalSet isolate_critical_points(const Profile& p, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  CriticalSet cs;
  cs.limits = p.limits();
  cs.resolution.tol = tol;
  for (auto& l : cs.limits) {
    if (auto* c = std::get_if<CantorLimit>(&l))
      cs.resolution.declared_depth = std::max(cs.resolution.declared_depth, c->depth);
    if (auto* s = std::get_if<StairLimit>(&l))
      cs.resolution.declared_depth = std::max(cs.resolution.declared_depth, s->depth);
  }
  const Atoms& atoms = p.atoms();
  std::vector<IsolatedCritical> found;
  std::vector<Item> items;

  if (atoms.trig_nonconstant()) {
    cs.resolution.symbolic = false;
    items = numeric_sweep(p, 0.0, 1.0, true, tol, found);
  } else if (atoms.bumps.empty() && atoms.slopes.empty()) {
    Plateau full;
    full.arc = {0.0, 1.0};
    full.full = true;
    cs.plateaus.push_back(full);
    return cs;
  } else {
    // Breakpoints: support ends, bump centers, and the seam.
    std::vector<double> bp{0.0};
    auto add_support = [&](double c, double w) {
      bp.push_back(wrap01(c - w));
      bp.push_back(wrap01(c + w));
    };
    for (auto& b : atoms.bumps) {
      add_support(b.center, b.halfwidth);
      bp.push_back(wrap01(b.center));
    }
    for (auto& s : atoms.slopes) add_support(s.center, s.halfwidth);
    std::sort(bp.begin(), bp.end());
    std::vector<double> x;
    for (double v : bp)
      if (x.empty() || v - x.back() > 1e-13) x.push_back(v);
    if (1.0 - x.back() <= 1e-13 && x.size() > 1) x.pop_back();
    const int k = int(x.size());
    auto locate = [&](double v) -> int {
      if (v >= 1.0 - 1e-13) return k;
      auto it = std::lower_bound(x.begin(), x.end(), v - 1e-13);
      return int(it - x.begin());
    };
    std::vector<int> dpos(k + 1, 0), dneg(k + 1, 0);
    auto cover = [&](double lo, double hi, Sign s) {
      // lo, hi in circle coordinates with lo < hi, hi - lo < 1
      auto add = [&](double a, double b) {
        const int i = locate(a), j = locate(b);
        if (j <= i) return;
        auto& d = s == Sign::Positive ? dpos : dneg;
        d[i] += 1;
        d[j] -= 1;
      };
      if (lo < 0.0) {
        add(lo + 1.0, 1.0);
        add(0.0, hi);
      } else if (hi > 1.0) {
        add(lo, 1.0);
        add(0.0, hi - 1.0);
      } else {
        add(lo, hi);
      }
    };
    for (auto& b : atoms.bumps) {
      if (b.amp == 0.0) continue;
      const Sign s = sign_of(b.amp);
      const Sign ns = s == Sign::Positive ? Sign::Negative : Sign::Positive;
      const double c = wrap01(b.center);
      cover(c - b.halfwidth, c, s);
      cover(c, c + b.halfwidth, ns);
    }
    for (auto& s : atoms.slopes) {
      if (s.amp == 0.0) continue;
      const double c = wrap01(s.center);
      cover(c - s.halfwidth, c + s.halfwidth, sign_of(s.amp));
    }
    std::vector<std::vector<Item>> pieces(k);
    int np = 0, nn = 0;
    for (int i = 0; i < k; ++i) {
      np += dpos[i];
      nn += dneg[i];
      const double a = x[i], b = i + 1 < k ? x[i + 1] : 1.0;
      if (np > 0 && nn > 0) {
        cs.resolution.symbolic = false;
        pieces[i] = numeric_sweep(p, a, b, false, tol, found);
      } else {
        const Sign s = np > 0 ? Sign::Positive : (nn > 0 ? Sign::Negative : Sign::Zero);
        pieces[i].push_back({false, a, b, s});
      }
    }
    for (int i = 0; i < k; ++i) {
      const Sign left = pieces[(i + k - 1) % k].back().sign;
      const Sign right = pieces[i].front().sign;
      Item pt{true, x[i], x[i], Sign::Zero, false, false};
      if (left == Sign::Zero || right == Sign::Zero) {
        pt.critical = true;
      } else {
        const double v = p.eval(x[i], 1);
        if (v == 0.0 || left != right) {
          pt.critical = true;
          pt.degenerate = left == right || p.eval(x[i], 2) == 0.0;
        }
      }
      items.push_back(pt);
      for (auto& it : pieces[i]) items.push_back(it);
    }
  }

  auto merged = assemble(std::move(items));
  if (merged.size() == 1 && !merged[0].point) {
    if (merged[0].sign != Sign::Zero)
      throw ModelInconsistencyError("f' has constant nonzero sign on the circle");
    Plateau full;
    full.arc = {0.0, 1.0};
    full.full = true;
    cs.plateaus.push_back(full);
    return cs;
  }
  const std::size_t m = merged.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Item& it = merged[i];
    const Item& prev = merged[(i + m - 1) % m];
    const Item& next = merged[(i + 1) % m];
    if (it.point) {
      IsolatedCritical c;
      c.enclosure = {it.lo, it.hi};
      c.degenerate = it.degenerate;
      c.left = prev.point ? Sign::Zero : prev.sign;
      c.right = next.point ? Sign::Zero : next.sign;
      cs.isolated.push_back(c);
    } else if (it.sign == Sign::Zero) {
      Plateau pl;
      pl.arc = {it.lo, it.hi};
      pl.left = prev.point ? Sign::Zero : prev.sign;
      pl.right = next.point ? Sign::Zero : next.sign;
      cs.plateaus.push_back(pl);
    } else {
      cs.spans.push_back({{it.lo, it.hi}, it.sign});
    }
  }
  auto by_lo = [](const auto& a, const auto& b) { return a.enclosure.lo < b.enclosure.lo; };
  std::sort(cs.isolated.begin(), cs.isolated.end(), by_lo);
  std::sort(cs.plateaus.begin(), cs.plateaus.end(),
            [](const Plateau& a, const Plateau& b) { return a.arc.lo < b.arc.lo; });
  std::sort(cs.spans.begin(), cs.spans.end(),
            [](const Span& a, const Span& b) { return a.arc.lo < b.arc.lo; });
  return cs;
}

}  // namespace warpmin
