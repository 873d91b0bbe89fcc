#include "warpmin/expr.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <charconv>
#include <cmath>
#include <numbers>

#include "warpmin/cantor_set.hpp"
#include "warpmin/errors.hpp"

namespace warpmin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> poly_derivative(const std::vector<double>& p) {
  std::vector<double> d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * double(i));
  if (d.empty()) d.push_back(0.0);
  return d;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

std::vector<double> poly_add(std::vector<double> a, const std::vector<double>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

std::vector<std::vector<double>> build_polys() {
  // P_{k+1} = (u^2-1)^2 P_k' - 4k u (u^2-1) P_k - 2u P_k
  std::vector<std::vector<double>> p{{1.0}};
  const std::vector<double> sq = {1.0, 0.0, -2.0, 0.0, 1.0};  // (u^2-1)^2
  for (int k = 0; k <= kMaxOrder; ++k) {
    const auto& pk = p.back();
    auto t1 = poly_mul(sq, poly_derivative(pk));
    auto t2 = poly_mul({0.0, 4.0 * k, 0.0, -4.0 * k}, pk);  // -4k u (u^2-1)
    auto t3 = poly_mul({0.0, -2.0}, pk);
    auto next = poly_add(poly_add(t1, t2), t3);
    while (next.size() > 1 && next.back() == 0.0) next.pop_back();
    p.push_back(std::move(next));
  }
  return p;
}

const std::vector<std::vector<double>>& polys() {
  static const auto p = build_polys();
  return p;
}

double horner(const std::vector<double>& c, double u) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * u + *it;
  return r;
}

Interval horner(const std::vector<double>& c, Interval u) {
  Interval r(0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * u + Interval(*it);
  return r;
}

// x^(-2k) exp(-1/x) for x in (0, 1]; 0 at x = 0.
double phi(double x, int k) {
  if (x <= 0.0) return 0.0;
  return std::exp(-1.0 / x - 2.0 * k * std::log(x));
}

void check_order(int order) {
  if (order < 0 || order > kMaxOrder)
    throw UnsupportedOrderError("derivative order " + std::to_string(order) +
                                " outside [0, " + std::to_string(kMaxOrder) + "]");
}

Interval pad(Interval a, double rel) {
  const double m = std::max(std::fabs(a.lo), std::fabs(a.hi)) * rel;
  return widen({a.lo - m, a.hi + m});
}

}  // namespace

namespace bump {

const std::vector<double>& poly(int k) {
  check_order(k);
  return polys()[k];
}

double psi(double u, int k) {
  if (!(std::fabs(u) < 1.0)) return 0.0;
  const double x = (1.0 - u) * (1.0 + u);
  if (k == 0) return std::exp(-1.0 / x);
  return horner(polys()[k], u) * phi(x, k);
}

Interval psi(Interval u, int k) {
  if (u.hi <= -1.0 || u.lo >= 1.0) return Interval(0.0);
  const double a = std::max(u.lo, -1.0), b = std::min(u.hi, 1.0);
  const double amin = (a <= 0.0 && b >= 0.0) ? 0.0 : std::min(std::fabs(a), std::fabs(b));
  const double amax = std::max(std::fabs(a), std::fabs(b));
  double xl = (1.0 - amax) * (1.0 + amax), xh = (1.0 - amin) * (1.0 + amin);
  xl = std::max(0.0, interval_detail::down(xl));
  xh = std::min(1.0, interval_detail::up(xh));
  double plo, phi_hi;
  if (k == 0) {
    plo = phi(xl, 0);
    phi_hi = phi(xh, 0);
  } else {
    const double xs = std::clamp(1.0 / (2.0 * k), xl, xh);
    plo = std::min(phi(xl, k), phi(xh, k));
    phi_hi = phi(xs, k);
  }
  Interval range = pad({plo, phi_hi}, 1e-14);
  range.lo = std::max(0.0, range.lo);
  Interval r = k == 0 ? range : horner(polys()[k], Interval(a, b)) * range;
  if (u.lo <= -1.0 || u.hi >= 1.0) r = hull(r, Interval(0.0));
  return r;
}

double integral(double u) {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return mass();
  if (u > 0.0) return mass() - integral(-u);
  auto f = [](double v) { return psi(v, 0); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -1.0, u, 6,
                                                                       1e-14);
}

double mass() {
  static const double z = [] {
    auto f = [](double v) { return psi(v, 0); };
    return 2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                     f, -1.0, 0.0, 12, 1e-15);
  }();
  return z;
}

}  // namespace bump

Schedule Schedule::parse(const std::string& name) {
  int k = 0;
  if (name.rfind("pow", 0) == 0 && name.size() > 3) {
    const char* first = name.data() + 3;
    const char* last = name.data() + name.size();
    auto [ptr, ec] = std::from_chars(first, last, k);
    if (ec != std::errc() || ptr != last) k = 0;
  }
  if (k < 3 || k > 1000)
    throw InputError("unknown schedule '" + name + "' (expected pow<K> with 3 <= K <= 1000)");
  Schedule s;
  s.name_ = name;
  s.base_ = k;
  return s;
}

double Schedule::coefficient(int n) const {
  return 1.0 / std::pow(static_cast<double>(base_), n);
}

bool Atoms::trig_nonconstant() const {
  return std::any_of(cosines.begin(), cosines.end(),
                     [](const CosTerm& c) { return c.freq != 0 && c.amp != 0.0; });
}

// Constant

double ConstantNode::eval(double, int order) const { return order == 0 ? c_ : 0.0; }

Interval ConstantNode::enclose(Interval, int order) const {
  return Interval(order == 0 ? c_ : 0.0);
}

void ConstantNode::flatten(double scale, Atoms& out) const { out.constant += scale * c_; }

// Cosine

namespace {

double cos_derivative(double amp, int freq, double phase, double t, int order) {
  if (freq == 0) return order == 0 ? amp * std::cos(phase) : 0.0;
  const double kt = double(freq) * t;
  const double theta = kTwoPi * (kt - std::floor(kt)) + phase;
  const double s = amp * std::pow(kTwoPi * freq, order);
  switch (order % 4) {
    case 0: return s * std::cos(theta);
    case 1: return -s * std::sin(theta);
    case 2: return -s * std::cos(theta);
    default: return s * std::sin(theta);
  }
}

Interval cos_enclose(double amp, int freq, double phase, Interval t, int order) {
  if (freq == 0) return Interval(order == 0 ? amp * std::cos(phase) : 0.0);
  const Interval theta = scale(t, kTwoPi * freq) + Interval(phase);
  const double s = amp * std::pow(kTwoPi * freq, order);
  Interval c;
  switch (order % 4) {
    case 0: c = cos(theta); break;
    case 1: c = -sin(theta); break;
    case 2: c = -cos(theta); break;
    default: c = sin(theta); break;
  }
  return pad(scale(c, s), 1e-14);
}

}  // namespace

CosineNode::CosineNode(double amp, int freq, double phase)
    : amp_(amp), freq_(freq), phase_(phase) {
  if (freq < 0) throw DomainError("cosine frequency must be a nonnegative integer");
  if (!std::isfinite(amp) || !std::isfinite(phase))
    throw DomainError("cosine parameters must be finite");
}

double CosineNode::eval(double t, int order) const {
  return cos_derivative(amp_, freq_, phase_, t, order);
}

Interval CosineNode::enclose(Interval t, int order) const {
  return cos_enclose(amp_, freq_, phase_, t, order);
}

void CosineNode::flatten(double scale, Atoms& out) const {
  if (freq_ == 0)
    out.constant += scale * amp_ * std::cos(phase_);
  else
    out.cosines.push_back({scale * amp_, freq_, phase_});
}

// Trig polynomial

TrigNode::TrigNode(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
    : a_(std::move(cos_coeffs)), b_(std::move(sin_coeffs)) {
  if (a_.empty()) a_.push_back(0.0);
  for (double v : a_)
    if (!std::isfinite(v)) throw DomainError("trig coefficients must be finite");
  for (double v : b_)
    if (!std::isfinite(v)) throw DomainError("trig coefficients must be finite");
}

double TrigNode::eval(double t, int order) const {
  double r = order == 0 ? a_[0] : 0.0;
  for (std::size_t k = 1; k < a_.size(); ++k)
    r += cos_derivative(a_[k], int(k), 0.0, t, order);
  for (std::size_t k = 0; k < b_.size(); ++k)
    r += cos_derivative(b_[k], int(k + 1), -std::numbers::pi / 2, t, order);
  return r;
}

Interval TrigNode::enclose(Interval t, int order) const {
  Interval r(order == 0 ? a_[0] : 0.0);
  for (std::size_t k = 1; k < a_.size(); ++k)
    if (a_[k] != 0.0) r += cos_enclose(a_[k], int(k), 0.0, t, order);
  for (std::size_t k = 0; k < b_.size(); ++k)
    if (b_[k] != 0.0) r += cos_enclose(b_[k], int(k + 1), -std::numbers::pi / 2, t, order);
  return r;
}

void TrigNode::flatten(double scale, Atoms& out) const {
  out.constant += scale * a_[0];
  for (std::size_t k = 1; k < a_.size(); ++k)
    if (a_[k] != 0.0) out.cosines.push_back({scale * a_[k], int(k), 0.0});
  for (std::size_t k = 0; k < b_.size(); ++k)
    if (b_[k] != 0.0)
      out.cosines.push_back({scale * b_[k], int(k + 1), -std::numbers::pi / 2});
}

// Bump

BumpNode::BumpNode(double center, double halfwidth, double amp)
    : m_(center), w_(halfwidth), c_(amp) {
  if (!std::isfinite(center) || !std::isfinite(amp))
    throw DomainError("bump parameters must be finite");
  if (!(halfwidth > 0.0 && halfwidth <= 0.5))
    throw DomainError("bump halfwidth must lie in (0, 1/2]");
}

double BumpNode::eval(double t, int order) const {
  const double d = circular_offset(t, m_);
  if (!(std::fabs(d) < w_)) return 0.0;
  return c_ * bump::psi(d / w_, order) / std::pow(w_, order);
}

Interval BumpNode::enclose(Interval t, int order) const {
  const double m = wrap01(m_);
  Interval r(0.0);
  bool any = false;
  for (int s = -1; s <= 1; ++s) {
    const Interval d = t - Interval(m + s);
    if (d.hi <= -w_ || d.lo >= w_) continue;
    const Interval u = scale(d, 1.0 / w_);
    const Interval v = scale(bump::psi(u, order), c_ / std::pow(w_, order));
    r = any ? r + v : v;
    any = true;
  }
  return pad(r, 1e-14);
}

void BumpNode::flatten(double scale, Atoms& out) const {
  out.bumps.push_back({wrap01(m_), w_, scale * c_});
}

// Sum

SumNode::SumNode(std::vector<Expr> children) : kids_(std::move(children)) {
  for (auto& k : kids_)
    if (!k) throw DomainError("null child in sum");
}

double SumNode::eval(double t, int order) const {
  double r = 0.0;
  for (auto& k : kids_) r += k->eval(t, order);
  return r;
}

Interval SumNode::enclose(Interval t, int order) const {
  Interval r(0.0);
  for (auto& k : kids_) r += k->enclose(t, order);
  return r;
}

void SumNode::flatten(double scale, Atoms& out) const {
  for (auto& k : kids_) k->flatten(scale, out);
}

void SumNode::declare_limits(std::vector<LimitStructure>& out) const {
  for (auto& k : kids_) k->declare_limits(out);
}

bool SumNode::analytic() const {
  return std::all_of(kids_.begin(), kids_.end(), [](const Expr& k) { return k->analytic(); });
}

// 1 - h

OneMinusNode::OneMinusNode(Expr child) : kid_(std::move(child)) {
  if (!kid_) throw DomainError("null child in one_minus");
}

double OneMinusNode::eval(double t, int order) const {
  return (order == 0 ? 1.0 : 0.0) - kid_->eval(t, order);
}

Interval OneMinusNode::enclose(Interval t, int order) const {
  return Interval(order == 0 ? 1.0 : 0.0) - kid_->enclose(t, order);
}

void OneMinusNode::flatten(double scale, Atoms& out) const {
  out.constant += scale;
  kid_->flatten(-scale, out);
}

void OneMinusNode::declare_limits(std::vector<LimitStructure>& out) const {
  kid_->declare_limits(out);
}

// Cantor sum

CantorNode::CantorNode(int depth, Schedule schedule)
    : depth_(depth), schedule_(std::move(schedule)) {
  if (depth < 0 || depth > kMaxCantorDepth)
    throw DomainError("cantor depth " + std::to_string(depth) + " exceeds ceiling " +
                      std::to_string(kMaxCantorDepth));
  for (int n = 1; n <= depth; ++n) {
    const double w = 1.0 / (2.0 * double(pow3(n)));
    const double c = schedule_.coefficient(n);
    for (auto& m : cantor_midpoints(n)) bumps_.push_back({m.value(), w, c});
  }
  std::sort(bumps_.begin(), bumps_.end(),
            [](const BumpAtom& a, const BumpAtom& b) { return a.center < b.center; });
}

double CantorNode::eval(double t, int order) const {
  auto it = std::upper_bound(bumps_.begin(), bumps_.end(), t,
                             [](double x, const BumpAtom& b) { return x < b.center; });
  for (auto cand : {it, it == bumps_.begin() ? bumps_.end() : std::prev(it)}) {
    if (cand == bumps_.end()) continue;
    const double d = t - cand->center;
    if (std::fabs(d) < cand->halfwidth)
      return cand->amp * bump::psi(d / cand->halfwidth, order) /
             std::pow(cand->halfwidth, order);
  }
  return 0.0;
}

Interval CantorNode::enclose(Interval t, int order) const {
  auto it = std::lower_bound(bumps_.begin(), bumps_.end(), t.lo,
                             [](const BumpAtom& b, double x) {
                               return b.center + b.halfwidth <= x;
                             });
  bool first = true, covered = false;
  Interval r(0.0);
  for (; it != bumps_.end() && it->center - it->halfwidth < t.hi; ++it) {
    const Interval u = scale(t - Interval(it->center), 1.0 / it->halfwidth);
    const Interval v =
        scale(bump::psi(u, order), it->amp / std::pow(it->halfwidth, order));
    if (first) {
      r = v;
      covered = u.lo > -1.0 && u.hi < 1.0;
      first = false;
    } else {
      r = hull(r, v);
      covered = false;
    }
  }
  if (!covered) r = hull(r, Interval(0.0));
  return pad(r, 1e-14);
}

void CantorNode::flatten(double scale, Atoms& out) const {
  out.bumps.reserve(out.bumps.size() + bumps_.size());
  for (auto& b : bumps_) out.bumps.push_back({b.center, b.halfwidth, scale * b.amp});
}

void CantorNode::declare_limits(std::vector<LimitStructure>& out) const {
  if (depth_ == 0) return;
  CantorLimit lim;
  lim.depth = depth_;
  for (int j = 0; j <= depth_; ++j) {
    std::vector<Arc> level;
    for (auto& [a, b] : cantor_components(j)) level.push_back({a.value(), b.value()});
    lim.levels.push_back(std::move(level));
  }
  out.push_back(std::move(lim));
}

// Staircase

StaircaseNode::StaircaseNode(StaircaseParams p) : p_(p) {
  if (p.steps < 1 || p.steps > 40) throw DomainError("staircase steps must lie in [1, 40]");
  if (!(p.reach > 0.0) || !(p.fall > 0.0) || !(p.plateau >= 0.0) || !(p.rise > 0.0))
    throw DomainError("staircase reach, fall, rise must be positive, plateau nonnegative");
  if (p.reach + p.plateau + p.fall > 1.0)
    throw DomainError("staircase support exceeds one period");
  double lo = 0.0, base = 0.0;
  for (int j = 1; j <= p.steps; ++j) {
    const double hi = p.reach * (1.0 - std::ldexp(1.0, -j));
    const double h = p.rise * std::ldexp(1.0, -j);
    pieces_.push_back({lo, hi, base, h});
    base += h;
    lo = hi;
  }
  pieces_.push_back({lo, p.reach + p.plateau, base, 0.0});
  pieces_.push_back({p.reach + p.plateau, p.reach + p.plateau + p.fall, base, -base});
}

double StaircaseNode::local_eval(double x, int order) const {
  for (auto& pc : pieces_) {
    if (x < pc.lo || x >= pc.hi) continue;
    if (pc.height == 0.0) return order == 0 ? pc.base : 0.0;
    const double c = 0.5 * (pc.lo + pc.hi), w = 0.5 * (pc.hi - pc.lo);
    const double u = (x - c) / w;
    if (order == 0) return pc.base + pc.height * bump::integral(u) / bump::mass();
    return pc.height / (bump::mass() * std::pow(w, order)) * bump::psi(u, order - 1);
  }
  return 0.0;
}

Interval StaircaseNode::local_enclose(Interval x, int order) const {
  bool any = false;
  Interval r(0.0);
  auto add = [&](Interval v) {
    r = any ? hull(r, v) : v;
    any = true;
  };
  for (auto& pc : pieces_) {
    if (x.hi < pc.lo || x.lo > pc.hi) continue;
    if (pc.height == 0.0) {
      add(Interval(order == 0 ? pc.base : 0.0));
      continue;
    }
    const double c = 0.5 * (pc.lo + pc.hi), w = 0.5 * (pc.hi - pc.lo);
    if (order == 0) {
      const double a = std::max(x.lo, pc.lo), b = std::min(x.hi, pc.hi);
      const double va = pc.base + pc.height * bump::integral((a - c) / w) / bump::mass();
      const double vb = pc.base + pc.height * bump::integral((b - c) / w) / bump::mass();
      const double slack = 1e-14 * (std::fabs(pc.base) + std::fabs(pc.height));
      add({std::min(va, vb) - slack, std::max(va, vb) + slack});
    } else {
      const Interval u = scale(x - Interval(c), 1.0 / w);
      add(scale(bump::psi(u, order - 1), pc.height / (bump::mass() * std::pow(w, order))));
    }
  }
  if (x.lo < pieces_.front().lo || x.hi > pieces_.back().hi) add(Interval(0.0));
  return pad(r, 1e-14);
}

double StaircaseNode::eval(double t, int order) const {
  return local_eval(wrap01(t - (p_.point - p_.reach)), order);
}

Interval StaircaseNode::enclose(Interval t, int order) const {
  const double start = wrap01(p_.point - p_.reach);
  const Interval x = t - Interval(start);
  if (x.lo >= 0.0) return local_enclose(x, order);
  if (x.hi <= 0.0) return local_enclose(x + Interval(1.0), order);
  return hull(local_enclose({x.lo + 1.0, 1.0}, order), local_enclose({0.0, x.hi}, order));
}

void StaircaseNode::flatten(double scale, Atoms& out) const {
  const double start = p_.point - p_.reach;
  for (auto& pc : pieces_) {
    if (pc.height == 0.0) continue;
    const double w = 0.5 * (pc.hi - pc.lo);
    out.slopes.push_back({wrap01(start + 0.5 * (pc.lo + pc.hi)), w,
                          scale * pc.height / (bump::mass() * w)});
  }
}

void StaircaseNode::declare_limits(std::vector<LimitStructure>& out) const {
  StairLimit lim;
  lim.point = wrap01(p_.point);
  lim.side = Side::Left;
  lim.depth = p_.steps;
  lim.reach = p_.reach;
  lim.plateau = p_.plateau;
  const double start = p_.point - p_.reach;
  for (int j = 0; j + 1 < p_.steps; ++j) lim.joints.push_back(wrap01(start + pieces_[j].hi));
  const double lo = wrap01(start + pieces_[p_.steps - 1].hi);
  lim.approximant = {lo, lo + (p_.point - (start + pieces_[p_.steps - 1].hi))};
  out.push_back(std::move(lim));
}

Expr constant(double c) {
  if (!std::isfinite(c)) throw DomainError("constant must be finite");
  return std::make_shared<ConstantNode>(c);
}
Expr cosine(double amp, int freq, double phase) {
  return std::make_shared<CosineNode>(amp, freq, phase);
}
Expr trig(std::vector<double> a, std::vector<double> b) {
  return std::make_shared<TrigNode>(std::move(a), std::move(b));
}
Expr bump_node(double center, double halfwidth, double amp) {
  return std::make_shared<BumpNode>(center, halfwidth, amp);
}
Expr sum(std::vector<Expr> children) { return std::make_shared<SumNode>(std::move(children)); }
Expr one_minus(Expr child) { return std::make_shared<OneMinusNode>(std::move(child)); }
Expr cantor_sum(int depth, const Schedule& schedule) {
  return std::make_shared<CantorNode>(depth, schedule);
}
Expr staircase(const StaircaseParams& params) {
  return std::make_shared<StaircaseNode>(params);
}

}  // namespace warpmin
