#include "warpmin/cyclespace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <bit>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <ostream>

namespace warpmin {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool le_tol(double a, double b) { return a <= b + 1e-12 * std::max(1.0, std::fabs(b)); }

}  // namespace

int rp_dimension(double omega, double leaf_area) {
  if (!(omega > 0.0) || !(leaf_area > 0.0))
    throw DomainError("omega and leaf area must be positive");
  const double ratio = omega / leaf_area;
  auto m = static_cast<long long>(std::floor(ratio * (1.0 + 1e-12)));
  m -= m % 2;
  return static_cast<int>(std::min<long long>(m, 1 << 30));
}

CycleSpaceModel decompose_classes(const std::vector<FoliationClass>& classes, double omega,
                                  double min_area) {
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  if (!(min_area > 0.0)) throw DomainError("least slice area must be positive");
  CycleSpaceModel model;
  model.omega = omega;
  model.c_prime = 1.0 / min_area;
  for (auto& c : classes) {
    switch (c.kind) {
      case ClassKind::Full:
        model.full.push_back({c.area, rp_dimension(omega, c.area)});
        break;
      case ClassKind::Partial:
        model.partial.push_back({c.arc, c.area, true, true});
        break;
      case ClassKind::Isolated:
        ++model.isolated;
        break;
    }
  }
  return model;
}

CycleSpaceModel decompose(const WarpedProduct& w, double omega) {
  const auto wf = is_weakly_frankel(w);
  if (!wf.weakly_frankel)
    throw PreconditionError("cycle-space decomposition requires a weakly Frankel profile; t = " +
                            fmt(wf.contracting.front().t) + " is contracting");
  double min_area = std::numeric_limits<double>::infinity();
  for (auto& r : slice_reports(w)) min_area = std::min(min_area, r.area);
  return decompose_classes(foliation_classes(w, omega).classes, omega, min_area);
}

long long cohomology_dims(const CycleSpaceModel& model, int m) {
  if (m < 1) throw DomainError("cohomology degree must be >= 1");
  long long d = 0;
  for (auto& f : model.full)
    if (f.m >= m) ++d;
  if (d > 0 && double(m) > model.c_prime * model.omega * (1.0 + 1e-12))
    throw ModelInconsistencyError("nonzero cohomology in degree " + std::to_string(m) +
                                  " above C'omega = " + fmt(model.c_prime * model.omega));
  return d;
}

namespace {

// Simplicial circle with r vertices. An N-simplex is either a degenerate
// vertex (code v) or a degenerate edge e whose first k vertices sit at the
// start (code r + e*N + k - 1, 1 <= k <= N). Vertex 0 is the basepoint.
struct Circle {
  int r;

  int face(int code, int i, int N) const {
    if (code < r) return code == 0 ? -1 : code;
    const int e = (code - r) / N;
    const int k = (code - r) % N + 1;
    const int k2 = k - (i < k ? 1 : 0);
    int v;
    if (k2 == 0)
      v = (e + 1) % r;
    else if (k2 == N)
      v = e;
    else
      return r + e * (N - 1) + k2 - 1;
    return v == 0 ? -1 : v;
  }

  bool nondegenerate(const std::vector<int>& s, int N) const {
    if (N == 0) return true;
    std::vector<char> hit(N + 1, 0);
    for (int c : s)
      if (c >= r) hit[(c - r) % N + 1] = 1;
    for (int k = 1; k <= N; ++k)
      if (!hit[k]) return false;
    return true;
  }
};

void subsets(const std::vector<int>& codes, std::size_t from, int left, bool repeat,
             std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& emit) {
  emit(cur);
  if (left == 0) return;
  for (std::size_t i = from; i < codes.size(); ++i) {
    cur.push_back(codes[i]);
    subsets(codes, repeat ? i : i + 1, left - 1, repeat, cur, emit);
    cur.pop_back();
  }
}

long long z2_rank(std::vector<std::vector<std::uint64_t>> cols) {
  std::map<std::size_t, std::vector<std::uint64_t>> pivots;
  long long rank = 0;
  for (auto& c : cols) {
    for (;;) {
      std::size_t top = 0;
      bool any = false;
      for (std::size_t wi = c.size(); wi-- > 0;) {
        if (c[wi]) {
          top = wi * 64 + 63 - std::countl_zero(c[wi]);
          any = true;
          break;
        }
      }
      if (!any) break;
      auto it = pivots.find(top);
      if (it == pivots.end()) {
        pivots.emplace(top, c);
        ++rank;
        break;
      }
      for (std::size_t wi = 0; wi < c.size(); ++wi) c[wi] ^= it->second[wi];
    }
  }
  return rank;
}

TpHomology product_homology(int m, int resolution, bool truncated) {
  const Circle circ{resolution};
  const int r = resolution;
  std::vector<std::vector<std::vector<int>>> simp(m + 1);
  std::vector<std::map<std::vector<int>, std::size_t>> index(m + 1);
  for (int N = 0; N <= m; ++N) {
    std::vector<int> codes;
    for (int v = 1; v < r; ++v) codes.push_back(v);
    if (N > 0)
      for (int c = 0; c < r * N; ++c) codes.push_back(r + c);
    std::vector<int> cur;
    subsets(codes, 0, m, !truncated, cur, [&](const std::vector<int>& s) {
      if (N > 0 && s.empty()) return;
      if (!circ.nondegenerate(s, N)) return;
      index[N].emplace(s, simp[N].size());
      simp[N].push_back(s);
    });
  }
  std::vector<long long> rank(m + 2, 0);
  for (int N = 1; N <= m; ++N) {
    const std::size_t rows = simp[N - 1].size();
    std::vector<std::vector<std::uint64_t>> cols;
    for (auto& s : simp[N]) {
      std::vector<std::uint64_t> col((rows + 63) / 64, 0);
      for (int i = 0; i <= N; ++i) {
        std::vector<int> f;
        for (int c : s)
          if (int d = circ.face(c, i, N); d >= 0) f.push_back(d);
        std::sort(f.begin(), f.end());
        std::vector<int> red;
        for (std::size_t k = 0; k < f.size();) {
          std::size_t j = k;
          while (j < f.size() && f[j] == f[k]) ++j;
          for (std::size_t c = truncated ? (j - k) % 2 : j - k; c > 0; --c) red.push_back(f[k]);
          k = j;
        }
        if (N - 1 > 0 && (red.empty() || !circ.nondegenerate(red, N - 1))) continue;
        const std::size_t row = index[N - 1].at(red);
        col[row / 64] ^= std::uint64_t{1} << (row % 64);
      }
      cols.push_back(std::move(col));
    }
    rank[N] = z2_rank(std::move(cols));
  }
  TpHomology out;
  out.m = m;
  out.resolution = resolution;
  out.matches_rp = true;
  for (int N = 0; N <= m; ++N) {
    const long long dim = static_cast<long long>(simp[N].size());
    out.cells.push_back(dim);
    out.betti.push_back(dim - rank[N] - rank[N + 1]);
    out.matches_rp = out.matches_rp && out.betti.back() == 1;
  }
  return out;
}

}  // namespace

TpHomology tp_homology(int m, int resolution) {
  if (m < 1 || m > 3) throw DomainError("tp_homology supports m in {1, 2, 3}");
  if (resolution < 6)
    throw ResolutionError("circle resolution " + std::to_string(resolution) +
                          " is below the minimum of 6 vertices");
  return product_homology(m, resolution, true);
}

TpHomology sp_homology(int m, int resolution) {
  if (m < 1 || m > 3) throw DomainError("sp_homology supports m in {1, 2, 3}");
  if (resolution < 6)
    throw ResolutionError("circle resolution " + std::to_string(resolution) +
                          " is below the minimum of 6 vertices");
  auto h = product_homology(m, resolution, false);
  h.matches_rp = false;
  return h;
}

const WidthEntry* WidthTable::find(long long p) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), p,
                             [](const WidthEntry& e, long long v) { return e.p < v; });
  return it != entries.end() && it->p == p ? &*it : nullptr;
}

void validate(const WidthTable& t) {
  if (t.entries.empty()) throw InputError("width table is empty");
  if (t.n < 2) throw InputError("width table dimension n must be >= 2");
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    const auto& e = t.entries[i];
    if (e.p < 1) throw InputError("width index p must be >= 1");
    if (!std::isfinite(e.omega) || !(e.omega > 0.0))
      throw InputError("width at p = " + std::to_string(e.p) + " is not a positive number");
    if (i > 0 && e.p <= t.entries[i - 1].p)
      throw InputError("width indices must be strictly increasing");
    if (i > 0 && e.omega < t.entries[i - 1].omega)
      throw InputError("widths must be nondecreasing in p (p = " + std::to_string(e.p) + ")");
  }
}

WidthTable synthesize_widths(double A, double B, int n, long long pmax) {
  if (!(A > 0.0) || !(B >= 0.0) || n < 2 || pmax < 1)
    throw DomainError("synthetic widths need A > 0, B >= 0, n >= 2, pmax >= 1");
  WidthTable t;
  t.n = n;
  t.provenance = WidthTable::Provenance::Synthetic;
  const double e = 1.0 / (n + 1);
  for (long long p = 1; p <= pmax; ++p)
    t.entries.push_back({p, A * double(p) + B * std::pow(double(p), e)});
  return t;
}

WidthTable read_width_csv(std::istream& in, int n) {
  WidthTable t;
  t.n = n;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!header) {
      std::string h;
      for (char c : line)
        if (c != ' ' && c != '\t') h += c;
      if (h != "p,omega") throw InputError("line " + std::to_string(lineno) +
                                           ": expected header 'p,omega'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw InputError("line " + std::to_string(lineno) + ": expected 'p,omega'");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string ps = trim(line.substr(0, comma)), ws = trim(line.substr(comma + 1));
    WidthEntry e{};
    auto r1 = std::from_chars(ps.data(), ps.data() + ps.size(), e.p);
    auto r2 = std::from_chars(ws.data(), ws.data() + ws.size(), e.omega);
    if (r1.ec != std::errc() || r1.ptr != ps.data() + ps.size() || r2.ec != std::errc() ||
        r2.ptr != ws.data() + ws.size())
      throw InputError("line " + std::to_string(lineno) + ": malformed number");
    t.entries.push_back(e);
  }
  if (!header) throw InputError("width CSV is empty");
  validate(t);
  return t;
}

void write_width_csv(std::ostream& out, const WidthTable& t) {
  out << "p,omega\n";
  char buf[64];
  for (auto& e : t.entries) {
    std::snprintf(buf, sizeof buf, "%.17g", e.omega);
    out << e.p << ',' << buf << '\n';
  }
}

WidthVerdict width_growth_check(const WidthTable& t, double A, double B) {
  if (!(A > 0.0) || !(B >= 0.0)) throw DomainError("growth check needs A > 0 and B >= 0");
  validate(t);
  WidthVerdict v;
  const double e = 1.0 / (t.n + 1);
  auto fail = [&](long long p, std::string rule, std::string detail) {
    v.pass = false;
    v.first_p = p;
    v.rule = std::move(rule);
    v.detail = std::move(detail);
  };
  for (std::size_t i = 0; i < t.entries.size() && v.pass; ++i) {
    const auto& [p, w] = t.entries[i];
    ++v.checked;
    const double lower = A * double(p);
    const double upper = lower + B * std::pow(double(p), e);
    if (!le_tol(lower, w)) {
      fail(p, "lower", "omega_" + std::to_string(p) + " = " + fmt(w) + " < Ap = " + fmt(lower));
    } else if (!le_tol(w, upper)) {
      fail(p, "upper", "omega_" + std::to_string(p) + " = " + fmt(w) + " > Ap + Bp^(1/(n+1)) = " +
                           fmt(upper));
    } else if (i + 1 < t.entries.size() && t.entries[i + 1].p == p + 1) {
      const double next = t.entries[i + 1].omega;
      if (!le_tol(w + A, next))
        fail(p, "step", "omega_" + std::to_string(p + 1) + " = " + fmt(next) + " < omega_" +
                            std::to_string(p) + " + A = " + fmt(w + A));
    }
  }
  if (v.pass) v.detail = "all " + std::to_string(v.checked) + " entries satisfy the bounds";
  return v;
}

namespace {

struct Fit {
  double slope, intercept;
};

Fit affine_fit(const std::vector<WidthEntry>& es, int n, long long pmin) {
  const double e = 1.0 / (n + 1);
  double sx = 0, sy = 0, sxx = 0, sxy = 0, k = 0;
  for (auto& en : es) {
    if (en.p < pmin) continue;
    const double x = std::pow(double(en.p), e);
    sx += x;
    sy += en.omega;
    sxx += x * x;
    sxy += x * en.omega;
    k += 1;
  }
  const double den = k * sxx - sx * sx;
  if (k < 2 || den == 0.0) throw PreconditionError("not enough distinct points to fit");
  const double a = (k * sxy - sx * sy) / den;
  return {a, (sy - a * sx) / k};
}

}  // namespace

WeylEstimate weyl_check(const WidthTable& t, double vol, double tol) {
  validate(t);
  if (t.entries.size() < 100) throw PreconditionError("Weyl check needs at least 100 entries");
  if (!(vol > 0.0) || !(tol > 0.0)) throw DomainError("volume and tolerance must be positive");
  const long long pmax = t.entries.back().p;
  const Fit half = affine_fit(t.entries, t.n, pmax / 2);
  const Fit decade = affine_fit(t.entries, t.n, std::max<long long>(1, pmax / 10));
  WeylEstimate out;
  const double scale = std::pow(vol, -double(t.n) / (t.n + 1));
  out.a_hat = half.slope * scale;
  out.intercept = half.intercept;
  out.drift = std::fabs(half.slope - decade.slope) / std::max(std::fabs(half.slope), 1e-300);
  out.converged = out.drift <= tol;
  out.detail = "a_hat = " + fmt(out.a_hat) + ", drift " + fmt(out.drift) +
               (out.converged ? " <= " : " > ") + "tol " + fmt(tol);
  return out;
}

CountingResult counting_contradiction(const std::vector<double>& stable_areas, double C, int n,
                                      long long p0, std::optional<double> c_prime) {
  if (n == 1) throw PreconditionError("n = 1 is unsupported: the exponent gap vanishes");
  if (n < 1) throw DomainError("n must be >= 2");
  if (stable_areas.empty()) throw PreconditionError("stable area set is empty");
  if (!(C > 0.0)) throw PreconditionError("C must be positive");
  std::vector<double> areas = stable_areas;
  std::sort(areas.begin(), areas.end());
  areas.erase(std::unique(areas.begin(), areas.end()), areas.end());
  const double alpha = areas.front();
  if (!(alpha > 0.0)) throw PreconditionError("stable areas must be positive");
  const double cp = c_prime.value_or(C / 2.0);
  if (!(cp > 0.0) || !(cp < C)) throw PreconditionError("C' must satisfy 0 < C' < C");
  CountingResult out;
  out.c_prime = cp;
  out.c_double_prime = C * double(areas.size()) / alpha;
  const long double ratio = static_cast<long double>(out.c_double_prime) / cp;
  out.threshold = static_cast<double>(std::pow(ratio, (long double)(n + 1) / (n - 1)));
  // p^(n-1) > ratio^(n+1)
  long double rhs = 1;
  for (int i = 0; i < n + 1; ++i) rhs *= ratio;
  auto holds = [&](long long p) {
    long double lhs = 1;
    for (int i = 0; i < n - 1; ++i) lhs *= p;
    return lhs > rhs;
  };
  long long p = std::max<long long>(p0, static_cast<long long>(std::floor(out.threshold)));
  p = std::max<long long>(p, 1);
  while (p > std::max<long long>(p0, 1) && holds(p - 1)) --p;
  while (!holds(p)) ++p;
  out.p = p;
  return out;
}

WidthVerdict ls_jump_check(const WidthTable& t, const std::vector<double>& stable_areas, double C,
                           double unstable_area_sup) {
  validate(t);
  if (stable_areas.empty()) throw PreconditionError("stable area set is empty");
  if (!(C > 0.0)) throw PreconditionError("C must be positive");
  WidthVerdict v;
  const double e = 1.0 / (t.n + 1);
  for (auto& [p, w] : t.entries) {
    if (!(w > unstable_area_sup)) continue;
    const auto m = static_cast<long long>(std::ceil(C * std::pow(double(p), e)));
    const WidthEntry* back = t.find(p - m);
    if (!back) {
      ++v.skipped;
    } else {
      ++v.checked;
      if (!(back->omega < w)) {
        v.pass = false;
        v.first_p = p;
        v.rule = "jump";
        v.detail = "omega_" + std::to_string(p - m) + " = omega_" + std::to_string(p) + " = " +
                   fmt(w) + " with m = " + std::to_string(m);
        return v;
      }
    }
    const bool factors = std::any_of(stable_areas.begin(), stable_areas.end(), [&](double a) {
      const double k = w / a;
      return a > 0.0 && std::round(k) >= 1.0 &&
             std::fabs(k - std::round(k)) <= 1e-9 * std::max(1.0, k);
    });
    if (!factors) {
      v.pass = false;
      v.first_p = p;
      v.rule = "factorization";
      v.detail = "omega_" + std::to_string(p) + " = " + fmt(w) +
                 " is not an integer multiple of a stable area";
      return v;
    }
  }
  v.detail = std::to_string(v.checked) + " jumps verified, " + std::to_string(v.skipped) +
             " outside table range";
  return v;
}

}  // namespace warpmin
