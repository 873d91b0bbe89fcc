#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "warpmin/certificate.hpp"
#include "warpmin/geometry.hpp"

namespace warpmin {

struct SideWitness {
  double t;
  Side side;
};

struct FrankelResult {
  bool weakly_frankel = true;
  std::vector<SideWitness> contracting;  // empty when weakly Frankel
};

FrankelResult is_weakly_frankel(const WarpedProduct& w);

enum class ClassKind { Isolated, Partial, Full };
std::string_view to_string(ClassKind k);

struct FoliationClass {
  ClassKind kind = ClassKind::Isolated;
  Arc arc;  // circle form; a point for Isolated, [0,1] for Full
  double area = 0.0;
  Stability stability = Stability::DegenerateStable;
};

struct FoliationClasses {
  std::vector<FoliationClass> classes;
  /// Set when declared limit structure makes the count depth-dependent.
  bool truncated = false;
  int depth = 0;
};

FoliationClasses foliation_classes(const WarpedProduct& w, double omega);

std::vector<double> stable_area_spectrum(const WarpedProduct& w, double omega);

struct BoundarySlice {
  double t = 0.0;
  double area = 0.0;
  SideClass inward;
};

struct SongRegion {
  Arc arc;  // [a, b], b in (a, a + 1]
  BoundarySlice a, b;
  bool contracting_boundary = false;  // both boundary slices contract inward
  bool interior_contains(double t) const { return arc.interior_contains(t, 1e-12); }
};

/// Region between two critical points a and b (b taken in (a, a+1]).
SongRegion make_region(const WarpedProduct& w, double a, double b);

std::vector<SongRegion> cut_song_regions(const WarpedProduct& w, std::vector<double> cuts);

std::optional<SongRegion> find_weak_core(const WarpedProduct& w);

/// Re-checks the weak core predicate on a region.
bool is_weak_core(const WarpedProduct& w, const SongRegion& r, std::string* why = nullptr);

enum class IntervalCase { Inapplicable, InteriorContracting, Foliated };
std::string_view to_string(IntervalCase c);

struct IntervalVerdict {
  IntervalCase verdict = IntervalCase::Inapplicable;
  std::string detail;
  std::vector<double> witnesses;
};

IntervalVerdict verify_interval_dichotomy(const WarpedProduct& w, const SongRegion& r);

struct Spindle {
  Arc arc;  // critical arc at the current depth, circle form
  double left_probe = 0.0;   // f' > 0 here
  double right_probe = 0.0;  // f' < 0 here
  bool accumulating = false;
  std::vector<Side> accumulating_sides;
  std::optional<double> limit_point;
  std::optional<Arc> limit_arc;  // plateau that survives the limit
};

std::vector<Spindle> detect_spindles(const WarpedProduct& w);

struct NonMonotoneWitness {
  double point;
  int scale;  // 3^-scale
  double midpoint;
};

struct NonMonotonicSet {
  enum class Form { Finite, DeclaredLimit };
  Form form = Form::Finite;
  std::vector<double> points;  // finite members, or limit points at the current depth
  std::optional<CantorLimit> limit;
  std::vector<NonMonotoneWitness> witnesses;
  int depth = 0;
  bool empty() const { return points.empty() && !limit; }
};

NonMonotonicSet detect_non_monotonic(const WarpedProduct& w);

enum class Branch { WeaklyFrankel, WeakCore, Spindle, PathologicalCantor, Unresolved };
std::string_view to_string(Branch b);

struct DichotomyOutcome {
  Branch branch = Branch::Unresolved;
  std::optional<SongRegion> core;
  std::optional<Spindle> spindle;
  std::optional<NonMonotonicSet> non_monotonic;
  std::optional<Certificate> cantor_likeness;
  std::vector<Spindle> non_accumulating_spindles;
  std::string uncertainty;  // set only for Unresolved
};

DichotomyOutcome dichotomy(const WarpedProduct& w);

Verdict weak_core_boundary_bound(const WarpedProduct& w, const SongRegion& core);

std::optional<double> find_noncontracting_accumulating(const WarpedProduct& w,
                                                       const SongRegion& region);

}  // namespace warpmin
