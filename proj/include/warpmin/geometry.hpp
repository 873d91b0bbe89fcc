#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "warpmin/profile.hpp"

namespace warpmin {

struct SpectrumLevel {
  double eigenvalue = 0.0;
  long long multiplicity = 1;
};

/// Spectrum of the fiber Laplacian.
class FiberSpectrum {
 public:
  enum class Kind { Sphere, Torus, Listed };

  static FiberSpectrum sphere(int n);
  /// Flat R^n / Z^n: eigenvalues 4 pi^2 |l|^2, l in Z^n.
  static FiberSpectrum torus(int n);
  /// Levels are merged and sorted; the cutoff is the largest listed eigenvalue.
  static FiberSpectrum listed(std::vector<SpectrumLevel> levels, int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  /// Largest eigenvalue known to be complete below; infinite for built-ins.
  double cutoff() const { return cutoff_; }
  /// Total multiplicity of eigenvalues strictly below x.
  long long count_below(double x) const;
  /// Levels with eigenvalue <= x.
  std::vector<SpectrumLevel> levels_upto(double x) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::Sphere;
  int dim_ = 2;
  double cutoff_ = 0.0;
  std::vector<SpectrumLevel> listed_;
};

struct DeclaredPoint {
  double t;
  bool left_accumulating;
  bool right_accumulating;
};

class WarpedProduct {
 public:
  WarpedProduct(Profile profile, int fiber_dim, double fiber_area, FiberSpectrum spectrum,
                double tol = 1e-10);

  const Profile& profile() const { return profile_; }
  int fiber_dim() const { return n_; }
  double fiber_area() const { return a0_; }
  const FiberSpectrum& spectrum() const { return spectrum_; }
  const CriticalSet& critical() const { return *critical_; }
  double tol() const { return tol_; }
  /// Declared limit points, ascending in t.
  const std::vector<DeclaredPoint>& declared() const { return *declared_; }
  const DeclaredPoint* find_declared(double t) const;

  struct Feature {
    enum class Type { Isolated, Plateau } type;
    std::size_t index;  // into critical().isolated or critical().plateaus
  };
  /// The critical feature containing t, if any.
  std::optional<Feature> locate(double t) const;
  /// Distance from t to the nearest critical structure other than `self`,
  /// looking to one side.
  double gap(double t, Side side, const Feature& self) const;

 private:
  struct Entry {
    double lo, hi;
    Feature f;
  };
  Profile profile_;
  int n_;
  double a0_;
  FiberSpectrum spectrum_;
  double tol_;
  std::shared_ptr<const CriticalSet> critical_;
  std::shared_ptr<const std::vector<Entry>> index_;  // [0,1] pieces sorted by lo
  std::shared_ptr<const std::vector<DeclaredPoint>> declared_;
};

enum class SideKind { Contracting, Expanding, Foliated, Accumulating };
enum class Provenance { Exact, DeclaredLimit };
enum class Stability { StrictlyStable, DegenerateStable, Unstable };

struct SideClass {
  SideKind kind = SideKind::Foliated;
  Provenance provenance = Provenance::Exact;
  /// For declared limits, the class observed at the truncation depth.
  std::optional<SideKind> finite_depth;
};

std::string_view to_string(SideKind k);
std::string_view to_string(Provenance p);
std::string_view to_string(Stability s);

enum class SliceKind { Isolated, PlateauEnd, PlateauInterior, FullCircle };
std::string_view to_string(SliceKind k);

struct SliceReport {
  double t = 0.0;
  SliceKind kind = SliceKind::Isolated;
  double area = 0.0;
  double jacobi_potential = 0.0;
  double lambda_min = 0.0;
  long long index = 0;
  SideClass left, right;
  Stability stability = Stability::DegenerateStable;
  bool degenerate = false;
  bool declared_limit = false;
};

double slice_area(const WarpedProduct& w, double t);
double mean_curvature_scalar(const WarpedProduct& w, double t);
double jacobi_potential(const WarpedProduct& w, double t);

struct SliceSpectrum {
  double lambda_min;
  long long index;
};
SliceSpectrum slice_spectrum(const WarpedProduct& w, double t0);

Stability stability_of(double lambda_min);

SideClass classify_side(const WarpedProduct& w, double t0, Side side);

/// One report per isolated point, plateau endpoint, plateau midpoint and
/// declared limit point, ascending in t.
std::vector<SliceReport> slice_reports(const WarpedProduct& w);
SliceReport slice_report(const WarpedProduct& w, double t0);

/// Limit points declared by the generator metadata at the current depth.
std::vector<DeclaredPoint> declared_limit_points(const WarpedProduct& w);

struct Verdict {
  bool pass = false;
  std::string detail;
  std::vector<double> witnesses;
};

Verdict analytic_no_accumulating(const WarpedProduct& w);

}  // namespace warpmin
