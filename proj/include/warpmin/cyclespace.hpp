#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "warpmin/structure.hpp"

namespace warpmin {

struct RpFactor {
  double leaf_area = 0.0;
  int m = 0;
};

struct PartialComponent {
  Arc arc;
  double area = 0.0;
  bool even_retracts_to_zero = true;
  bool odd_contractible = true;
};

struct CycleSpaceModel {
  double omega = 0.0;
  std::vector<RpFactor> full;
  std::vector<PartialComponent> partial;
  std::size_t isolated = 0;
  double c_prime = 0.0;  // 1 / least minimal-slice area
};

/// Largest even m with m <= omega / leaf_area.
int rp_dimension(double omega, double leaf_area);

CycleSpaceModel decompose(const WarpedProduct& w, double omega);
/// Builds the model from given classes; min_area is the least minimal-slice area.
CycleSpaceModel decompose_classes(const std::vector<FoliationClass>& classes, double omega,
                                  double min_area);

long long cohomology_dims(const CycleSpaceModel& model, int m);

struct TpHomology {
  int m = 0;
  int resolution = 0;
  std::vector<long long> betti;
  std::vector<long long> cells;  // nondegenerate simplices per degree
  bool matches_rp = false;
};

/// Z2 homology of the truncated symmetric product TP^m of a circle with
/// `resolution` vertices.
TpHomology tp_homology(int m, int resolution);
/// Same complex without pair annihilation (the full symmetric product).
TpHomology sp_homology(int m, int resolution);

struct WidthEntry {
  long long p;
  double omega;
};

struct WidthTable {
  enum class Provenance { Synthetic, UserSupplied };
  int n = 2;
  std::vector<WidthEntry> entries;  // strictly increasing p
  Provenance provenance = Provenance::UserSupplied;

  const WidthEntry* find(long long p) const;
};

/// Validates ordering and monotonicity; throws InputError.
void validate(const WidthTable& t);

WidthTable synthesize_widths(double A, double B, int n, long long pmax);
WidthTable read_width_csv(std::istream& in, int n);
void write_width_csv(std::ostream& out, const WidthTable& t);

struct WidthVerdict {
  bool pass = true;
  std::optional<long long> first_p;
  std::string rule;  // which inequality failed
  std::string detail;
  long long checked = 0;
  long long skipped = 0;
};

WidthVerdict width_growth_check(const WidthTable& t, double A, double B);

struct WeylEstimate {
  double a_hat = 0.0;
  double intercept = 0.0;
  double drift = 0.0;
  bool converged = false;
  std::string detail;
};

WeylEstimate weyl_check(const WidthTable& t, double vol, double tol);

struct CountingResult {
  long long p = 0;
  double c_double_prime = 0.0;
  double c_prime = 0.0;
  double threshold = 0.0;  // p must exceed this
};

CountingResult counting_contradiction(const std::vector<double>& stable_areas, double C, int n,
                                      long long p0, std::optional<double> c_prime = {});

WidthVerdict ls_jump_check(const WidthTable& t, const std::vector<double>& stable_areas, double C,
                           double unstable_area_sup);

}  // namespace warpmin
