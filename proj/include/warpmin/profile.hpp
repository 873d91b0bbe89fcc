#pragma once

#include <memory>
#include <string>
#include <vector>

#include "warpmin/circle.hpp"
#include "warpmin/errors.hpp"
#include "warpmin/expr.hpp"
#include "warpmin/interval.hpp"

namespace warpmin {

/// A smooth 1-periodic positive function f.
class Profile {
 public:
  /// Validates the analytic flag and certifies positivity.
  Profile(Expr expr, bool analytic);

  double eval(double t, int order = 0) const;
  Interval enclose(Interval t, int order = 0) const;

  const Expr& expr() const { return expr_; }
  bool analytic() const { return analytic_; }
  /// Certified lower bound for f over one period.
  double lower_bound() const { return fmin_; }
  const Atoms& atoms() const { return *atoms_; }
  const std::vector<LimitStructure>& limits() const { return *limits_; }

 private:
  Expr expr_;
  bool analytic_;
  double fmin_ = 0.0;
  std::shared_ptr<const Atoms> atoms_;
  std::shared_ptr<const std::vector<LimitStructure>> limits_;
};

double eval(const Profile& p, double t, int order);

/// Certified positive lower bound of f over [0,1] for an expression.
double certify_positive(const Expr& e);
double certify_positive(const Profile& p);

/// A certified zero of f' (or a cluster that could not be split at tol).
struct IsolatedCritical {
  Arc enclosure;  // [0,1) bookkeeping, width <= tol
  bool degenerate = false;
  Sign left = Sign::Zero;   // sign of f' immediately left of the enclosure
  Sign right = Sign::Zero;  // sign of f' immediately right
  double point() const { return enclosure.mid(); }
};

/// Maximal arc on which f' vanishes identically, in circle form.
struct Plateau {
  Arc arc;
  Sign left = Sign::Zero;   // f' sign before arc.lo
  Sign right = Sign::Zero;  // f' sign after arc.hi
  bool full = false;        // the whole circle
};

/// A maximal open span of constant nonzero sign of f', circle form.
struct Span {
  Arc arc;
  Sign sign;
};

struct Resolution {
  double tol = 1e-10;
  int grid_cells = 1 << 14;
  int declared_depth = 0;
  bool symbolic = true;  // false when a numeric sweep was used
};

struct CriticalSet {
  std::vector<IsolatedCritical> isolated;  // ascending
  std::vector<Plateau> plateaus;            // circle form, ascending lo
  std::vector<Span> spans;                  // circle form, ascending lo
  std::vector<LimitStructure> limits;
  Resolution resolution;

  bool full_plateau() const { return plateaus.size() == 1 && plateaus[0].full; }
  /// Plateaus split at the seam into [0,1] bookkeeping arcs, ascending.
  std::vector<Arc> plateau_arcs() const;
  /// True when t lies in an isolated enclosure or a plateau (within eps).
  bool contains(double t, double eps) const;
};

/// Raised when isolation runs out of budget; carries what was certified.
class IsolationError : public ResolutionError {
 public:
  IsolationError(const std::string& what, CriticalSet partial)
      : ResolutionError(what), partial_(std::move(partial)) {}
  const CriticalSet& partial() const { return partial_; }

 private:
  CriticalSet partial_;
};

CriticalSet isolate_critical_points(const Profile& p, double tol = 1e-10);

}  // namespace warpmin
