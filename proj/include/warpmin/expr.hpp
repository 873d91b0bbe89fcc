#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "warpmin/circle.hpp"
#include "warpmin/interval.hpp"

namespace warpmin {

/// Highest derivative order with closed-form rules.
inline constexpr int kMaxOrder = 8;

namespace bump {

/// k-th derivative of exp(1/(u^2-1)) on (-1,1), zero elsewhere.
double psi(double u, int k = 0);
Interval psi(Interval u, int k = 0);
/// Integer coefficients of P_k, lowest degree first, with
/// psi^(k)(u) = P_k(u) (1-u^2)^(-2k) psi(u).
const std::vector<double>& poly(int k);
/// Integral of psi over [-1, u].
double integral(double u);
/// Integral of psi over [-1, 1].
double mass();

}  // namespace bump

/// Coefficient policy n -> c_n for the Cantor sum. Names are "pow<K>", K >= 3.
class Schedule {
 public:
  static Schedule parse(const std::string& name);
  static Schedule pow6() { return parse("pow6"); }
  double coefficient(int n) const;
  const std::string& name() const { return name_; }
  int base() const { return base_; }

 private:
  std::string name_;
  int base_ = 6;
};

// Atoms are the flattened derivative structure of a profile, used for
// symbolic critical-set analysis.
struct CosTerm {
  double amp;
  int freq;
  double phase;
};

/// amp * psi((t - center)/halfwidth), periodized.
struct BumpAtom {
  double center;
  double halfwidth;
  double amp;
};

/// Contributes amp * psi((t - center)/halfwidth) to f' (not to f).
struct SlopeAtom {
  double center;
  double halfwidth;
  double amp;
};

struct Atoms {
  double constant = 0.0;
  std::vector<CosTerm> cosines;
  std::vector<BumpAtom> bumps;
  std::vector<SlopeAtom> slopes;

  bool trig_nonconstant() const;
};

/// Declared limit structure of a Cantor sum: levels[j] lists the components
/// of C_j as arcs in [0,1], j = 0..depth.
struct CantorLimit {
  int depth = 0;
  std::vector<std::vector<Arc>> levels;
};

/// Declared accumulation of isolated critical points at `point` from `side`.
struct StairLimit {
  double point = 0.0;
  Side side = Side::Left;
  int depth = 0;
  double reach = 0.0;
  double plateau = 0.0;
  std::vector<double> joints;  // interior isolated zeros, ordered toward point
  Arc approximant;             // [point - reach 2^-depth, point]
};

using LimitStructure = std::variant<CantorLimit, StairLimit>;

class Node;
using Expr = std::shared_ptr<const Node>;

class Node {
 public:
  virtual ~Node() = default;
  /// t is already reduced to [0,1); order <= kMaxOrder.
  virtual double eval(double t, int order) const = 0;
  /// t is a subinterval of [0,1].
  virtual Interval enclose(Interval t, int order) const = 0;
  virtual void flatten(double scale, Atoms& out) const = 0;
  virtual void declare_limits(std::vector<LimitStructure>&) const {}
  /// False when the subtree contains a non-analytic node.
  virtual bool analytic() const { return true; }
};

class ConstantNode final : public Node {
 public:
  explicit ConstantNode(double c) : c_(c) {}
  double value() const { return c_; }
  double eval(double, int order) const override;
  Interval enclose(Interval, int order) const override;
  void flatten(double scale, Atoms& out) const override;

 private:
  double c_;
};

/// amp * cos(2 pi freq t + phase).
class CosineNode final : public Node {
 public:
  CosineNode(double amp, int freq, double phase);
  double amp() const { return amp_; }
  int freq() const { return freq_; }
  double phase() const { return phase_; }
  double eval(double t, int order) const override;
  Interval enclose(Interval t, int order) const override;
  void flatten(double scale, Atoms& out) const override;

 private:
  double amp_;
  int freq_;
  double phase_;
};

/// a0 + sum_k a_k cos(2 pi k t) + b_k sin(2 pi k t).
class TrigNode final : public Node {
 public:
  TrigNode(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);
  const std::vector<double>& cos_coeffs() const { return a_; }
  const std::vector<double>& sin_coeffs() const { return b_; }
  double eval(double t, int order) const override;
  Interval enclose(Interval t, int order) const override;
  void flatten(double scale, Atoms& out) const override;

 private:
  std::vector<double> a_;  // a_0 .. a_K
  std::vector<double> b_;  // b_1 .. b_K
};

class BumpNode final : public Node {
 public:
  BumpNode(double center, double halfwidth, double amp);
  double center() const { return m_; }
  double halfwidth() const { return w_; }
  double amp() const { return c_; }
  double eval(double t, int order) const override;
  Interval enclose(Interval t, int order) const override;
  void flatten(double scale, Atoms& out) const override;
  bool analytic() const override { return false; }

 private:
  double m_, w_, c_;
};

class SumNode final : public Node {
 public:
  explicit SumNode(std::vector<Expr> children);
  const std::vector<Expr>& children() const { return kids_; }
  double eval(double t, int order) const override;
  Interval enclose(Interval t, int order) const override;
  void flatten(double scale, Atoms& out) const override;
  void declare_limits(std::vector<LimitStructure>& out) const override;
  bool analytic() const override;

 private:
  std::vector<Expr> kids_;
};

/// 1 - child.
class OneMinusNode final : public Node {
 public:
  explicit OneMinusNode(Expr child);
  const Expr& child() const { return kid_; }
  double eval(double t, int order) const override;
  Interval enclose(Interval t, int order) const override;
  void flatten(double scale, Atoms& out) const override;
  void declare_limits(std::vector<LimitStructure>& out) const override;
  bool analytic() const override { return kid_->analytic(); }

 private:
  Expr kid_;
};

/// h = sum_{n<=depth} sum_k c_n psi(2 3^n (t - m_{n,k})).
class CantorNode final : public Node {
 public:
  CantorNode(int depth, Schedule schedule);
  int depth() const { return depth_; }
  const Schedule& schedule() const { return schedule_; }
  /// All bumps, sorted by center.
  const std::vector<BumpAtom>& bumps() const { return bumps_; }
  double eval(double t, int order) const override;
  Interval enclose(Interval t, int order) const override;
  void flatten(double scale, Atoms& out) const override;
  void declare_limits(std::vector<LimitStructure>& out) const override;
  bool analytic() const override { return false; }

 private:
  int depth_;
  Schedule schedule_;
  std::vector<BumpAtom> bumps_;
};

struct StaircaseParams {
  double point = 0.5;   // accumulation point p
  double reach = 0.25;  // steps occupy [p - reach, p]
  int steps = 8;
  double rise = 1.0;     // step j rises rise * 2^-j
  double plateau = 0.1;  // flat top [p, p + plateau]
  double fall = 0.2;     // descent over [p + plateau, p + plateau + fall]
};

/// Nonnegative staircase climbing toward p with isolated flat joints, a flat
/// top and a single smooth descent back to 0.
class StaircaseNode final : public Node {
 public:
  explicit StaircaseNode(StaircaseParams params);
  const StaircaseParams& params() const { return p_; }
  double eval(double t, int order) const override;
  Interval enclose(Interval t, int order) const override;
  void flatten(double scale, Atoms& out) const override;
  void declare_limits(std::vector<LimitStructure>& out) const override;
  bool analytic() const override { return false; }

 private:
  struct Piece {
    double lo, hi;   // local coordinate x = t - (p - reach), mod 1
    double base;     // value at lo
    double height;   // signed change across the piece (0 for flat)
  };
  double local_eval(double x, int order) const;
  Interval local_enclose(Interval x, int order) const;

  StaircaseParams p_;
  std::vector<Piece> pieces_;  // steps, top, fall
};

Expr constant(double c);
Expr cosine(double amp, int freq, double phase = 0.0);
Expr trig(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);
Expr bump_node(double center, double halfwidth, double amp);
Expr sum(std::vector<Expr> children);
Expr one_minus(Expr child);
Expr cantor_sum(int depth, const Schedule& schedule);
Expr staircase(const StaircaseParams& params);

}  // namespace warpmin
