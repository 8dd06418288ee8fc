#pragma once

#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include "nemem/constitutive3d.hpp"
#include "nemem/core_algebra.hpp"

namespace nemem {

struct Atom {
  double weight = 0.0;
  Mat32 matrix = Mat32::Zero();
};

/// One rank-one split: a parent at level `level` is replaced by `plus` with
/// weight theta and `minus` with weight 1 - theta, where
/// plus - minus = magnitude * a (x) b with |a| = |b| = 1.
struct Split {
  int level = 1;
  double theta = 0.5;
  Mat32 plus = Mat32::Zero();
  Mat32 minus = Mat32::Zero();
  Vec3 a = Vec3::UnitX();
  Vec2 b = Vec2::UnitX();
  double magnitude = 0.0;
};

/// Split between two matrices; direction taken from the leading singular
/// pair of plus - minus.
Split make_split(int level, double theta, const Mat32& plus, const Mat32& minus);

/// Finitely supported homogeneous gradient Young measure with the lamination
/// tree that produced it.
struct DiscreteYoungMeasure {
  std::vector<Atom> atoms;
  std::vector<Split> tree;

  Mat32 barycenter() const;
  double total_weight() const;

  /// Drops atoms with weight below 1e-14, merges bitwise-equal matrices and
  /// renormalizes to unit mass.
  void normalize();

  /// Q * G * R applied to every atom and split.
  DiscreteYoungMeasure conjugated(const Mat33& Q, const Mat22& R) const;

  static DiscreteYoungMeasure dirac(const Mat32& G);
};

/// Two atoms diag-embed(q, +-d/q), weight (1 + deltaBar/d)/2 on the plus atom.
/// Requires q > 0 and q^2 >= d >= deltaBar >= 0 with d > 0.
DiscreteYoungMeasure laminate_wrinkle(double q, double d, double deltaBar);

/// Shear amplitude of the two-atom shear laminate, squared:
/// d^2/q^2 + q^2 - d^2/c^2 - c^2, with d^2/c^2 read as 0 when c = d = 0.
double shear_amplitude_sq(double q, double d, double c);

/// Two atoms [[c, +-xi], [0, d/c], [0, 0]] with equal weights.  Requires
/// sqrt(d) <= c <= q, or c = d = 0.
DiscreteYoungMeasure laminate_shear(double q, double d, double c);

/// Canonical minimizing measure for the relaxed energy at Ft, built in the
/// singular frame of Ft.  Throws OutOfDomain for delta > lamM^2.
DiscreteYoungMeasure young_measure_for(const Mat32& Ft, const MaterialParams& p);

struct SupportReport {
  bool pass = true;
  std::vector<std::string> violations;
};

/// Every atom has (lamM, delta) = (r^(1/4) deltaBar^(1/2), deltaBar) and all
/// atoms share one deformed-plane normal.
SupportReport check_support_M(const DiscreteYoungMeasure& nu, double deltaBar, const MaterialParams& p);

/// Every atom G has (lamM, delta) = (lbar, lbar^(1/2)) and G f_M = lbar e_M,
/// with lbar, e_M, f_M taken from Ft.
SupportReport check_support_W(const DiscreteYoungMeasure& nu, const Mat32& Ft);

inline constexpr double kSupportTol = 1e-10;

/// sum_i w_i f(G_i).  Returns +infinity as soon as an atom of positive weight
/// evaluates to +infinity; infinities are never added.
template <class Fn>
double measure_pairing(const DiscreteYoungMeasure& nu, Fn&& f) {
  double sum = 0.0;
  for (const Atom& atom : nu.atoms) {
    if (atom.weight <= 0.0) continue;
    const double v = f(atom.matrix);
    if (v == std::numeric_limits<double>::infinity()) return v;
    sum += atom.weight * v;
  }
  return sum;
}

/// Vector-valued pairing, e.g. for the adjugate.
template <class Fn>
auto measure_pairing_vec(const DiscreteYoungMeasure& nu, Fn&& f) {
  using Out = std::decay_t<decltype(f(nu.atoms.front().matrix))>;
  Out sum = Out::Zero();
  for (const Atom& atom : nu.atoms) sum += atom.weight * f(atom.matrix);
  return sum;
}

}  // namespace nemem
