#pragma once

#include <array>
#include <string_view>

#include "nemem/constitutive3d.hpp"
#include "nemem/core_algebra.hpp"

namespace nemem {

/// Regions of the (lamM, delta) plane on which the relaxed membrane energy
/// takes its four forms:
///   L  liquid-like, zero energy and stress
///   M  in-plane director microstructure, equi-biaxial tension
///   W  wrinkling, uniaxial tension
///   S  solid-like, no relaxation, biaxial tension
/// Invalid marks delta > lamM^2, which no 3x2 matrix realizes.
enum class Region { L, M, W, S, Invalid };

std::string_view to_string(Region region);

/// Powers of the anisotropy that delimit the regions.
struct AnisotropyPowers {
  explicit AnisotropyPowers(double r);
  double r;
  double cbrt;     ///< r^(1/3), stretch of the spontaneous state
  double sixth;    ///< r^(1/6), areal stretch of the spontaneous state
  double sqrt;     ///< r^(1/2)
  double quarter;  ///< r^(1/4)
};

/// Region of (lamM, delta).  Shared boundaries resolve in the order L, S, W, M.
/// Throws InvalidInput for negative or non-finite arguments.
Region classify(double lamM, double delta, const MaterialParams& p);

/// Full-rank test used by the unrelaxed energy: delta > 1e-12 * max(1, lamM^2).
bool is_full_rank(double lamM, double delta);

/// The three candidate values of the director-minimized membrane energy on
/// (lamM, delta): director along the major in-plane stretch, director along
/// the membrane normal, and the tilted interior critical point (+infinity
/// when lamM * delta is outside (r^(-1/2), r^(1/2))).
double w2d_director_in_plane(double lamM, double delta, const MaterialParams& p);
double w2d_director_normal(double lamM, double delta, const MaterialParams& p);
double w2d_director_tilted(double lamM, double delta, const MaterialParams& p);

/// Unrelaxed membrane energy as a function of the invariants; +infinity when
/// the invariants are not full rank.
double w2d_from_invariants(double lamM, double delta, const MaterialParams& p);

/// Unrelaxed membrane energy inf_{c, n} W^e((Ft|c), n).
double energy_W2D(const Mat32& Ft, const MaterialParams& p);

/// energy_W2D with the powers of r precomputed; bitwise equal results.
class W2DEvaluator {
 public:
  explicit W2DEvaluator(const MaterialParams& p);
  double operator()(const Mat32& Ft) const;
  double from_invariants(double lamM, double delta) const;

 private:
  double half_mu_;
  double r_;
  double cbrt_;
  double sqrt_;
};

/// Minimizing third column for fixed director: l adj2 / |l^(1/2) adj2|^2.
/// Throws RankDeficient when Ft is not full rank.
Vec3 minimize_thickness_vector(const Mat32& Ft, const DirectorState& n, const MaterialParams& p);

/// Scalar representative of the relaxed energy on (lamM, delta) with
/// delta <= lamM^2.  Throws OutOfDomain for delta > lamM^2 (1 + 1e-12).
double psi(double lamM, double delta, const MaterialParams& p);

/// psi continued to the whole closed quadrant by dropping the delta <= lamM^2
/// constraint from the region tests; the unrealizable part falls in L or M.
/// Used by the convexity representative g(X, A) = psi_extended(lamM(X), |A|).
double psi_extended(double lamM, double delta, const MaterialParams& p);

struct MembraneEval {
  Region region = Region::Invalid;
  double energy = 0.0;
  double lamM = 0.0;
  double delta = 0.0;
};

/// Relaxed (quasiconvex) membrane energy of Ft.  Finite for every Ft.
MembraneEval energy_Wmem(const Mat32& Ft, const MaterialParams& p);

enum class StressKind { Zero, Uniaxial, Equibiaxial, Biaxial };

std::string_view to_string(StressKind kind);

struct StressState {
  Mat33 sigma = Mat33::Zero();
  StressKind kind = StressKind::Zero;
  Region region = Region::L;
  /// Eigenvalues of sigma in the membrane plane, along e1 then e2 (descending).
  std::array<double, 2> principal_values{0.0, 0.0};
  std::array<Vec3, 2> principal_dirs{Vec3::UnitX(), Vec3::UnitY()};
};

/// Closed-form Cauchy stress of the relaxed membrane.  Defined for
/// 0 < delta < lamM^2 only; throws OutOfDomain otherwise.
StressState stress_mem(const Mat32& Ft, const MaterialParams& p);

/// Entrywise central difference of f at X with step h.
template <class Fn>
Mat32 central_difference(Fn&& f, const Mat32& X, double h) {
  Mat32 g;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) {
      Mat32 Xp = X, Xm = X;
      Xp(i, j) += h;
      Xm(i, j) -= h;
      g(i, j) = (f(Xp) - f(Xm)) / (2.0 * h);
    }
  }
  return g;
}

/// Default finite-difference step, 1e-5 * max(1, |Ft|).
double default_fd_step(const Mat32& Ft);

/// Central-difference gradient of the relaxed energy.
Mat32 grad_Wmem_fd(const Mat32& Ft, const MaterialParams& p, double h);
Mat32 grad_Wmem_fd(const Mat32& Ft, const MaterialParams& p);

/// Central-difference gradient of the unrelaxed energy.
Mat32 grad_W2D_fd(const Mat32& Ft, const MaterialParams& p, double h);

}  // namespace nemem
