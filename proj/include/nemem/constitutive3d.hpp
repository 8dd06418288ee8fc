#pragma once

#include "nemem/core_algebra.hpp"

namespace nemem {

/// Material constants of the nematic elastomer.
struct MaterialParams {
  double mu = 1.0;     ///< shear modulus (> 0)
  double r = 1.0;      ///< chain anisotropy (>= 1); r = 1 is neo-Hookean
  double kappa = 0.0;  ///< Frank constant, equal-modulus form (>= 0)

  /// Throws InvalidInput unless mu > 0, r >= 1, kappa >= 0 (all finite).
  void validate() const;
};

/// A unit director.  Construction rejects |n| != 1 beyond 1e-12.
class DirectorState {
 public:
  explicit DirectorState(const Vec3& n);
  const Vec3& n() const { return n_; }

 private:
  Vec3 n_;
};

/// Tolerance on |det F - 1| for the incompressibility shell.
inline constexpr double kDetTol = 1e-9;

/// r^(-1/3) (I + (r - 1) n (x) n).
Mat33 step_length_tensor(const DirectorState& n, const MaterialParams& p);

/// Entropic energy W^e(F, n); +infinity off det F = 1.
double energy_We(const Mat33& F, const DirectorState& n, const MaterialParams& p);

/// Director-minimized entropic energy, closed form through the largest
/// singular value of F; +infinity off det F = 1.
double energy_W3D(const Mat33& F, const MaterialParams& p);

/// Unit eigenvector of F F^T for its largest eigenvalue (the optimal director).
Vec3 optimal_director(const Mat33& F);

/// (kappa / 2) |gradN * adjF|^2.
double energy_frank_eq(const Mat33& gradN, const Mat33& adjF, const MaterialParams& p);

}  // namespace nemem
