#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace nemem {

using Mat32 = Eigen::Matrix<double, 3, 2>;
using Mat33 = Eigen::Matrix3d;
using Mat22 = Eigen::Matrix2d;
using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

/// Singular data of a 3x2 matrix, F = Q * D * R with D = [lamM 0; 0 lamm; 0 0].
///
/// Columns of Q are (e1, e2, e1 x e2); rows of R are (f1, f2), so that
/// F f1 = lamM e1 and F f2 = lamm e2.  Q is always a proper rotation.  When the
/// singular values coincide the frame is not unique; the first right singular
/// vector is then aligned with the first canonical axis.
struct SingularData {
  double lamM = 0.0;
  double lamm = 0.0;
  double delta = 0.0;  ///< areal stretch lamM * lamm = |adj2(F)|
  Mat33 Q = Mat33::Identity();
  Mat22 R = Mat22::Identity();
  Vec3 e1 = Vec3::UnitX();
  Vec3 e2 = Vec3::UnitY();
  Vec2 f1 = Vec2::UnitX();
  Vec2 f2 = Vec2::UnitY();

  /// Q * D * R.
  Mat32 reconstruct() const;
};

/// Vector of 2x2 minors of F, normal to the deformed plane; |adj2(F)| = delta(F).
Vec3 adj2(const Mat32& F);

/// Closed-form singular value decomposition of a 3x2 matrix.
SingularData svd32(const Mat32& F);

/// Largest singular value only (no frames).
double lambda_max(const Mat32& F);

/// Second singular value of A - B; zero iff A and B are rank-one connected.
double rank_one_gap(const Mat32& A, const Mat32& B);

/// [x 0; 0 y; 0 0].
Mat32 diag_embed(double x, double y);

/// a (x) b.
inline Mat32 outer(const Vec3& a, const Vec2& b) { return a * b.transpose(); }

}  // namespace nemem
