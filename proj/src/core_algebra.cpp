#include "nemem/core_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace nemem {

namespace {

// Eigenvalue split of the symmetric 2x2 Gram matrix [a b; b c].
struct GramSpectrum {
  double half_trace;
  double radius;
};

GramSpectrum gram_spectrum(const Mat32& F, double& a, double& b, double& c) {
  a = F.col(0).squaredNorm();
  b = F.col(0).dot(F.col(1));
  c = F.col(1).squaredNorm();
  const double h = 0.5 * (a - c);
  return {0.5 * (a + c), std::sqrt(h * h + b * b)};
}

// Unit vector orthogonal to u whose first nonzero component is positive.
Vec3 complete_orthogonal(const Vec3& u) {
  Eigen::Index k = 0;
  u.cwiseAbs().minCoeff(&k);
  Vec3 v = Vec3::Unit(k) - u.dot(Vec3::Unit(k)) * u;
  v.normalize();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v(i)) > 1e-15) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return v;
}

Vec2 positive_first(Vec2 v) {
  if (v(0) < 0.0 || (v(0) == 0.0 && v(1) < 0.0)) v = -v;
  return v;
}

}  // namespace

Mat32 SingularData::reconstruct() const {
  return Q * diag_embed(lamM, lamm) * R;
}

Vec3 adj2(const Mat32& F) {
  return {F(1, 0) * F(2, 1) - F(1, 1) * F(2, 0),
          -(F(0, 0) * F(2, 1) - F(0, 1) * F(2, 0)),
          F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0)};
}

Mat32 diag_embed(double x, double y) {
  Mat32 D = Mat32::Zero();
  D(0, 0) = x;
  D(1, 1) = y;
  return D;
}

double lambda_max(const Mat32& F) {
  double a, b, c;
  const auto s = gram_spectrum(F, a, b, c);
  return std::sqrt(s.half_trace + s.radius);
}

SingularData svd32(const Mat32& F) {
  SingularData out;
  double a, b, c;
  const auto s = gram_spectrum(F, a, b, c);

  out.lamM = std::sqrt(s.half_trace + s.radius);
  // delta from the minors directly; lamm = delta / lamM avoids the
  // cancellation in half_trace - radius for thin matrices.
  out.delta = adj2(F).norm();
  out.lamm = out.lamM > 0.0 ? std::min(out.delta / out.lamM, out.lamM) : 0.0;

  // Repeated singular values: any right frame works, pick the canonical one.
  const bool repeated = s.radius <= 1e-15 * s.half_trace;
  const double phi = repeated ? 0.0 : 0.5 * std::atan2(2.0 * b, a - c);
  out.f1 = Vec2(std::cos(phi), std::sin(phi));
  out.f2 = Vec2(-out.f1(1), out.f1(0));

  if (out.lamM > 0.0) {
    out.e1 = (F * out.f1) / out.lamM;
    out.e1.normalize();
  } else {
    out.e1 = Vec3::UnitX();
  }

  if (out.lamM > 0.0 && out.lamm > 1e-14 * out.lamM) {
    Vec3 v = F * out.f2;
    v -= v.dot(out.e1) * out.e1;
    out.e2 = v.normalized();
  } else {
    out.f2 = positive_first(out.f2);
    out.e2 = complete_orthogonal(out.e1);
  }

  out.Q.col(0) = out.e1;
  out.Q.col(1) = out.e2;
  out.Q.col(2) = out.e1.cross(out.e2);
  out.R.row(0) = out.f1.transpose();
  out.R.row(1) = out.f2.transpose();
  return out;
}

double rank_one_gap(const Mat32& A, const Mat32& B) {
  return svd32(A - B).lamm;
}

}  // namespace nemem
