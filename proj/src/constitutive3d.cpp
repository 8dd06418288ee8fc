#include "nemem/constitutive3d.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <string>

#include "nemem/errors.hpp"

namespace nemem {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool on_shell(const Mat33& F) {
  const double d = F.determinant();
  return std::isfinite(d) && std::abs(d - 1.0) <= kDetTol;
}
}  // namespace

void MaterialParams::validate() const {
  if (!(std::isfinite(mu) && mu > 0.0))
    throw InvalidInput("shear modulus mu must be finite and > 0, got " + std::to_string(mu));
  if (!(std::isfinite(r) && r >= 1.0))
    throw InvalidInput("anisotropy r must be finite and >= 1, got " + std::to_string(r));
  if (!(std::isfinite(kappa) && kappa >= 0.0))
    throw InvalidInput("Frank modulus kappa must be finite and >= 0, got " + std::to_string(kappa));
}

DirectorState::DirectorState(const Vec3& n) : n_(n) {
  if (!n.allFinite() || std::abs(n.norm() - 1.0) > 1e-12)
    throw InvalidInput("director must be a unit vector, |n| = " + std::to_string(n.norm()));
}

Mat33 step_length_tensor(const DirectorState& n, const MaterialParams& p) {
  return std::cbrt(1.0 / p.r) *
         (Mat33::Identity() + (p.r - 1.0) * n.n() * n.n().transpose());
}

double energy_We(const Mat33& F, const DirectorState& n, const MaterialParams& p) {
  if (!on_shell(F)) return kInf;
  const double alpha = (p.r - 1.0) / p.r;
  const double bracket = F.squaredNorm() - alpha * (F.transpose() * n.n()).squaredNorm();
  return 0.5 * p.mu * (std::cbrt(p.r) * bracket - 3.0);
}

double energy_W3D(const Mat33& F, const MaterialParams& p) {
  if (!on_shell(F)) return kInf;
  Eigen::SelfAdjointEigenSolver<Mat33> eig;
  eig.computeDirect(F.transpose() * F, Eigen::EigenvaluesOnly);
  const double lam_max_sq = eig.eigenvalues()(2);
  const double alpha = (p.r - 1.0) / p.r;
  return 0.5 * p.mu * (std::cbrt(p.r) * (F.squaredNorm() - alpha * lam_max_sq) - 3.0);
}

Vec3 optimal_director(const Mat33& F) {
  Eigen::SelfAdjointEigenSolver<Mat33> eig(F * F.transpose());
  return eig.eigenvectors().col(2).normalized();
}

double energy_frank_eq(const Mat33& gradN, const Mat33& adjF, const MaterialParams& p) {
  if (p.kappa == 0.0) return 0.0;
  return 0.5 * p.kappa * (gradN * adjF).squaredNorm();
}

}  // namespace nemem
