#include "nemem/membrane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nemem/errors.hpp"

namespace nemem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGateTol = 1e-14;

void require_nonnegative(double lamM, double delta) {
  if (!(std::isfinite(lamM) && lamM >= 0.0))
    throw InvalidInput("lamM must be finite and >= 0, got " + std::to_string(lamM));
  if (!(std::isfinite(delta) && delta >= 0.0))
    throw InvalidInput("delta must be finite and >= 0, got " + std::to_string(delta));
}

// Region test without the delta <= lamM^2 constraint.
Region region_extended(double lamM, double delta, const AnisotropyPowers& a) {
  if (lamM <= a.cbrt && delta <= a.sixth) return Region::L;
  if (std::sqrt(lamM) <= delta && delta <= lamM * lamM / a.sqrt) return Region::S;
  if (lamM > a.cbrt && delta < std::sqrt(lamM)) return Region::W;
  return Region::M;
}

double psi_in(Region region, double lamM, double delta, const MaterialParams& p,
              const AnisotropyPowers& a) {
  double bracket = 0.0;
  switch (region) {
    case Region::L:
      return 0.0;
    case Region::M:
      bracket = 2.0 * delta / a.sqrt + 1.0 / (delta * delta);
      break;
    case Region::W:
      bracket = lamM * lamM / p.r + 2.0 / lamM;
      break;
    case Region::S:
      bracket = lamM * lamM / p.r + (delta * delta) / (lamM * lamM) + 1.0 / (delta * delta);
      break;
    case Region::Invalid:
      return kInf;
  }
  return std::max(0.0, 0.5 * p.mu * (a.cbrt * bracket - 3.0));
}

}  // namespace

std::string_view to_string(Region region) {
  switch (region) {
    case Region::L: return "L";
    case Region::M: return "M";
    case Region::W: return "W";
    case Region::S: return "S";
    case Region::Invalid: return "Invalid";
  }
  return "Invalid";
}

std::string_view to_string(StressKind kind) {
  switch (kind) {
    case StressKind::Zero: return "zero";
    case StressKind::Uniaxial: return "uniaxial";
    case StressKind::Equibiaxial: return "equibiaxial";
    case StressKind::Biaxial: return "biaxial";
  }
  return "zero";
}

AnisotropyPowers::AnisotropyPowers(double r_)
    : r(r_),
      cbrt(std::cbrt(r_)),
      sixth(std::sqrt(std::cbrt(r_))),
      sqrt(std::sqrt(r_)),
      quarter(std::sqrt(std::sqrt(r_))) {}

Region classify(double lamM, double delta, const MaterialParams& p) {
  require_nonnegative(lamM, delta);
  const double cap = lamM * lamM;
  if (delta > cap * (1.0 + 1e-12)) return Region::Invalid;
  return region_extended(lamM, std::min(delta, cap), AnisotropyPowers(p.r));
}

bool is_full_rank(double lamM, double delta) {
  return delta > 1e-12 * std::max(1.0, lamM * lamM);
}

namespace {

double branch_in_plane(double lamM, double delta, double hm, double r, double c) {
  return hm * (c * (lamM * lamM / r + delta * delta / (lamM * lamM) + 1.0 / (delta * delta)) - 3.0);
}

double branch_normal(double lamM, double delta, double hm, double r, double c) {
  return hm * (c * (lamM * lamM + delta * delta / (lamM * lamM) + 1.0 / (r * delta * delta)) - 3.0);
}

double branch_tilted(double lamM, double delta, double hm, double rs, double c) {
  const double x = lamM * delta;
  if (x < (1.0 - kGateTol) / rs || x > (1.0 + kGateTol) * rs) return kInf;
  return hm * (c * (delta * delta / (lamM * lamM) + 2.0 * lamM / (rs * delta)) - 3.0);
}

}  // namespace

double w2d_director_in_plane(double lamM, double delta, const MaterialParams& p) {
  return branch_in_plane(lamM, delta, 0.5 * p.mu, p.r, std::cbrt(p.r));
}

double w2d_director_normal(double lamM, double delta, const MaterialParams& p) {
  return branch_normal(lamM, delta, 0.5 * p.mu, p.r, std::cbrt(p.r));
}

double w2d_director_tilted(double lamM, double delta, const MaterialParams& p) {
  return branch_tilted(lamM, delta, 0.5 * p.mu, std::sqrt(p.r), std::cbrt(p.r));
}

W2DEvaluator::W2DEvaluator(const MaterialParams& p)
    : half_mu_(0.5 * p.mu), r_(p.r), cbrt_(std::cbrt(p.r)), sqrt_(std::sqrt(p.r)) {}

double W2DEvaluator::from_invariants(double lamM, double delta) const {
  if (!is_full_rank(lamM, delta)) return kInf;
  return std::min({branch_in_plane(lamM, delta, half_mu_, r_, cbrt_),
                   branch_normal(lamM, delta, half_mu_, r_, cbrt_),
                   branch_tilted(lamM, delta, half_mu_, sqrt_, cbrt_)});
}

double W2DEvaluator::operator()(const Mat32& Ft) const {
  const double lamM = lambda_max(Ft);
  const double delta = adj2(Ft).norm();
  return from_invariants(lamM, std::min(delta, lamM * lamM));
}

double w2d_from_invariants(double lamM, double delta, const MaterialParams& p) {
  return W2DEvaluator(p).from_invariants(lamM, delta);
}

double energy_W2D(const Mat32& Ft, const MaterialParams& p) { return W2DEvaluator(p)(Ft); }

Vec3 minimize_thickness_vector(const Mat32& Ft, const DirectorState& n, const MaterialParams& p) {
  const Vec3 a = adj2(Ft);
  const double lamM = lambda_max(Ft);
  if (!is_full_rank(lamM, a.norm()))
    throw RankDeficient("thickness minimizer requires rank(Ft) = 2");
  const Mat33 ell = step_length_tensor(n, p);
  const Vec3 la = ell * a;
  return la / a.dot(la);
}

double psi(double lamM, double delta, const MaterialParams& p) {
  if (classify(lamM, delta, p) == Region::Invalid)
    throw OutOfDomain("psi: delta > lamM^2 is not realizable");
  return psi_extended(lamM, std::min(delta, lamM * lamM), p);
}

double psi_extended(double lamM, double delta, const MaterialParams& p) {
  require_nonnegative(lamM, delta);
  const AnisotropyPowers a(p.r);
  return psi_in(region_extended(lamM, delta, a), lamM, delta, p, a);
}

MembraneEval energy_Wmem(const Mat32& Ft, const MaterialParams& p) {
  MembraneEval out;
  out.lamM = lambda_max(Ft);
  out.delta = std::min(adj2(Ft).norm(), out.lamM * out.lamM);
  const AnisotropyPowers a(p.r);
  out.region = region_extended(out.lamM, out.delta, a);
  out.energy = psi_in(out.region, out.lamM, out.delta, p, a);
  return out;
}

StressState stress_mem(const Mat32& Ft, const MaterialParams& p) {
  const SingularData sd = svd32(Ft);
  const double lamM = sd.lamM;
  const double delta = sd.delta;
  if (!(delta > 0.0))
    throw OutOfDomain("stress is defined only for 0 < delta < lamM^2: violated 0 < delta");
  if (!(delta < lamM * lamM * (1.0 - 1e-12)))
    throw OutOfDomain(
        "stress is defined only for 0 < delta < lamM^2: violated delta < lamM^2 "
        "(equal singular values)");

  const AnisotropyPowers a(p.r);
  const double scale = p.mu * a.cbrt;
  StressState out;
  out.region = classify(lamM, delta, p);
  out.principal_dirs = {sd.e1, sd.e2};
  double s1 = 0.0, s2 = 0.0;
  switch (out.region) {
    case Region::L:
      out.kind = StressKind::Zero;
      break;
    case Region::M:
      out.kind = StressKind::Equibiaxial;
      s1 = s2 = scale * (delta / a.sqrt - 1.0 / (delta * delta));
      break;
    case Region::W:
      out.kind = StressKind::Uniaxial;
      s1 = scale * (lamM * lamM / p.r - 1.0 / lamM);
      break;
    case Region::S:
      out.kind = StressKind::Biaxial;
      s1 = scale * (lamM * lamM / p.r - 1.0 / (delta * delta));
      s2 = scale * (delta * delta / (lamM * lamM) - 1.0 / (delta * delta));
      break;
    case Region::Invalid:
      throw OutOfDomain("stress requested at unrealizable invariants");
  }
  out.principal_values = {s1, s2};
  out.sigma = s1 * sd.e1 * sd.e1.transpose() + s2 * sd.e2 * sd.e2.transpose();
  return out;
}

double default_fd_step(const Mat32& Ft) { return 1e-5 * std::max(1.0, Ft.norm()); }

Mat32 grad_Wmem_fd(const Mat32& Ft, const MaterialParams& p, double h) {
  return central_difference([&](const Mat32& X) { return energy_Wmem(X, p).energy; }, Ft, h);
}

Mat32 grad_Wmem_fd(const Mat32& Ft, const MaterialParams& p) {
  return grad_Wmem_fd(Ft, p, default_fd_step(Ft));
}

Mat32 grad_W2D_fd(const Mat32& Ft, const MaterialParams& p, double h) {
  return central_difference([&](const Mat32& X) { return energy_W2D(X, p); }, Ft, h);
}

}  // namespace nemem
