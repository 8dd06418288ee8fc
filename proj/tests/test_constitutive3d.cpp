#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "nemem/constitutive3d.hpp"
#include "nemem/errors.hpp"
#include "oracles.hpp"

using namespace nemem;

namespace {
const MaterialParams kP{2.0, 8.0, 0.0};

Mat33 random_unimodular(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = std::exp(u(rng)), b = std::exp(u(rng));
  return oracle::random_rotation(rng) * Eigen::Vector3d(a, b, 1.0 / (a * b)).asDiagonal() *
         oracle::random_rotation(rng);
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return Vec3(g(rng), g(rng), g(rng)).normalized();
}
}  // namespace

TEST_CASE("material parameters are validated") {
  CHECK_NOTHROW(kP.validate());
  CHECK_THROWS_AS((MaterialParams{0.0, 8.0, 0.0}.validate()), InvalidInput);
  CHECK_THROWS_AS((MaterialParams{1.0, 0.5, 0.0}.validate()), InvalidInput);
  CHECK_THROWS_AS((MaterialParams{1.0, 2.0, -1.0}.validate()), InvalidInput);
  CHECK_THROWS_AS(DirectorState(Vec3(1.0, 1.0, 0.0)), InvalidInput);
}

TEST_CASE("step-length tensor") {
  const Mat33 l1 = step_length_tensor(DirectorState(Vec3::UnitY()), MaterialParams{1.0, 1.0, 0.0});
  CHECK((l1 - Mat33::Identity()).norm() <= 1e-15);
  const Mat33 l8 = step_length_tensor(DirectorState(Vec3::UnitX()), kP);
  CHECK((l8 - Eigen::Vector3d(4.0, 0.5, 0.5).asDiagonal().toDenseMatrix()).norm() <= 1e-14);

  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> ur(1.0, 100.0);
  for (int k = 0; k < 100; ++k) {
    const MaterialParams p{1.0, ur(rng), 0.0};
    const Mat33 l = step_length_tensor(DirectorState(random_unit(rng)), p);
    CHECK(l.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((l - l.transpose()).norm() <= 1e-14);
  }
}

TEST_CASE("entropic energy examples") {
  CHECK(energy_We(Mat33::Identity(), DirectorState(Vec3::UnitX()), kP) == doctest::Approx(1.25).epsilon(1e-14));
  const Mat33 F2 = Eigen::Vector3d(2.0, 1.0, 1.0).asDiagonal();
  CHECK(energy_We(F2, DirectorState(Vec3::UnitX()), kP) == std::numeric_limits<double>::infinity());
  const double s = 1.0 / std::sqrt(2.0);
  const Mat33 Fw = Eigen::Vector3d(2.0, s, s).asDiagonal();
  CHECK(std::abs(energy_We(Fw, DirectorState(Vec3::UnitX()), kP)) <= 1e-14);
  CHECK(energy_W3D(Mat33::Identity(), kP) == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(std::abs(energy_W3D(Fw, kP)) <= 1e-14);
  CHECK(energy_W3D(F2, kP) == std::numeric_limits<double>::infinity());
}

TEST_CASE("isotropic limit is neo-Hookean") {
  std::mt19937_64 rng(11);
  const MaterialParams p{3.0, 1.0, 0.0};
  for (int k = 0; k < 100; ++k) {
    const Mat33 F = random_unimodular(rng);
    CHECK(oracle::rel_err(energy_W3D(F, p), 1.5 * (F.squaredNorm() - 3.0)) <= 1e-12);
  }
}

TEST_CASE("director minimization") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 200; ++k) {
    const Mat33 F = random_unimodular(rng);
    const double w3 = energy_W3D(F, kP);
    for (int j = 0; j < 5; ++j)
      CHECK(w3 <= energy_We(F, DirectorState(random_unit(rng)), kP) + 1e-10);
    const double at_opt = energy_We(F, DirectorState(optimal_director(F)), kP);
    CHECK(std::abs(at_opt - w3) <= 1e-10 * std::max(1.0, std::abs(w3)));
  }
}

TEST_CASE("bulk energy is isotropic") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 1000; ++k) {
    const Mat33 F = random_unimodular(rng);
    const Mat33 G = oracle::random_rotation(rng) * F * oracle::random_rotation(rng);
    CHECK(oracle::rel_err(energy_W3D(G, kP), energy_W3D(F, kP)) <= 1e-12);
  }
}

TEST_CASE("entropic energy growth bounds") {
  std::mt19937_64 rng(14);
  for (double r : {1.01, 2.0, 8.0, 100.0}) {
    const MaterialParams p{2.0, r, 0.0};
    const double c = std::max({2.0 * std::cbrt(r * r) / p.mu, 1.5 * p.mu, 0.5 * p.mu * std::cbrt(r), 1.0});
    for (int k = 0; k < 1000; ++k) {
      const Mat33 F = random_unimodular(rng);
      const double w = energy_We(F, DirectorState(random_unit(rng)), p);
      CHECK(F.squaredNorm() / c - c <= w + 1e-12);
      CHECK(w <= c * (F.squaredNorm() + 1.0));
    }
  }
}

TEST_CASE("equal-modulus Frank density") {
  const Mat33 Z = Mat33::Zero();
  CHECK(energy_frank_eq(Z, Mat33::Identity(), MaterialParams{1.0, 2.0, 3.0}) == 0.0);
  Mat33 g = Mat33::Zero();
  g(0, 0) = 1.0;
  CHECK(energy_frank_eq(g, Mat33::Identity(), MaterialParams{1.0, 2.0, 0.0}) == 0.0);
  CHECK(energy_frank_eq(g, Mat33::Identity(), MaterialParams{1.0, 2.0, 2.0}) == doctest::Approx(1.0));
}
