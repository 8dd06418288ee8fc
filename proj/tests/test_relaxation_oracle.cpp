#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "nemem/errors.hpp"
#include "nemem/membrane.hpp"
#include "nemem/relaxation_oracle.hpp"
#include "oracles.hpp"

using namespace nemem;

namespace {
const MaterialParams kP{2.0, 8.0, 0.0};

void check_witness(const Mat32& F, const OracleResult& res) {
  const double pairing =
      measure_pairing(res.best_measure, [](const Mat32& G) { return energy_W2D(G, kP); });
  CHECK(res.value == pairing);
  CHECK((res.best_measure.barycenter() - F).norm() <= 1e-12 * std::max(1.0, F.norm()));
  CHECK(std::abs(res.best_measure.total_weight() - 1.0) <= 1e-14);
  CHECK(res.gap == res.value - res.closed_form);
  CHECK(res.closed_form == energy_Wmem(F, kP).energy);
  for (const Split& s : res.best_measure.tree) {
    CHECK(rank_one_gap(s.plus, s.minus) <= 1e-12 * std::max(1.0, (s.plus - s.minus).norm()));
    CHECK(s.level <= res.depth_used);
  }
}
}  // namespace

TEST_CASE("oracle configuration is validated") {
  CHECK_NOTHROW(OracleConfig{}.validate());
  OracleConfig cfg;
  cfg.depth = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg.depth = 4;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = OracleConfig{};
  cfg.t_grid = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = OracleConfig{};
  cfg.n_azimuth = -1;
  CHECK_THROWS_AS(relax_lamination(diag_embed(1, 1), kP, cfg), InvalidInput);
}

TEST_CASE("oracle examples") {
  SUBCASE("identity reaches the zero set") {
    const Mat32 F = diag_embed(1.0, 1.0);
    const OracleResult res = relax_lamination(F, kP);
    CHECK(res.value <= 1e-3);
    CHECK(res.closed_form == 0.0);
    CHECK(res.value >= -1e-9);
    check_witness(F, res);
  }
  SUBCASE("solid point admits no beneficial split") {
    const Mat32 F = diag_embed(2.5, 0.8);
    const OracleResult res = relax_lamination(F, kP);
    CHECK(std::abs(res.value - 0.3425) <= 1e-9);
    CHECK(res.gap >= -1e-9);
    check_witness(F, res);
  }
  SUBCASE("wrinkling point") {
    const Mat32 F = diag_embed(3.0, 1.0 / 3.0);
    const OracleResult res = relax_lamination(F, kP);
    CHECK(std::abs(res.value - 0.58333333) <= 1e-3);
    CHECK(res.gap >= -1e-9);
    check_witness(F, res);
  }
}

TEST_CASE("envelope along a single line") {
  const Mat32 S = diag_embed(2.5, 0.8);
  std::mt19937_64 rng(40);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const Vec3 a(g(rng), g(rng), g(rng));
    const Vec2 b(g(rng), g(rng));
    CHECK(oracle::rel_err(relax_along_line(S, a, b, kP), energy_W2D(S, kP)) <= 1e-12);
  }
  const double along = relax_along_line(diag_embed(1, 1), Vec3::UnitX(), Vec2::UnitY(), kP);
  CHECK(along < 0.41421356);
  // Direction vectors are normalized first.
  CHECK(relax_along_line(diag_embed(1, 1), 3.0 * Vec3::UnitX(), 0.5 * Vec2::UnitY(), kP) == along);
  const double degenerate = relax_along_line(diag_embed(1, 0), Vec3::UnitY(), Vec2::UnitY(), kP);
  CHECK(std::isfinite(degenerate));
  CHECK(energy_W2D(diag_embed(1, 0), kP) == std::numeric_limits<double>::infinity());
}

TEST_CASE("oracle is deterministic across thread counts") {
  OracleConfig cfg;
  cfg.n_azimuth = 16;
  cfg.n_polar = 4;
  cfg.n_b = 8;
  cfg.n_random = 16;
  cfg.t_grid = 20;
  cfg.refine_iters = 10;
  cfg.seed = 7;
  const Mat32 F = diag_embed(1.6, 1.25);
  cfg.threads = 1;
  const OracleResult serial = relax_lamination(F, kP, cfg);
  cfg.threads = 4;
  const OracleResult parallel = relax_lamination(F, kP, cfg);
  CHECK(serial.value == parallel.value);
  REQUIRE(serial.best_measure.atoms.size() == parallel.best_measure.atoms.size());
  for (size_t i = 0; i < serial.best_measure.atoms.size(); ++i) {
    CHECK(serial.best_measure.atoms[i].weight == parallel.best_measure.atoms[i].weight);
    CHECK(serial.best_measure.atoms[i].matrix == parallel.best_measure.atoms[i].matrix);
  }
  const OracleResult again = relax_lamination(F, kP, cfg);
  CHECK(again.value == parallel.value);
}

TEST_CASE("deeper search never does worse") {
  OracleConfig cfg;
  cfg.n_azimuth = 16;
  cfg.n_polar = 4;
  cfg.n_b = 8;
  cfg.n_random = 16;
  cfg.t_grid = 20;
  cfg.refine_iters = 10;
  for (const Mat32& F : {diag_embed(1.0, 1.0), diag_embed(1.6, 1.25), diag_embed(3.0, 1.0 / 3.0)}) {
    cfg.depth = 1;
    const OracleResult d1 = relax_lamination(F, kP, cfg);
    cfg.depth = 2;
    const OracleResult d2 = relax_lamination(F, kP, cfg);
    CHECK(d2.value <= d1.value);
    CHECK(d1.value <= energy_W2D(F, kP));
    CHECK(d1.depth_used <= 1);
    check_witness(F, d2);
  }
}

TEST_CASE("oracle upper bound sits above the closed form at random points") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 4; ++k) {
    const Mat32 F = oracle::random_mat32(rng, 1.5);
    const OracleResult res = relax_lamination(F, kP);
    CHECK(res.gap >= -1e-9);
    CHECK(res.gap <= 5e-3);
    check_witness(F, res);
  }
}
