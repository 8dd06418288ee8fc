#pragma once

#include <cstdint>

#include "nemem/constitutive3d.hpp"
#include "nemem/core_algebra.hpp"
#include "nemem/microstructure.hpp"

namespace nemem {

/// Search parameters of the lamination oracle.  Rank-one directions a (x) b
/// take a on an azimuth x polar grid of the upper hemisphere and b on a grid
/// of the half circle; axis-aligned directions e_i (x) f_j are always added.
struct OracleConfig {
  int depth = 2;             ///< lamination levels, 1..3
  int n_azimuth = 64;
  int n_polar = 16;
  int n_b = 16;
  int n_random = 64;         ///< extra directions drawn from `seed`
  int t_grid = 40;           ///< split magnitudes per sign, log-spaced
  int refine_iters = 50;     ///< coordinate-descent sweeps
  std::uint64_t seed = 0;
  unsigned threads = 0;      ///< 0: NEMEM_THREADS or hardware concurrency

  /// Throws InvalidInput unless every count is positive and depth <= 3.
  void validate() const;
};

struct OracleResult {
  double value = 0.0;        ///< <best_measure, W_2D>
  double closed_form = 0.0;  ///< energy_Wmem at the same point
  double gap = 0.0;          ///< value - closed_form
  int depth_used = 0;        ///< levels in the returned lamination tree
  DiscreteYoungMeasure best_measure;
};

/// Upper bound on the rank-one convex envelope of W_2D at Ft by search over
/// lamination trees of depth <= cfg.depth.  The reported value is the pairing
/// of W_2D with the returned measure.  Deterministic in cfg.seed regardless
/// of thread count.
OracleResult relax_lamination(const Mat32& Ft, const MaterialParams& p, const OracleConfig& cfg = {});

/// Value at t = 0 of the lower convex envelope of t -> W_2D(Ft + t a (x) b)
/// sampled on the default magnitude grid.  a and b are normalized first.
double relax_along_line(const Mat32& Ft, const Vec3& a, const Vec2& b, const MaterialParams& p);

}  // namespace nemem
