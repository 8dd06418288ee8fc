#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nemem/constitutive3d.hpp"
#include "nemem/membrane.hpp"
#include "nemem/relaxation_oracle.hpp"

namespace nemem {

/// One family of sampled inequalities or identities.  A violation is
/// lhs - rhs for "lhs <= rhs" checks and |lhs - rhs| for identities, scaled
/// as documented per check; the check passes iff worst_violation <= tolerance.
struct CheckResult {
  std::string id;
  long samples = 0;
  double worst_violation = -std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  std::vector<double> worst_point;
  bool pass = true;

  void record(double violation, const std::vector<double>& point);
  void merge(const CheckResult& other);
  void finish();
};

struct SuiteReport {
  std::string suite_name;
  long samples = 0;
  /// Taken from the binding check, the one with the largest excess over its
  /// tolerance; pass iff worst_violation <= tolerance.
  double worst_violation = 0.0;
  double tolerance = 0.0;
  std::string worst_check;
  std::vector<double> worst_point;
  bool pass = true;
  std::vector<CheckResult> checks;
  /// Identifiers of every inequality exercised.
  std::vector<std::string> coverage;
};

/// Sampling box of the suites: lamM up to 3 r^(1/3).
double suite_lam_max(const MaterialParams& p);

/// Maps (u, v) in [0,1]^2 onto the interior of a region of the (lamM, delta)
/// plane.  `margin` keeps u, v inside [margin, 1 - margin].
struct InvariantPoint {
  double lamM;
  double delta;
};
InvariantPoint region_point(Region region, double u, double v, const MaterialParams& p, double margin = 0.0);

/// Relaxed energy against each director branch on grid_n^2 points per region,
/// plus the reduced scalar inequalities on one-dimensional grids of grid_n^2
/// points.  Requires r > 1.
SuiteReport verify_appendix_A(const MaterialParams& p, int grid_n);

/// Finite-difference gradient of the relaxed energy against the closed-form
/// stress, and the measure-side identities through young_measure_for, at
/// n_samples random interior points per region.
SuiteReport verify_stress_identities(const MaterialParams& p, int n_samples, std::uint64_t seed);

/// W^mem <= W_2D and 0 <= oracle - W^mem <= 5e-3 (up to 1e-9) at n_samples
/// points per region.
SuiteReport verify_envelope_chain(const MaterialParams& p, int n_samples, std::uint64_t seed,
                                  const OracleConfig& cfg = {});

/// Frame indifference of W_2D, W^mem and the region tag under random
/// (Q, R) in O(3) x O(2), and the two-sided quadratic growth bounds.
SuiteReport verify_frame_and_growth(const MaterialParams& p, int n_samples, std::uint64_t seed);

/// Constant c' with |F|^2 / c' - c' <= W^mem(F) <= c' (1 + |F|^2).
double membrane_growth_constant(const MaterialParams& p);

/// Constant c with |F|^2 / c - c <= W_3D(F) <= c (1 + |F|^2) on det F = 1.
double entropic_growth_constant(const MaterialParams& p);

/// Builds the summary fields of a report from its checks.
void finalize_report(SuiteReport& report);

}  // namespace nemem
