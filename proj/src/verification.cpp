#include "nemem/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "nemem/errors.hpp"
#include "nemem/microstructure.hpp"
#include "nemem/parallel.hpp"

namespace nemem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;
constexpr Region kRegions[] = {Region::L, Region::M, Region::W, Region::S};

// (lhs - rhs) / max(1, |rhs|); -infinity when rhs is +infinity.
double excess(double lhs, double rhs) {
  if (rhs == kInf) return lhs == kInf ? 0.0 : -kInf;
  return (lhs - rhs) / std::max(1.0, std::abs(rhs));
}

double rel_diff(double a, double b) {
  if (a == b) return 0.0;
  if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

template <class M>
double rel_diff(const M& a, const M& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

CheckResult make_check(const std::string& id, double tol) {
  CheckResult c;
  c.id = id;
  c.tolerance = tol;
  return c;
}

// Runs body(i, local_checks) for i in [0, n) in parallel and merges the
// per-index results in index order.
template <class Body>
void run_indexed(std::vector<CheckResult>& checks, std::size_t n, Body&& body) {
  std::vector<std::vector<CheckResult>> parts(n, checks);
  for (auto& part : parts)
    for (auto& c : part) {
      c.samples = 0;
      c.worst_violation = -kInf;
      c.worst_point.clear();
    }
  parallel_for(n, [&](std::size_t i) { body(i, parts[i]); });
  for (const auto& part : parts)
    for (std::size_t k = 0; k < checks.size(); ++k) checks[k].merge(part[k]);
}

std::vector<double> unit_grid(int n) {
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = (i + 0.5) / n;
  return u;
}

Mat33 random_orthogonal3(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  Mat33 Q = q.toRotationMatrix();
  if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) Q.col(2) *= -1.0;
  return Q;
}

Mat33 random_rotation3(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

Mat22 random_orthogonal2(std::mt19937_64& rng) {
  const double t = std::uniform_real_distribution<double>(0.0, 2.0 * kPi)(rng);
  const double c = std::cos(t), s = std::sin(t);
  Mat22 R;
  if (std::uniform_int_distribution<int>(0, 1)(rng) == 1)
    R << c, s, s, -c;
  else
    R << c, -s, s, c;
  return R;
}

Mat32 gaussian32(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat32 F;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) F(i, j) = g(rng);
  return F;
}

Mat32 embed_invariants(const InvariantPoint& x) { return diag_embed(x.lamM, x.delta / x.lamM); }

}  // namespace

void CheckResult::record(double violation, const std::vector<double>& point) {
  ++samples;
  if (std::isnan(violation)) violation = kInf;
  if (violation > worst_violation) {
    worst_violation = violation;
    worst_point = point;
  }
}

void CheckResult::merge(const CheckResult& other) {
  samples += other.samples;
  if (other.worst_violation > worst_violation) {
    worst_violation = other.worst_violation;
    worst_point = other.worst_point;
  }
}

void CheckResult::finish() { pass = samples > 0 && worst_violation <= tolerance; }

void finalize_report(SuiteReport& report) {
  report.samples = 0;
  report.pass = true;
  double worst_excess = -kInf;
  for (CheckResult& c : report.checks) {
    c.finish();
    report.samples += c.samples;
    report.pass = report.pass && c.pass;
    const double ex = c.worst_violation - c.tolerance;
    if (ex > worst_excess || std::isnan(ex)) {
      worst_excess = std::isnan(ex) ? kInf : ex;
      report.worst_violation = c.worst_violation;
      report.tolerance = c.tolerance;
      report.worst_check = c.id;
      report.worst_point = c.worst_point;
    }
  }
}

double suite_lam_max(const MaterialParams& p) { return 3.0 * std::cbrt(p.r); }

InvariantPoint region_point(Region region, double u, double v, const MaterialParams& p, double margin) {
  const AnisotropyPowers a(p.r);
  const double lam_max = suite_lam_max(p);
  u = margin + (1.0 - 2.0 * margin) * u;
  v = margin + (1.0 - 2.0 * margin) * v;
  switch (region) {
    case Region::L: {
      const double lam = a.cbrt * u;
      return {lam, v * std::min(lam * lam, a.sixth)};
    }
    case Region::W: {
      const double lam = a.cbrt + (lam_max - a.cbrt) * u;
      return {lam, v * std::sqrt(lam)};
    }
    case Region::S: {
      const double lam = a.cbrt + (lam_max - a.cbrt) * u;
      const double lo = std::sqrt(lam), hi = lam * lam / a.sqrt;
      return {lam, lo + (hi - lo) * v};
    }
    case Region::M: {
      const double lam_lo = std::sqrt(a.sixth);
      const double lam = lam_lo + (lam_max - lam_lo) * u;
      const double lo = std::max(a.sixth, lam * lam / a.sqrt), hi = lam * lam;
      return {lam, lo + (hi - lo) * v};
    }
    case Region::Invalid:
      break;
  }
  throw InvalidInput("region_point: no sampling map for region Invalid");
}

double membrane_growth_constant(const MaterialParams& p) {
  return std::max({4.0 * std::cbrt(p.r * p.r) / p.mu, 1.5 * p.mu, p.mu * std::cbrt(p.r), 1.0});
}

double entropic_growth_constant(const MaterialParams& p) {
  return std::max({2.0 * std::cbrt(p.r * p.r) / p.mu, 1.5 * p.mu, 0.5 * p.mu * std::cbrt(p.r), 1.0});
}

SuiteReport verify_appendix_A(const MaterialParams& p, int grid_n) {
  p.validate();
  if (!(p.r > 1.0)) throw InvalidInput("appendixA suite requires r > 1");
  if (grid_n < 2) throw InvalidInput("appendixA suite requires grid_n >= 2");
  constexpr double tol = 1e-12;
  const AnisotropyPowers a(p.r);
  const double r = p.r;
  const double lam_max = suite_lam_max(p);
  const std::vector<double> u = unit_grid(grid_n);
  const std::vector<double> u1 = unit_grid(grid_n * grid_n);
  // Brackets of the energies: value = (mu/2)(r^(1/3) bracket - 3).
  auto wrinkle = [&](double lam) { return lam * lam / r + 2.0 / lam; };
  auto micro = [&](double d) { return 2.0 * d / a.sqrt + 1.0 / (d * d); };
  auto tilted_minor = [&](double lm) { return lm * lm + 2.0 / (a.sqrt * lm); };

  SuiteReport rep;
  rep.suite_name = "appendixA";
  // Relaxed energy against each branch over the four regions.
  std::vector<CheckResult> branch = {make_check("relaxed_le_director_in_plane", tol),
                                     make_check("relaxed_le_director_normal", tol),
                                     make_check("relaxed_le_director_tilted", tol)};
  run_indexed(branch, 4 * u.size(), [&](std::size_t idx, std::vector<CheckResult>& c) {
    const Region region = kRegions[idx / u.size()];
    const double ui = u[idx % u.size()];
    for (double vj : u) {
      const InvariantPoint x = region_point(region, ui, vj, p);
      const double w = psi(x.lamM, x.delta, p);
      const std::vector<double> pt = {x.lamM, x.delta};
      c[0].record(excess(w, w2d_director_in_plane(x.lamM, x.delta, p)), pt);
      c[1].record(excess(w, w2d_director_normal(x.lamM, x.delta, p)), pt);
      // Outside its gate the tilted branch is +infinity and the bound is trivial.
      c[2].record(excess(w, w2d_director_tilted(x.lamM, x.delta, p)), pt);
    }
  });
  // The gate lamM * delta in [r^(-1/2), r^(1/2)] is a thin band for r near 1;
  // sweep it directly: lamM * delta = g, lamM from g^(1/3) (delta <= lamM^2).
  run_indexed(branch, u.size(), [&](std::size_t i, std::vector<CheckResult>& c) {
    const double g = 1.0 / a.sqrt + (a.sqrt - 1.0 / a.sqrt) * u[i];
    const double lam_lo = std::cbrt(g);
    for (double vj : u) {
      const double lam = lam_lo + (std::max(lam_max, 2.0 * lam_lo) - lam_lo) * vj;
      const double d = g / lam;
      c[2].record(excess(psi(lam, d, p), w2d_director_tilted(lam, d, p)), {lam, d});
    }
  });

  std::vector<CheckResult> reduced = {
      make_check("wrinkle_le_normal_over_thin_band", tol),
      make_check("wrinkle_le_normal_at_critical_thickness", tol),
      make_check("wrinkle_le_tilted_over_minor_stretch", tol),
      make_check("microstructure_le_tilted_over_minor_stretch", tol),
      make_check("microstructure_le_tilted_at_minor_sqrt_delta", tol),
      make_check("microstructure_le_tilted_at_minor_delta_sq", tol),
      make_check("substituted_polynomial_nonnegative", tol),
      make_check("substitution_matches_original", tol),
      make_check("relaxed_equals_in_plane_on_wrinkle_solid_edge", tol)};
  run_indexed(reduced, u.size(), [&](std::size_t i, std::vector<CheckResult>& c) {
    const double ui = u[i];
    // lamM > r^(1/3), delta <= r^(-1/2) / lamM.
    {
      const double lam = a.cbrt + (lam_max - a.cbrt) * ui;
      for (double vj : u) {
        const double d = vj / (a.sqrt * lam);
        c[0].record(excess(wrinkle(lam), lam * lam + d * d / (lam * lam) + 1.0 / (r * d * d)),
                    {lam, d});
      }
    }
    // lamM > r^(1/3), lamm in (r^(-1/2), r^(1/2)) / lamM^2.
    {
      const double lam = a.cbrt + (lam_max - a.cbrt) * ui;
      const double lo = 1.0 / (a.sqrt * lam * lam), hi = a.sqrt / (lam * lam);
      for (double vj : u) {
        const double lm = lo + (hi - lo) * vj;
        c[2].record(excess(wrinkle(lam), tilted_minor(lm)), {lam, lm});
      }
    }
    // delta in (r^(1/6), r^(1/3)), lamm in (r^(-1/2) delta^2, delta^(1/2)].
    {
      const double d = a.sixth + (a.cbrt - a.sixth) * ui;
      const double lo = d * d / a.sqrt, hi = std::sqrt(d);
      for (double vj : u) {
        const double lm = lo + (hi - lo) * vj;
        c[3].record(excess(micro(d), tilted_minor(lm)), {d, lm});
      }
    }
    // One-dimensional forms on grid_n^2 points.
    for (std::size_t k = i * u.size(); k < (i + 1) * u.size(); ++k) {
      const double s = u1[k];
      const double lam = a.cbrt + (lam_max - a.cbrt) * s;
      c[1].record(excess(wrinkle(lam), lam * lam + 2.0 / (lam * a.sqrt)), {lam});

      const double d = a.sixth + (a.cbrt - a.sixth) * s;
      const double rhs_sqrt = d + 2.0 / (a.sqrt * std::sqrt(d));
      c[4].record(excess(micro(d), rhs_sqrt), {d});
      c[5].record(excess(micro(d), d * d * d * d / r + 2.0 / (d * d)), {d});

      // y = delta^(3/2) turns the first bound into a quadratic in y.
      const double y = std::pow(d, 1.5);
      const double poly = y * y * (a.sqrt - 2.0) + 2.0 * y - a.sqrt;
      c[6].record(excess(0.0, poly), {y});
      const double original = a.sqrt * d * d * (rhs_sqrt - micro(d));
      const double scale = std::max({1.0, std::abs(poly), a.sqrt * d * d * rhs_sqrt});
      c[7].record(std::abs(poly - original) / scale, {d, y});

      const double edge_delta = std::sqrt(lam);
      const double w = psi(lam, edge_delta, p);
      c[8].record(rel_diff(w, w2d_director_in_plane(lam, edge_delta, p)), {lam, edge_delta});
    }
  });

  rep.checks = branch;
  rep.checks.insert(rep.checks.end(), reduced.begin(), reduced.end());
  for (const CheckResult& c : rep.checks) rep.coverage.push_back(c.id);
  finalize_report(rep);
  return rep;
}

SuiteReport verify_stress_identities(const MaterialParams& p, int n_samples, std::uint64_t seed) {
  p.validate();
  if (n_samples < 1) throw InvalidInput("stress suite requires n_samples >= 1");
  struct Sample {
    Region region;
    Mat32 F;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Sample> samples;
  for (Region region : kRegions) {
    for (int k = 0; k < n_samples; ++k) {
      const double uu = unif(rng), vv = unif(rng);
      const InvariantPoint x = region_point(region, uu, vv, p, 0.02);
      const Mat33 Q = random_orthogonal3(rng);
      const Mat22 R = random_orthogonal2(rng);
      samples.push_back({region, Q * embed_invariants(x) * R});
    }
  }

  SuiteReport rep;
  rep.suite_name = "stress";
  rep.checks = {make_check("stress_equals_gradient_times_transpose", 1e-5),
                make_check("measure_average_of_gradient", 1e-4),
                make_check("measure_average_of_stress", 1e-4)};
  const W2DEvaluator W(p);
  run_indexed(rep.checks, samples.size(), [&](std::size_t i, std::vector<CheckResult>& c) {
    const Mat32& F = samples[i].F;
    const SingularData sd = svd32(F);
    const std::vector<double> pt = {sd.lamM, sd.delta};
    const StressState st = stress_mem(F, p);
    const Mat32 g = grad_Wmem_fd(F, p);
    c[0].record(rel_diff(Mat33(g * F.transpose()), st.sigma), pt);

    const DiscreteYoungMeasure nu = young_measure_for(F, p);
    Mat32 avg_grad = Mat32::Zero();
    Mat33 avg_stress = Mat33::Zero();
    for (const Atom& atom : nu.atoms) {
      const Mat32& G = atom.matrix;
      const Mat32 gG = central_difference(W, G, default_fd_step(G));
      avg_grad += atom.weight * gG;
      avg_stress += atom.weight * gG * G.transpose();
    }
    c[1].record(rel_diff(avg_grad, g), pt);
    c[2].record(rel_diff(avg_stress, st.sigma), pt);
  });
  rep.coverage = {"stress_equals_gradient_times_transpose", "measure_average_of_gradient",
                  "measure_average_of_stress"};
  finalize_report(rep);
  return rep;
}

SuiteReport verify_envelope_chain(const MaterialParams& p, int n_samples, std::uint64_t seed,
                                  const OracleConfig& cfg) {
  p.validate();
  if (n_samples < 1) throw InvalidInput("envelope suite requires n_samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Mat32> points;
  for (Region region : kRegions) {
    for (int k = 0; k < n_samples; ++k) {
      const double uu = unif(rng), vv = unif(rng);
      const InvariantPoint x = region_point(region, uu, vv, p);
      const Mat33 Q = random_orthogonal3(rng);
      const Mat22 R = random_orthogonal2(rng);
      points.push_back(Q * embed_invariants(x) * R);
    }
  }

  SuiteReport rep;
  rep.suite_name = "envelope";
  CheckResult below = make_check("relaxed_le_unrelaxed", 1e-12);
  CheckResult gap = make_check("oracle_minus_relaxed_le_5e-3", 5e-3);
  CheckResult floor = make_check("relaxed_minus_oracle_le_1e-9", 1e-9);
  CheckResult witness = make_check("oracle_value_equals_witness_pairing", 1e-12);
  for (const Mat32& F : points) {
    const SingularData sd = svd32(F);
    const std::vector<double> pt = {sd.lamM, sd.delta};
    const double wmem = energy_Wmem(F, p).energy;
    below.record(excess(wmem, energy_W2D(F, p)), pt);
    const OracleResult res = relax_lamination(F, p, cfg);
    gap.record(res.value - wmem, pt);
    floor.record(wmem - res.value, pt);
    const double pairing =
        measure_pairing(res.best_measure, [&](const Mat32& G) { return energy_W2D(G, p); });
    witness.record(rel_diff(pairing, res.value), pt);
  }
  rep.checks = {below, gap, floor, witness};
  for (const CheckResult& c : rep.checks) rep.coverage.push_back(c.id);
  finalize_report(rep);
  return rep;
}

SuiteReport verify_frame_and_growth(const MaterialParams& p, int n_samples, std::uint64_t seed) {
  p.validate();
  if (n_samples < 1) throw InvalidInput("frame suite requires n_samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  struct Sample {
    Mat32 F;
    Mat33 Q;
    Mat22 R;
    Mat33 F3;
    Mat33 Q3;
    Mat33 R3;
  };
  std::vector<Sample> samples(n_samples);
  for (Sample& s : samples) {
    s.F = std::exp(std::log(10.0) * (2.0 * unif(rng) - 1.0)) * gaussian32(rng);
    s.Q = random_orthogonal3(rng);
    s.R = random_orthogonal2(rng);
    const double a = std::exp(std::log(10.0) * (2.0 * unif(rng) - 1.0));
    const double b = std::exp(std::log(10.0) * (2.0 * unif(rng) - 1.0));
    s.F3 = random_rotation3(rng) * Eigen::Vector3d(a, b, 1.0 / (a * b)).asDiagonal() *
           random_rotation3(rng);
    s.Q3 = random_rotation3(rng);
    s.R3 = random_rotation3(rng);
  }
  const double norms[] = {1e-2, 1.0, 1e2};
  std::vector<Mat32> directions(n_samples);
  for (Mat32& d : directions) d = gaussian32(rng).normalized();

  SuiteReport rep;
  rep.suite_name = "frame";
  rep.checks = {make_check("unrelaxed_frame_indifference", 1e-12),
                make_check("relaxed_frame_indifference", 1e-12),
                make_check("region_frame_indifference", 0.0),
                make_check("entropic_frame_indifference", 1e-12),
                make_check("relaxed_growth_lower", 1e-12),
                make_check("relaxed_growth_upper", 1e-12),
                make_check("entropic_growth_lower", 1e-12),
                make_check("entropic_growth_upper", 1e-12)};
  const double cm = membrane_growth_constant(p);
  const double ce = entropic_growth_constant(p);
  run_indexed(rep.checks, samples.size(), [&](std::size_t i, std::vector<CheckResult>& c) {
    const Sample& s = samples[i];
    const Mat32 G = s.Q * s.F * s.R;
    const std::vector<double> pt(s.F.data(), s.F.data() + 6);
    c[0].record(rel_diff(energy_W2D(G, p), energy_W2D(s.F, p)), pt);
    const MembraneEval e0 = energy_Wmem(s.F, p), e1 = energy_Wmem(G, p);
    c[1].record(rel_diff(e1.energy, e0.energy), pt);
    c[2].record(e0.region == e1.region ? 0.0 : 1.0, pt);
    const Mat33 G3 = s.Q3 * s.F3 * s.R3;
    const double w3 = energy_W3D(s.F3, p);
    if (std::isfinite(w3)) {
      const std::vector<double> pt3(s.F3.data(), s.F3.data() + 9);
      c[3].record(rel_diff(energy_W3D(G3, p), w3), pt3);
      const double n2 = s.F3.squaredNorm();
      c[6].record(excess(n2 / ce - ce, w3), pt3);
      c[7].record(excess(w3, ce * (1.0 + n2)), pt3);
    }
    for (double n : norms) {
      const Mat32 X = n * directions[i];
      const double w = energy_Wmem(X, p).energy;
      const double n2 = X.squaredNorm();
      const std::vector<double> ptx(X.data(), X.data() + 6);
      c[4].record(excess(n2 / cm - cm, w), ptx);
      c[5].record(excess(w, cm * (1.0 + n2)), ptx);
    }
  });
  for (const CheckResult& c : rep.checks) rep.coverage.push_back(c.id);
  finalize_report(rep);
  return rep;
}

}  // namespace nemem
