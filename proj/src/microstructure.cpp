#include "nemem/microstructure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nemem/errors.hpp"
#include "nemem/membrane.hpp"

namespace nemem {

namespace {

constexpr double kPruneTol = 1e-14;
// Relative slack on construction preconditions that hold with equality
// at region boundaries.
constexpr double kPreSlack = 1e-12;

bool le_slack(double x, double y) { return x <= y + kPreSlack * std::max(1.0, std::abs(y)); }

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

void append_scaled(DiscreteYoungMeasure& out, const DiscreteYoungMeasure& in, double w) {
  for (const Atom& atom : in.atoms) out.atoms.push_back({w * atom.weight, atom.matrix});
  for (const Split& s : in.tree) out.tree.push_back(s);
}

}  // namespace

Split make_split(int level, double theta, const Mat32& plus, const Mat32& minus) {
  Split s;
  s.level = level;
  s.theta = theta;
  s.plus = plus;
  s.minus = minus;
  const SingularData sd = svd32(plus - minus);
  s.magnitude = sd.lamM;
  if (sd.lamM > 0.0) {
    s.a = sd.e1;
    s.b = sd.f1;
  }
  return s;
}

Mat32 DiscreteYoungMeasure::barycenter() const {
  Mat32 sum = Mat32::Zero();
  for (const Atom& atom : atoms) sum += atom.weight * atom.matrix;
  return sum;
}

double DiscreteYoungMeasure::total_weight() const {
  double sum = 0.0;
  for (const Atom& atom : atoms) sum += atom.weight;
  return sum;
}

void DiscreteYoungMeasure::normalize() {
  std::vector<Atom> kept;
  for (const Atom& atom : atoms) {
    if (atom.weight < kPruneTol) continue;
    auto same = std::find_if(kept.begin(), kept.end(),
                             [&](const Atom& k) { return k.matrix == atom.matrix; });
    if (same != kept.end())
      same->weight += atom.weight;
    else
      kept.push_back(atom);
  }
  double total = 0.0;
  for (const Atom& atom : kept) total += atom.weight;
  if (total > 0.0)
    for (Atom& atom : kept) atom.weight /= total;
  atoms = std::move(kept);
}

DiscreteYoungMeasure DiscreteYoungMeasure::conjugated(const Mat33& Q, const Mat22& R) const {
  DiscreteYoungMeasure out = *this;
  for (Atom& atom : out.atoms) atom.matrix = Q * atom.matrix * R;
  for (Split& s : out.tree) {
    s.plus = Q * s.plus * R;
    s.minus = Q * s.minus * R;
    s.a = Q * s.a;
    s.b = R.transpose() * s.b;
  }
  return out;
}

DiscreteYoungMeasure DiscreteYoungMeasure::dirac(const Mat32& G) {
  DiscreteYoungMeasure nu;
  nu.atoms.push_back({1.0, G});
  return nu;
}

DiscreteYoungMeasure laminate_wrinkle(double q, double d, double deltaBar) {
  if (!(std::isfinite(q) && std::isfinite(d) && std::isfinite(deltaBar)))
    throw InvalidInput("laminate_wrinkle: arguments must be finite");
  if (!(q > 0.0)) throw InvalidInput("laminate_wrinkle: requires q > 0, got q = " + fmt(q));
  if (!(d > 0.0))
    throw InvalidInput("laminate_wrinkle: requires d > 0, got d = " + fmt(d));
  if (!(deltaBar >= 0.0))
    throw InvalidInput("laminate_wrinkle: requires deltaBar >= 0, got " + fmt(deltaBar));
  if (!le_slack(d, q * q))
    throw InvalidInput("laminate_wrinkle: requires d <= q^2, got d = " + fmt(d) + ", q = " + fmt(q));
  if (!le_slack(deltaBar, d))
    throw InvalidInput("laminate_wrinkle: requires deltaBar <= d, got deltaBar = " + fmt(deltaBar) +
                       ", d = " + fmt(d));
  deltaBar = std::min(deltaBar, d);

  const double theta = 0.5 * (1.0 + deltaBar / d);
  const Mat32 plus = diag_embed(q, d / q);
  const Mat32 minus = diag_embed(q, -d / q);
  DiscreteYoungMeasure nu;
  nu.atoms = {{theta, plus}, {1.0 - theta, minus}};
  nu.tree.push_back(make_split(1, theta, plus, minus));
  nu.normalize();
  return nu;
}

double shear_amplitude_sq(double q, double d, double c) {
  const double dc2 = (d == 0.0) ? 0.0 : (d * d) / (c * c);
  return std::max(0.0, (q * q - dc2) * (q * q - c * c) / (q * q));
}

DiscreteYoungMeasure laminate_shear(double q, double d, double c) {
  if (!(std::isfinite(q) && std::isfinite(d) && std::isfinite(c)))
    throw InvalidInput("laminate_shear: arguments must be finite");
  if (!(d >= 0.0)) throw InvalidInput("laminate_shear: requires d >= 0, got d = " + fmt(d));
  if (!(q > 0.0)) throw InvalidInput("laminate_shear: requires q > 0, got q = " + fmt(q));
  const bool zero_case = (c == 0.0 && d == 0.0);
  if (!zero_case) {
    if (!le_slack(std::sqrt(d), c) || !le_slack(c, q))
      throw InvalidInput("laminate_shear: requires sqrt(d) <= c <= q, got q = " + fmt(q) +
                         ", d = " + fmt(d) + ", c = " + fmt(c));
  }
  const double xi = std::sqrt(shear_amplitude_sq(q, d, c));
  const double lower = zero_case ? 0.0 : d / c;
  Mat32 plus = Mat32::Zero(), minus = Mat32::Zero();
  plus << c, xi, 0.0, lower, 0.0, 0.0;
  minus << c, -xi, 0.0, lower, 0.0, 0.0;
  DiscreteYoungMeasure nu;
  nu.atoms = {{0.5, plus}, {0.5, minus}};
  nu.tree.push_back(make_split(1, 0.5, plus, minus));
  nu.normalize();
  return nu;
}

DiscreteYoungMeasure young_measure_for(const Mat32& Ft, const MaterialParams& p) {
  const SingularData sd = svd32(Ft);
  const double lamM = sd.lamM;
  const Region region = classify(lamM, sd.delta, p);
  if (region == Region::Invalid)
    throw OutOfDomain("young_measure_for: delta > lamM^2 is not realizable");
  const double delta = std::min(sd.delta, lamM * lamM);
  const AnisotropyPowers pw(p.r);

  DiscreteYoungMeasure diag;
  switch (region) {
    case Region::S:
      return DiscreteYoungMeasure::dirac(Ft);
    case Region::W:
      diag = laminate_wrinkle(lamM, std::sqrt(lamM), delta);
      break;
    case Region::M:
      diag = laminate_shear(pw.quarter * std::sqrt(delta), delta, lamM);
      break;
    case Region::L: {
      const DiscreteYoungMeasure outer = laminate_shear(pw.cbrt, delta, lamM);
      diag.tree = outer.tree;
      for (const Atom& atom : outer.atoms) {
        const SingularData inner_sd = svd32(atom.matrix);
        DiscreteYoungMeasure inner =
            laminate_wrinkle(inner_sd.lamM, pw.sixth, std::min(inner_sd.delta, pw.sixth));
        for (Split& s : inner.tree) s.level = 2;
        append_scaled(diag, inner.conjugated(inner_sd.Q, inner_sd.R), atom.weight);
      }
      diag.normalize();
      break;
    }
    case Region::Invalid:
      break;
  }
  return diag.conjugated(sd.Q, sd.R);
}

SupportReport check_support_M(const DiscreteYoungMeasure& nu, double deltaBar, const MaterialParams& p) {
  SupportReport rep;
  const double lam_target = std::sqrt(std::sqrt(p.r)) * std::sqrt(std::max(0.0, deltaBar));
  Vec3 normal0 = Vec3::Zero();
  bool have_normal = false;
  for (std::size_t i = 0; i < nu.atoms.size(); ++i) {
    const Mat32& G = nu.atoms[i].matrix;
    const SingularData sd = svd32(G);
    const std::string tag = "atom " + std::to_string(i) + ": ";
    if (std::abs(sd.lamM - lam_target) > kSupportTol * std::max(1.0, lam_target))
      rep.violations.push_back(tag + "lamM = " + fmt(sd.lamM) + ", expected " + fmt(lam_target));
    if (std::abs(sd.delta - deltaBar) > kSupportTol * std::max(1.0, deltaBar))
      rep.violations.push_back(tag + "delta = " + fmt(sd.delta) + ", expected " + fmt(deltaBar));
    const Vec3 a = adj2(G);
    if (!(a.norm() > 0.0)) {
      rep.violations.push_back(tag + "rank-deficient, no deformed-plane normal");
      continue;
    }
    const Vec3 normal = a / a.norm();
    if (!have_normal) {
      normal0 = normal;
      have_normal = true;
    } else if ((normal - normal0).norm() > kSupportTol) {
      rep.violations.push_back(tag + "deformed-plane normal differs from atom 0 by " +
                               fmt((normal - normal0).norm()));
    }
  }
  rep.pass = rep.violations.empty();
  return rep;
}

SupportReport check_support_W(const DiscreteYoungMeasure& nu, const Mat32& Ft) {
  SupportReport rep;
  const SingularData target = svd32(Ft);
  const double lbar = target.lamM;
  const double dbar = std::sqrt(lbar);
  const double scale = std::max(1.0, lbar);
  for (std::size_t i = 0; i < nu.atoms.size(); ++i) {
    const Mat32& G = nu.atoms[i].matrix;
    const SingularData sd = svd32(G);
    const std::string tag = "atom " + std::to_string(i) + ": ";
    if (std::abs(sd.lamM - lbar) > kSupportTol * scale)
      rep.violations.push_back(tag + "lamM = " + fmt(sd.lamM) + ", expected " + fmt(lbar));
    if (std::abs(sd.delta - dbar) > kSupportTol * std::max(1.0, dbar))
      rep.violations.push_back(tag + "delta = " + fmt(sd.delta) + ", expected " + fmt(dbar));
    const double mis = (G * target.f1 - lbar * target.e1).norm();
    if (mis > kSupportTol * scale)
      rep.violations.push_back(tag + "|G f_M - lamM e_M| = " + fmt(mis));
  }
  rep.pass = rep.violations.empty();
  return rep;
}

}  // namespace nemem
